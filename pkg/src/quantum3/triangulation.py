"""Ordered generalized triangulations of closed oriented 3-manifolds.

A tetrahedron is a strictly increasing 4-tuple of vertex-class indices, so its
local vertices ``0 < 1 < 2 < 3`` follow the global vertex order. Local face
``k`` is the triangle opposite local vertex ``k``. Glued faces are identified
by the order-preserving bijection of their vertices, which must match vertex
classes.

``orientation[t]`` is ``+1`` when the vertex-order orientation of tetrahedron
``t`` agrees with the manifold and ``-1`` otherwise. Face ``k`` of ``t``
inherits the boundary orientation ``orientation[t] * (-1)**k`` relative to its
own vertex order; glued faces must inherit opposite orientations.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

# local edges in 6j order: (01) (02) (12) (23) (13) (03)
TET_EDGES = ((0, 1), (0, 2), (1, 2), (2, 3), (1, 3), (0, 3))


class TriangulationError(ValueError):
    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class MoveError(ValueError):
    """Raised when a Pachner move is not applicable."""


def face_vertices(k: int) -> tuple[int, int, int]:
    return tuple(v for v in range(4) if v != k)


@dataclass(frozen=True, eq=False)
class Triangulation:
    vertices: tuple[str, ...]
    tetra: tuple[tuple[int, int, int, int], ...]
    gluing: dict  # (tet, face) -> (tet, face), symmetric
    orientation: tuple[int, ...]

    @property
    def num_tetrahedra(self) -> int:
        return len(self.tetra)

    @cached_property
    def _edge_data(self):
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t in range(len(self.tetra)):
            for e in TET_EDGES:
                parent[(t, e)] = (t, e)
        for (t, f), (u, g) in self.gluing.items():
            fa, fb = face_vertices(f), face_vertices(g)
            for a, b in itertools.combinations(range(3), 2):
                x, y = find((t, (fa[a], fa[b]))), find((u, (fb[a], fb[b])))
                if x != y:
                    parent[max(x, y)] = min(x, y)
        classes: dict = defaultdict(list)
        for key in sorted(parent):
            classes[find(key)].append(key)
        edges = sorted(classes.values())
        lookup = {}
        for idx, inc in enumerate(edges):
            for key in inc:
                lookup[key] = idx
        return edges, lookup

    @property
    def edges(self) -> list[list[tuple[int, tuple[int, int]]]]:
        """Edge classes as lists of ``(tet, (local_u, local_v))`` incidences."""
        return self._edge_data[0]

    def edge_index(self, tet: int, local_edge: tuple[int, int]) -> int:
        return self._edge_data[1][(tet, local_edge)]

    def tet_edges(self, tet: int) -> tuple[int, ...]:
        """Edge classes of a tetrahedron in 6j order (01, 02, 12, 23, 13, 03)."""
        return tuple(self.edge_index(tet, e) for e in TET_EDGES)

    def edge_endpoints(self, e: int) -> tuple[int, int]:
        t, (u, v) = self.edges[e][0]
        return self.tetra[t][u], self.tetra[t][v]

    @cached_property
    def triangles(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        seen = set()
        out = []
        for a in sorted(self.gluing):
            if a in seen:
                continue
            b = self.gluing[a]
            seen.update((a, b))
            out.append((a, b))
        return out

    def triangle_edges(self, tri: int) -> tuple[int, int, int]:
        """Edge classes (01), (12), (02) of a triangle in its local vertex order."""
        t, f = self.triangles[tri][0]
        v = face_vertices(f)
        return (self.edge_index(t, (v[0], v[1])), self.edge_index(t, (v[1], v[2])),
                self.edge_index(t, (v[0], v[2])))

    def counts(self) -> dict[str, int]:
        return {"vertices": len(self.vertices), "edges": len(self.edges),
                "triangles": len(self.triangles), "tetrahedra": len(self.tetra)}

    def euler_characteristic(self) -> int:
        c = self.counts()
        return c["vertices"] - c["edges"] + c["triangles"] - c["tetrahedra"]

    def vertex_degree(self, v: int) -> list[int]:
        return [t for t, tet in enumerate(self.tetra) if v in tet]

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "tetrahedra": [[self.vertices[v] for v in tet] for tet in self.tetra],
            "gluings": [[a[0], a[1], b[0], b[1]] for a, b in self.triangles],
            "orientation": ["+" if s > 0 else "-" for s in self.orientation],
        }


def build(vertices, tetra, gluings, orientation) -> Triangulation:
    """Validate raw data and return a :class:`Triangulation`.

    ``tetra`` entries may be vertex names or indices into ``vertices``;
    ``gluings`` is a list of ``[tet, face, tet, face]``. Raises
    :class:`TriangulationError` listing every violation found.
    """
    vertices = tuple(str(v) for v in vertices)
    errors: list[str] = []
    if len(set(vertices)) != len(vertices):
        errors.append("duplicate vertex names")
    index = {name: i for i, name in enumerate(vertices)}
    tets = []
    for t, raw in enumerate(tetra):
        if len(raw) != 4:
            errors.append(f"tetrahedron {t}: expected 4 vertices, got {len(raw)}")
            continue
        try:
            ids = [x if isinstance(x, int) and not isinstance(x, bool) else index[str(x)] for x in raw]
        except KeyError as exc:
            errors.append(f"tetrahedron {t}: unknown vertex {exc.args[0]!r}")
            continue
        if any(not 0 <= i < len(vertices) for i in ids):
            errors.append(f"tetrahedron {t}: vertex index out of range")
            continue
        if len(set(ids)) != 4:
            errors.append(f"tetrahedron {t}: repeated vertex class {[vertices[i] for i in ids]}")
        elif ids != sorted(ids):
            errors.append(f"tetrahedron {t}: vertices not listed in increasing vertex order")
        tets.append(tuple(ids))
    if errors:
        raise TriangulationError(errors)
    n = len(tets)
    signs = []
    for t, s in enumerate(orientation):
        if s in ("+", 1, "+1"):
            signs.append(1)
        elif s in ("-", -1, "-1"):
            signs.append(-1)
        else:
            errors.append(f"orientation {t}: expected '+' or '-', got {s!r}")
    if len(signs) != n and not errors:
        errors.append(f"orientation has {len(signs)} entries for {n} tetrahedra")
    glue: dict = {}
    for idx, g in enumerate(gluings):
        if len(g) != 4:
            errors.append(f"gluing {idx}: expected [tet, face, tet, face]")
            continue
        a, b = (int(g[0]), int(g[1])), (int(g[2]), int(g[3]))
        if not (0 <= a[0] < n and 0 <= b[0] < n and 0 <= a[1] < 4 and 0 <= b[1] < 4):
            errors.append(f"gluing {idx}: index out of range {list(g)}")
            continue
        if a == b:
            errors.append(f"gluing {idx}: face {a} glued to itself")
            continue
        for x in (a, b):
            if x in glue:
                errors.append(f"gluing {idx}: face {x} glued twice")
        glue[a], glue[b] = b, a
        va = [tets[a[0]][v] for v in face_vertices(a[1])]
        vb = [tets[b[0]][v] for v in face_vertices(b[1])]
        if va != vb:
            errors.append(f"gluing {idx}: order-preserving map sends vertex classes "
                          f"{[vertices[v] for v in va]} to {[vertices[v] for v in vb]}")
    for t in range(n):
        for f in range(4):
            if (t, f) not in glue:
                errors.append(f"unglued face {f} of tetrahedron {t}")
    if not errors and len(signs) == n:
        for (t, f), (u, g) in glue.items():
            if (t, f) < (u, g) and signs[t] * (-1) ** f != -signs[u] * (-1) ** g:
                errors.append(f"orientation is not coherent across face {f} of tetrahedron {t} "
                              f"and face {g} of tetrahedron {u}")
    if errors:
        raise TriangulationError(errors)
    return Triangulation(vertices, tuple(tets), glue, tuple(signs))


def orient(n: int, gluing: dict, seed_signs: dict | None = None) -> list[int]:
    """Coherent orientation by propagation; raises if the complex is not orientable."""
    signs: list[int | None] = [None] * n
    for t, s in (seed_signs or {}).items():
        signs[t] = s
    order = [t for t in range(n) if signs[t] is not None] + [t for t in range(n) if signs[t] is None]
    for start in order:
        if signs[start] is None:
            signs[start] = 1
        queue = deque([start])
        while queue:
            t = queue.popleft()
            for f in range(4):
                u, g = gluing[(t, f)]
                want = -signs[t] * (-1) ** f * (-1) ** g
                if signs[u] is None:
                    signs[u] = want
                    queue.append(u)
                elif signs[u] != want:
                    raise TriangulationError(["complex is not orientable"])
    return signs


def _assemble(vertices, tets, gluing, signs) -> Triangulation:
    flat = [[a[0], a[1], b[0], b[1]] for a, b in gluing.items() if a < b]
    return build(vertices, tets, flat, signs)


# ---------------------------------------------------------------------------
# Pachner moves


def _replace(tri: Triangulation, removed: list[int], new_tets, outer_map: dict, internal, new_signs,
             vertices=None) -> Triangulation:
    """Swap ``removed`` tetrahedra for ``new_tets`` and rewire gluings.

    ``outer_map`` sends old boundary faces of the removed region to faces of new
    tetrahedra (numbered ``0..len(new_tets)-1``); ``internal`` lists gluings
    among the new tetrahedra.
    """
    keep = [t for t in range(tri.num_tetrahedra) if t not in set(removed)]
    renum = {t: i for i, t in enumerate(keep)}
    base = len(keep)

    def new_face(old):
        if old in outer_map:
            t, f = outer_map[old]
            return (base + t, f)
        return (renum[old[0]], old[1])

    gluing = {}
    for a, b in tri.gluing.items():
        if a[0] in renum or a in outer_map:
            gluing[new_face(a)] = new_face(b)
    for (t, f), (u, g) in internal:
        gluing[(base + t, f)] = (base + u, g)
        gluing[(base + u, g)] = (base + t, f)
    tets = [tri.tetra[t] for t in keep] + [tuple(x) for x in new_tets]
    signs = [tri.orientation[t] for t in keep] + list(new_signs)
    return _assemble(vertices if vertices is not None else tri.vertices, tets, gluing, signs)


def pachner_23(tri: Triangulation, triangle: int) -> Triangulation:
    """Replace the two tetrahedra meeting in ``triangle`` by three around a new edge."""
    (ta, fa), (tb, fb) = tri.triangles[triangle]
    if ta == tb:
        raise MoveError(f"triangle {triangle} has both sides in tetrahedron {ta}")
    A, B = tri.tetra[ta], tri.tetra[tb]
    a, b = A[fa], B[fb]
    if a == b:
        raise MoveError(f"order obstruction: apexes of triangle {triangle} share vertex class "
                        f"{tri.vertices[a]}, the new edge would be a loop")
    face = [A[v] for v in face_vertices(fa)]
    new_tets, outer, signs = [], {}, []
    for w in face:
        tet = tuple(sorted({a, b} | (set(face) - {w})))
        i = len(new_tets)
        new_tets.append(tet)
        outer[(ta, A.index(w))] = (i, tet.index(b))
        outer[(tb, B.index(w))] = (i, tet.index(a))
        signs.append(tri.orientation[ta] * (-1) ** (A.index(w) + tet.index(b)))
    internal = []
    for i, j in itertools.combinations(range(3), 2):
        wi, wj = face[i], face[j]
        internal.append(((i, new_tets[i].index(wj)), (j, new_tets[j].index(wi))))
    return _replace(tri, [ta, tb], new_tets, outer, internal, signs)


def pachner_32(tri: Triangulation, edge: int) -> Triangulation:
    """Inverse of :func:`pachner_23` around an edge of degree three."""
    inc = tri.edges[edge]
    tets = [t for t, _ in inc]
    if len(inc) != 3 or len(set(tets)) != 3:
        raise MoveError(f"edge {edge} does not lie in exactly three distinct tetrahedra")
    a, b = tri.edge_endpoints(edge)
    others = [tuple(sorted(set(tri.tetra[t]) - {a, b})) for t in tets]
    xyz = sorted(set().union(*others))
    if len(xyz) != 3 or len(set(others)) != 3:
        raise MoveError(f"edge {edge}: link is not a triangle on three distinct vertex classes")
    # the faces containing the edge must be glued among the three tetrahedra
    for t in tets:
        tet = tri.tetra[t]
        for f in range(4):
            if tet[f] not in (a, b) and tri.gluing[(t, f)][0] not in tets:
                raise MoveError(f"edge {edge}: faces around the edge leave the star")
    A = tuple(sorted([a, *xyz]))
    B = tuple(sorted([b, *xyz]))
    outer, signs = {}, [0, 0]
    for t in tets:
        tet = tri.tetra[t]
        w = (set(xyz) - set(tet)).pop()
        outer[(t, tet.index(b))] = (0, A.index(w))
        outer[(t, tet.index(a))] = (1, B.index(w))
        signs[0] = tri.orientation[t] * (-1) ** (tet.index(b) + A.index(w))
        signs[1] = tri.orientation[t] * (-1) ** (tet.index(a) + B.index(w))
    internal = [((0, A.index(a)), (1, B.index(b)))]
    return _replace(tri, tets, [A, B], outer, internal, signs)


def pachner_14(tri: Triangulation, tet: int) -> Triangulation:
    """Cone a tetrahedron from a new vertex placed last in the vertex order."""
    if not 0 <= tet < tri.num_tetrahedra:
        raise MoveError(f"no tetrahedron {tet}")
    name = _fresh_name(tri.vertices)
    z = len(tri.vertices)
    old = tri.tetra[tet]
    new_tets, outer, signs = [], {}, []
    for k in range(4):
        new_tets.append(tuple(v for v in old if v != old[k]) + (z,))
        outer[(tet, k)] = (k, 3)
        signs.append(tri.orientation[tet] * (-1) ** (3 - k))
    internal = [((k, l - 1), (l, k)) for k, l in itertools.combinations(range(4), 2)]
    return _replace(tri, [tet], new_tets, outer, internal, signs, vertices=tri.vertices + (name,))


def pachner_41(tri: Triangulation, vertex: int) -> Triangulation:
    """Inverse of :func:`pachner_14`: remove a vertex whose star is four tetrahedra."""
    star = tri.vertex_degree(vertex)
    if len(star) != 4:
        raise MoveError(f"vertex {tri.vertices[vertex]} lies in {len(star)} tetrahedra, not 4")
    rest = [tuple(sorted(set(tri.tetra[t]) - {vertex})) for t in star]
    abcd = sorted(set().union(*rest))
    if len(abcd) != 4 or len(set(rest)) != 4:
        raise MoveError(f"vertex {tri.vertices[vertex]}: star is not a cone over a tetrahedron boundary")
    for t in star:
        for f in range(4):
            if tri.tetra[t][f] != vertex and tri.gluing[(t, f)][0] not in star:
                raise MoveError(f"vertex {tri.vertices[vertex]}: star faces leave the star")
    D = tuple(abcd)
    outer, sign = {}, 0
    for t in star:
        tet = tri.tetra[t]
        w = (set(D) - set(tet)).pop()
        outer[(t, tet.index(vertex))] = (0, D.index(w))
        sign = tri.orientation[t] * (-1) ** (tet.index(vertex) + D.index(w))
    shifted = _replace(tri, star, [D], outer, [], [sign])
    # drop the vertex and renumber the classes above it
    keep = [v for v in range(len(tri.vertices)) if v != vertex]
    renum = {v: i for i, v in enumerate(keep)}
    tets = [tuple(renum[v] for v in tet) for tet in shifted.tetra]
    return _assemble([tri.vertices[v] for v in keep], tets, shifted.gluing, shifted.orientation)


def _fresh_name(names) -> str:
    taken = set(names)
    i = len(names)
    while f"v{i}" in taken:
        i += 1
    return f"v{i}"


def applicable_moves(tri: Triangulation) -> dict[str, list[int]]:
    """Targets where each move kind passes its combinatorial preconditions."""
    out: dict[str, list[int]] = {"2-3": [], "3-2": [], "1-4": list(range(tri.num_tetrahedra)), "4-1": []}
    for i, ((ta, fa), (tb, fb)) in enumerate(tri.triangles):
        if ta != tb and tri.tetra[ta][fa] != tri.tetra[tb][fb]:
            out["2-3"].append(i)
    for e, inc in enumerate(tri.edges):
        if len(inc) == 3 and len({t for t, _ in inc}) == 3:
            out["3-2"].append(e)
    for v in range(len(tri.vertices)):
        if len(tri.vertex_degree(v)) == 4:
            out["4-1"].append(v)
    return out


MOVES = {"2-3": pachner_23, "3-2": pachner_32, "1-4": pachner_14, "4-1": pachner_41}


def random_move(tri: Triangulation, rng: random.Random, max_tetrahedra: int = 30):
    """Apply one random applicable move; returns ``(kind, target, new_triangulation)``.

    Refused moves (order obstructions, degenerate stars) are skipped. Above
    ``max_tetrahedra`` only the shrinking moves are sampled when any exist.
    """
    cands = applicable_moves(tri)
    kinds = [k for k in ("2-3", "3-2", "1-4", "4-1") if cands[k]]
    shrinking = [k for k in ("3-2", "4-1") if cands[k]]
    rng.shuffle(kinds)
    if tri.num_tetrahedra > max_tetrahedra and shrinking:
        rng.shuffle(shrinking)
        kinds = shrinking + [k for k in kinds if k not in shrinking]
    for kind in kinds:
        targets = cands[kind][:]
        rng.shuffle(targets)
        for x in targets:
            try:
                return kind, x, MOVES[kind](tri, x)
            except MoveError:
                continue
    raise MoveError("no applicable move")


# ---------------------------------------------------------------------------
# relabeling and isomorphism


def reorder(tri: Triangulation, order) -> Triangulation:
    """Same complex with a new total order on vertex classes (a permutation of names)."""
    order = [str(v) for v in order]
    if sorted(order) != sorted(tri.vertices):
        raise ValueError("new order must be a permutation of the vertex names")
    rank = {name: i for i, name in enumerate(order)}
    perms, tets, signs = [], [], []
    for t, tet in enumerate(tri.tetra):
        perm = sorted(range(4), key=lambda v: rank[tri.vertices[tet[v]]])  # new local -> old local
        perms.append(perm)
        tets.append(tuple(rank[tri.vertices[tet[v]]] for v in perm))
        signs.append(tri.orientation[t] * _parity(perm))
    gluing = {}
    for (t, f), (u, g) in tri.gluing.items():
        gluing[(t, perms[t].index(f))] = (u, perms[u].index(g))
    return _assemble(order, tets, gluing, signs)


def _parity(perm) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def is_isomorphic(t1: Triangulation, t2: Triangulation) -> bool:
    """Isomorphism respecting the vertex orders (classes matched by rank) and orientations."""
    if t1.counts() != t2.counts() or sorted(t1.tetra) != sorted(t2.tetra):
        return False
    if not t1.tetra:
        return True
    seen = set()
    for start in range(t1.num_tetrahedra):
        if start in seen:
            continue
        comp = _component(t1, start)
        seen |= comp
        if not any(_match_from(t1, t2, start, c) for c in range(t2.num_tetrahedra)
                   if t2.tetra[c] == t1.tetra[start]):
            return False
    return True


def _component(tri, start):
    comp, stack = {start}, [start]
    while stack:
        t = stack.pop()
        for f in range(4):
            u = tri.gluing[(t, f)][0]
            if u not in comp:
                comp.add(u)
                stack.append(u)
    return comp


def _match_from(t1, t2, s1, s2) -> bool:
    m = {s1: s2}
    queue = deque([s1])
    while queue:
        t = queue.popleft()
        u = m[t]
        if t1.tetra[t] != t2.tetra[u] or t1.orientation[t] != t2.orientation[u]:
            return False
        for f in range(4):
            a, fa = t1.gluing[(t, f)]
            b, fb = t2.gluing[(u, f)]
            if fa != fb:
                return False
            if a in m:
                if m[a] != b:
                    return False
            else:
                m[a] = b
                queue.append(a)
    return len(set(m.values())) == len(m)


# ---------------------------------------------------------------------------
# file format


def triangulation_from_json(obj: dict, path: str | None = None) -> Triangulation:
    where = f"{path}: " if path else ""
    allowed = {"vertices", "tetrahedra", "gluings", "orientation"}
    if not isinstance(obj, dict):
        raise TriangulationError([f"{where}top level must be an object"])
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise TriangulationError([f"{where}unknown field(s) {unknown}"])
    missing = sorted(allowed - set(obj))
    if missing:
        raise TriangulationError([f"{where}missing field(s) {missing}"])
    try:
        return build(obj["vertices"], obj["tetrahedra"], obj["gluings"], obj["orientation"])
    except TriangulationError as exc:
        raise TriangulationError([where + v for v in exc.violations]) from None


def load_triangulation(path: str | Path) -> Triangulation:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise TriangulationError([f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}"]) from exc
    return triangulation_from_json(obj, str(path))


def save_triangulation(tri: Triangulation, path: str | Path) -> None:
    Path(path).write_text(json.dumps(tri.to_json()) + "\n")


# ---------------------------------------------------------------------------
# standard complexes


def from_cells(cells, classes, order, boundary_pairing=None) -> Triangulation:
    """Assemble a triangulation from tetrahedra given as tuples of geometric points.

    ``classes`` maps each point to its vertex-class name; ``order`` is the
    vertex order on class names. Faces shared by two cells (same point set) are
    glued. Remaining faces are glued through ``boundary_pairing``, a function
    sending a boundary face's point set to its partner's point set together
    with a point map; the induced class map must be the identity.
    """
    rank = {c: i for i, c in enumerate(order)}
    tets, pts = [], []
    for cell in cells:
        p = sorted(cell, key=lambda x: rank[classes[x]])
        pts.append(p)
        tets.append(tuple(rank[classes[x]] for x in p))
    faces = defaultdict(list)
    for t, p in enumerate(pts):
        for f in range(4):
            faces[frozenset(p[v] for v in face_vertices(f))].append((t, f))
    gluing = {}
    for key, occ in faces.items():
        if len(occ) == 2:
            gluing[occ[0]], gluing[occ[1]] = occ[1], occ[0]
        elif len(occ) == 1 and boundary_pairing is not None:
            partner = frozenset(boundary_pairing(key))
            other = faces.get(partner)
            if not other or len(other) != 1:
                raise TriangulationError([f"boundary face {sorted(map(str, key))} has no partner"])
            gluing[occ[0]] = other[0]
        elif len(occ) > 2:
            raise TriangulationError([f"face {sorted(map(str, key))} lies in {len(occ)} cells"])
    signs = orient(len(tets), gluing)
    return _assemble(order, tets, gluing, signs)


def sphere_s3() -> Triangulation:
    """Boundary of the 4-simplex."""
    cells = list(itertools.combinations(range(5), 4))
    return from_cells(cells, {v: str(v) for v in range(5)}, [str(v) for v in range(5)])


def s1_x_s2_complex(layers: int = 2) -> Triangulation:
    """S^2 x [0, layers] as staircase-triangulated prisms over the boundary of a tetrahedron,
    with the two ends identified."""
    if layers < 2:
        raise ValueError("at least two layers keep vertex classes in a tetrahedron distinct")
    cells = []
    for u, v, w in itertools.combinations("abcd", 3):
        for t in range(layers):
            s = t + 1
            cells += [((u, t), (v, t), (w, t), (w, s)), ((u, t), (v, t), (v, s), (w, s)),
                      ((u, t), (u, s), (v, s), (w, s))]
    points = {(x, t) for x in "abcd" for t in range(layers + 1)}
    classes = {p: f"{p[0]}{p[1] % layers}" for p in points}
    order = [f"{x}{t}" for t in range(layers) for x in "abcd"]

    def pair(face):
        return [(x, (t + layers) % (2 * layers)) for x, t in face]  # swaps layer 0 and layer `layers`

    return from_cells(cells, classes, order, pair)


def lens_complex(p: int, q: int = 1) -> Triangulation:
    """Lens space L(p, q) from a bipyramid with its axis and equator edges subdivided.

    The bipyramid has poles N, S, equator points x_i and equator midpoints B_i,
    with axis midpoint A. The upper face (N, x_i, x_{i+1}) is glued to the lower
    face (S, x_{i+q}, x_{i+q+1}). Four vertex classes P (= N = S), A, X, B keep
    every tetrahedron's vertices distinct.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    cells = []
    for i in range(p):
        for top in ("N", "S"):
            cells.append((top, "A", ("x", i), ("B", i)))
            cells.append((top, "A", ("B", i), ("x", (i + 1) % p)))
    classes = {"N": "P", "S": "P", "A": "A"}
    for i in range(p):
        classes[("x", i)] = "X"
        classes[("B", i)] = "B"

    def pair(face):
        out = []
        for pt in face:
            if pt == "N":
                out.append("S")
            elif pt == "S":
                out.append("N")
            else:
                kind, i = pt
                shift = q if "N" in face else -q
                out.append((kind, (i + shift) % p))
        return out

    return from_cells(cells, classes, ["P", "A", "X", "B"], pair)


_DATA = Path(__file__).parent / "data"


def s1_x_s2() -> Triangulation:
    return load_triangulation(_DATA / "s1_x_s2.json")


def lens(p: int) -> Triangulation:
    """L(p, 1); shipped data for small p, constructed otherwise."""
    if p < 2:
        raise ValueError("p must be at least 2")
    path = _DATA / f"lens_{p}.json"
    return load_triangulation(path) if path.exists() else lens_complex(p, 1)
