"""Surgery invariants of closed 3-manifolds presented by framed links.

``WRT(M_L) = D+^(-e+) D-^(-e-) <L(Omega)>`` where ``D+-`` are the Gauss sums,
``e+-`` count positive/negative eigenvalues of the linking matrix and every
surgery component carries the Kirby color. ``tau = sqrt_dim^(-b1 - 1) WRT``
with ``b1`` the nullity of the linking matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .category import EPS, CategoryError, ModularData, delta_pm, global_dim, is_modular
from .diagram import (DiagramError, MorseDiagram, analyze, braid_closure, diagram_from_json,
                      disjoint_union, evaluate_kirby, unknot)
from .diagram import mirror as mirror_diagram


@dataclass(frozen=True)
class SurgeryPresentation:
    diagram: MorseDiagram
    surgery_components: tuple[str, ...]

    def __post_init__(self):
        ids = set(self.diagram.ids)
        for cid in self.surgery_components:
            if cid not in ids:
                raise DiagramError(f"surgery component {cid!r} is not in the diagram")
            if self.diagram.component(cid).color is not None:
                raise DiagramError(f"surgery component {cid!r} must not carry a color")
        for c in self.diagram.components:
            if c.id not in self.surgery_components and c.color is None:
                raise DiagramError(f"Wilson component {c.id!r} needs a color")

    @property
    def framings(self) -> tuple[int, ...]:
        return tuple(self.diagram.component(c).framing for c in self.surgery_components)

    def to_json(self) -> dict:
        out = self.diagram.to_json()
        out["surgery_components"] = list(self.surgery_components)
        return out


@dataclass(frozen=True)
class LinkingMatrix:
    ids: tuple[str, ...]
    matrix: np.ndarray  # symmetric, integer


def presentation(d: MorseDiagram, surgery=None) -> SurgeryPresentation:
    """Wrap a diagram; by default every uncolored component is a surgery component."""
    if surgery is None:
        surgery = [c.id for c in d.components if c.color is None]
    return SurgeryPresentation(d, tuple(surgery))


def linking_matrix(p: SurgeryPresentation) -> LinkingMatrix:
    info = analyze(p.diagram)
    ids = p.surgery_components
    m = len(ids)
    b = np.zeros((m, m), dtype=int)
    for i, a in enumerate(ids):
        b[i, i] = p.diagram.component(a).framing
        for j in range(i + 1, m):
            b[i, j] = b[j, i] = info.linking(a, ids[j])
    return LinkingMatrix(ids, b)


def signature_counts(b) -> tuple[int, int, int]:
    """Exact inertia ``(e+, e-, nullity)`` of a symmetric integer matrix.

    Symmetric Gaussian elimination over the rationals: pivot on a nonzero
    diagonal entry when one exists, otherwise create one with the congruence
    ``row_i += row_j, col_i += col_j`` for some nonzero ``b_ij``.
    """
    if isinstance(b, LinkingMatrix):
        b = b.matrix
    a = [[Fraction(int(x)) for x in row] for row in np.asarray(b)]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    if any(a[i][j] != a[j][i] for i in range(n) for j in range(n)):
        raise ValueError("matrix is not symmetric")
    pos = neg = 0
    while a:
        n = len(a)
        k = next((i for i in range(n) if a[i][i] != 0), None)
        if k is None:
            pair = next(((i, j) for i in range(n) for j in range(n) if a[i][j] != 0), None)
            if pair is None:
                break  # zero block
            i, j = pair
            for r in range(n):
                a[i][r] += a[j][r]
            for r in range(n):
                a[r][i] += a[r][j]
            k = i
        piv = a[k][k]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        rest = [r for r in range(n) if r != k]
        a = [[a[r][s] - a[r][k] * a[k][s] / piv for s in rest] for r in rest]
    return pos, neg, len(a)


def _require_modular(cat: ModularData, eps: float) -> None:
    if not isinstance(cat, ModularData):
        raise CategoryError("surgery invariants need braided (modular) data")
    if not is_modular(cat, eps):
        raise CategoryError("category is not modular: the S-matrix is singular")


@dataclass
class WRTResult:
    value: complex
    bracket: complex
    e_plus: int
    e_minus: int
    nullity: int
    tau: complex | None = None

    def to_json(self) -> dict:
        out = {"value": [self.value.real, self.value.imag], "bracket": [self.bracket.real, self.bracket.imag],
               "e_plus": self.e_plus, "e_minus": self.e_minus, "nullity": self.nullity}
        if self.tau is not None:
            out["tau"] = [self.tau.real, self.tau.imag]
        return out


def wrt_details(cat: ModularData, p: SurgeryPresentation, workers: int = 1, eps: float = EPS) -> WRTResult:
    _require_modular(cat, eps)
    e_plus, e_minus, nullity = signature_counts(linking_matrix(p))
    bracket = evaluate_kirby(cat, p.diagram, p.surgery_components, workers)
    dp, dm = delta_pm(cat)
    value = dp ** (-e_plus) * dm ** (-e_minus) * bracket
    return WRTResult(complex(value), complex(bracket), e_plus, e_minus, nullity)


def wrt(cat: ModularData, p: SurgeryPresentation, workers: int = 1) -> complex:
    return wrt_details(cat, p, workers).value


def check_sqrt_dim(cat: ModularData, sqrt_dim: complex, eps: float = 1e-8) -> None:
    dim = global_dim(cat)
    if abs(sqrt_dim ** 2 - dim) > eps * max(1.0, abs(dim)):
        raise ValueError(f"sqrt_dim {sqrt_dim} squares to {sqrt_dim ** 2}, not the global dimension {dim}")


def tau(cat: ModularData, sqrt_dim: complex, p: SurgeryPresentation, workers: int = 1) -> complex:
    check_sqrt_dim(cat, sqrt_dim)
    res = wrt_details(cat, p, workers)
    return complex(sqrt_dim ** (-res.nullity - 1) * res.value)


def mirror(p: SurgeryPresentation) -> SurgeryPresentation:
    """Presentation of the orientation-reversed manifold."""
    return SurgeryPresentation(mirror_diagram(p.diagram), p.surgery_components)


def verlinde_dim(cat: ModularData, genus: int) -> complex:
    if genus < 0:
        raise ValueError("genus must be nonnegative")
    d = np.asarray(cat.qdim, dtype=complex)
    return complex(global_dim(cat) ** (genus - 1) * np.sum(d ** (2 - 2 * genus)))


# ---------------------------------------------------------------------------
# constructions


def empty() -> SurgeryPresentation:
    return SurgeryPresentation(MorseDiagram((), ()), ())


def lens_presentation(p: int) -> SurgeryPresentation:
    """Unknot with framing ``p``; ``p = 0`` gives S1 x S2, ``p = +-1`` gives S3."""
    return presentation(unknot(None, p, "U"))


def stabilize(p: SurgeryPresentation, sign: int, cid: str | None = None) -> SurgeryPresentation:
    """Adjoin a distant unknot with framing ``sign`` (+1 or -1)."""
    if sign not in (1, -1):
        raise ValueError("stabilization framing must be +1 or -1")
    ids = set(p.diagram.ids)
    cid = cid or next(f"O{k}" for k in range(len(ids) + 1) if f"O{k}" not in ids)
    d = disjoint_union(p.diagram, unknot(None, sign, cid))
    return SurgeryPresentation(d, p.surgery_components + (cid,))


def two_unknots(a: int, b: int) -> SurgeryPresentation:
    """Distant unknots with framings ``a`` and ``b``."""
    return presentation(disjoint_union(unknot(None, a, "L1"), unknot(None, b, "L2")))


def slid_two_unknots(a: int, b: int) -> SurgeryPresentation:
    """Result of sliding the ``a``-framed unknot over the ``b``-framed one.

    The band sum with a ``b``-framed parallel copy is the (2, 2b) torus link
    with framings ``(a + b, b)`` and linking number ``b``.
    """
    if b == 0:
        return two_unknots(a, 0)
    word = [1 if b > 0 else -1] * (2 * abs(b))
    return presentation(braid_closure(2, word, framings=[a + b, b]))


def corpus() -> dict[str, SurgeryPresentation]:
    """Small presentations used for invariance checks."""
    out = {"s3": empty(), "s1_x_s2": lens_presentation(0)}
    for p in (1, 2, 3, -2):
        out[f"unknot_{p}"] = lens_presentation(p)
    out["hopf_0_0"] = presentation(braid_closure(2, [1, 1], framings=[0, 0]))
    out["hopf_2_1"] = presentation(braid_closure(2, [1, 1], framings=[2, 1]))
    out["trefoil_-1"] = presentation(braid_closure(2, [1, 1, 1], framings=[-1]))
    wilson = braid_closure(2, [1, 1], colors=[None, 1], framings=[1, 0])
    out["hopf_with_wilson"] = presentation(wilson)
    return out


# ---------------------------------------------------------------------------
# file format


def presentation_from_json(obj: dict, path: str | None = None) -> SurgeryPresentation:
    where = f"{path}: " if path else ""
    d = diagram_from_json(obj, path)
    surgery = obj.get("surgery_components")
    if surgery is None:
        raise DiagramError(f"{where}missing field 'surgery_components'")
    if not isinstance(surgery, list):
        raise DiagramError(f"{where}field 'surgery_components' must be a list")
    try:
        return SurgeryPresentation(d, tuple(str(s) for s in surgery))
    except DiagramError as exc:
        raise DiagramError(f"{where}field 'surgery_components': {exc}") from None


def load_presentation(path: str | Path) -> SurgeryPresentation:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DiagramError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return presentation_from_json(obj, str(path))


def save_presentation(p: SurgeryPresentation, path: str | Path) -> None:
    Path(path).write_text(json.dumps(p.to_json(), indent=1) + "\n")

