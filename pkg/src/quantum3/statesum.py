"""Turaev-Viro-Barrett-Westbury state sums.

``|M| = dim(C)^(-v) * sum_s prod_e qdim(s(e)) * prod_T G_T(s)``

where ``G_T`` is the stored 6j-symbol of tetrahedron ``T`` read in its vertex
order, conjugated when ``T`` is negatively oriented. Two evaluation routes are
provided: plain enumeration of admissible states and variable elimination on
the edge tensor network.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .category import ModularData, SphericalData, global_dim, spherical
from .triangulation import Triangulation

STATE_CAP = 10**7
ENTRY_CAP = 2**26  # largest intermediate tensor, in entries

STRATEGIES = ("min-fill", "min-degree")


class StateSumError(RuntimeError):
    pass


class StateCapError(StateSumError):
    pass


class WidthCapError(StateSumError):
    pass


@dataclass(frozen=True)
class EdgeTensorNetwork:
    rank: int
    num_variables: int
    factors: tuple  # ((var, ...), ndarray), one per tetrahedron
    weights: np.ndarray  # unary weight applied to every variable
    prefactor: complex

    def interaction_graph(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(self.num_variables)}
        for vars_, _ in self.factors:
            for a in vars_:
                adj[a].update(x for x in vars_ if x != a)
        return adj


def build_network(cat: SphericalData | ModularData, tri: Triangulation) -> EdgeTensorNetwork:
    base = spherical(cat)
    g = base.sixj
    factors = []
    for t in range(tri.num_tetrahedra):
        vars_ = tri.tet_edges(t)
        if len(set(vars_)) != 6:
            raise StateSumError(f"tetrahedron {t} has identified edges {vars_}")
        factors.append((vars_, g if tri.orientation[t] > 0 else g.conj()))
    pre = global_dim(base) ** (-len(tri.vertices))
    return EdgeTensorNetwork(base.rank, len(tri.edges), tuple(factors), base.qdim, complex(pre))


def counting_network(cat: SphericalData | ModularData, tri: Triangulation) -> EdgeTensorNetwork:
    """Network whose contraction is the number of admissible states."""
    base = spherical(cat)
    mask = base.ring.tetra_support.astype(float)
    factors = tuple((tri.tet_edges(t), mask) for t in range(tri.num_tetrahedra))
    return EdgeTensorNetwork(base.rank, len(tri.edges), factors, np.ones(base.rank), 1.0)


# ---------------------------------------------------------------------------
# elimination orders


@dataclass
class EliminationPlan:
    order: list[int]
    width: int  # largest arity of a product tensor formed during elimination
    widths: list[int] = field(default_factory=list)


def elimination_order(net: EdgeTensorNetwork, strategy="min-fill") -> EliminationPlan:
    """Greedy elimination order, or validation of an explicit one.

    ``strategy`` is ``"min-fill"``, ``"min-degree"`` or a list of variables.
    """
    n = net.num_variables
    if not isinstance(strategy, str):
        order = [int(v) for v in strategy]
        if sorted(order) != list(range(n)):
            raise ValueError(f"given order is not a permutation of the {n} variables")
        return _simulate(net, order)
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    cached = _cache_lookup(net, strategy)
    if cached is not None:
        return _simulate(net, cached)
    adj = {v: set(s) for v, s in net.interaction_graph().items()}
    order = []
    while adj:
        if strategy == "min-degree":
            v = min(adj, key=lambda x: (len(adj[x]), x))
        else:
            v = min(adj, key=lambda x: (_fill(adj, x), len(adj[x]), x))
        order.append(v)
        nb = adj.pop(v)
        for a in nb:
            adj[a].discard(v)
            adj[a].update(nb - {a})
    _cache_store(net, strategy, order)
    return _simulate(net, order)


def _fill(adj, v) -> int:
    nb = list(adj[v])
    return sum(1 for i, a in enumerate(nb) for b in nb[i + 1:] if b not in adj[a])


def _simulate(net: EdgeTensorNetwork, order) -> EliminationPlan:
    adj = {v: set(s) for v, s in net.interaction_graph().items()}
    widths = []
    for v in order:
        nb = adj.pop(v)
        widths.append(len(nb) + 1)
        for a in nb:
            adj[a].discard(v)
            adj[a].update(nb - {a})
    return EliminationPlan(list(order), max(widths, default=0), widths)


def _cache_key(net: EdgeTensorNetwork, strategy: str) -> str:
    payload = json.dumps([strategy, net.num_variables, [list(v) for v, _ in net.factors]])
    return hashlib.sha256(payload.encode()).hexdigest()


def _cache_lookup(net, strategy):
    root = os.environ.get("QUANTUM3_CACHE_DIR")
    if not root:
        return None
    path = Path(root) / f"plan-{_cache_key(net, strategy)}.json"
    if not path.exists():
        return None
    try:
        return json.loads(path.read_text())["order"]
    except (OSError, ValueError, KeyError):
        return None


def _cache_store(net, strategy, order) -> None:
    root = os.environ.get("QUANTUM3_CACHE_DIR")
    if not root:
        return
    Path(root).mkdir(parents=True, exist_ok=True)
    path = Path(root) / f"plan-{_cache_key(net, strategy)}.json"
    path.write_text(json.dumps({"strategy": strategy, "order": order}))


# ---------------------------------------------------------------------------
# contraction


def contract(net: EdgeTensorNetwork, strategy="min-fill", max_entries: int = ENTRY_CAP,
             max_width: int | None = None) -> tuple[complex, EliminationPlan]:
    """Contract the network by variable elimination; returns ``(value, plan)``."""
    plan = elimination_order(net, strategy)
    for step, (v, w) in enumerate(zip(plan.order, plan.widths)):
        if (max_width is not None and w > max_width) or net.rank ** w > max_entries:
            raise WidthCapError(f"eliminating variable {v} (step {step}) forms an intermediate of "
                                f"arity {w} ({net.rank ** w} entries), over the cap")
    tensors = [(tuple(vars_), arr) for vars_, arr in net.factors]
    scalar = complex(net.prefactor)
    for v in plan.order:
        touching = [t for t in tensors if v in t[0]]
        tensors = [t for t in tensors if v not in t[0]]
        out_vars = sorted({x for vars_, _ in touching for x in vars_} - {v})
        local = {x: i for i, x in enumerate(out_vars + [v])}
        operands = []
        for vars_, arr in touching:
            operands += [arr, [local[x] for x in vars_]]
        operands += [net.weights, [local[v]]]
        res = np.einsum(*operands, [local[x] for x in out_vars])
        if out_vars:
            tensors.append((tuple(out_vars), res))
        else:
            scalar *= complex(res)
    for vars_, arr in tensors:  # only scalars remain
        scalar *= complex(arr)
    return scalar, plan


def count_states(cat: SphericalData | ModularData, tri: Triangulation) -> int:
    value, _ = contract(counting_network(cat, tri))
    return int(round(value.real))


def tv_contract(cat: SphericalData | ModularData, tri: Triangulation, strategy="min-fill",
                max_entries: int = ENTRY_CAP, max_width: int | None = None) -> complex:
    value, _ = contract(build_network(cat, tri), strategy, max_entries, max_width)
    return value


# ---------------------------------------------------------------------------
# enumeration


def _edge_schedule(tri: Triangulation) -> list[int]:
    """Edge order that closes triangles and tetrahedra early."""
    order, seen = [], set()
    for t in range(tri.num_tetrahedra):
        for e in tri.tet_edges(t):
            if e not in seen:
                seen.add(e)
                order.append(e)
    return order


def enumerate_states(cat: SphericalData | ModularData, tri: Triangulation, cap: int = STATE_CAP):
    """Yield every admissible state as a tuple indexed by edge class."""
    base = spherical(cat)
    n = base.ring.fusion
    order = _edge_schedule(tri)
    pos = {e: i for i, e in enumerate(order)}
    # triangle checks become active once their last edge is assigned
    checks: list[list[tuple[int, int, int]]] = [[] for _ in order]
    for k in range(len(tri.triangles)):
        e01, e12, e02 = tri.triangle_edges(k)
        checks[max(pos[e01], pos[e12], pos[e02])].append((e01, e12, e02))
    state = [0] * len(order)
    rank = base.rank
    count = 0

    def rec(i):
        nonlocal count
        if i == len(order):
            count += 1
            if count > cap:
                raise StateCapError(f"more than {cap} admissible states; use the contraction method")
            yield tuple(state)
            return
        e = order[i]
        for lab in range(rank):
            state[e] = lab
            if all(n[state[a], state[b], state[c]] for a, b, c in checks[i]):
                yield from rec(i + 1)

    yield from rec(0)


def tv_enumerate(cat: SphericalData | ModularData, tri: Triangulation, cap: int = STATE_CAP) -> complex:
    base = spherical(cat)
    d, g = base.qdim, base.sixj
    gs = [g if s > 0 else g.conj() for s in tri.orientation]
    tet_edges = [tri.tet_edges(t) for t in range(tri.num_tetrahedra)]
    total = 0j
    for s in enumerate_states(base, tri, cap):
        w = np.prod(d[list(s)])
        for t, es in enumerate(tet_edges):
            w *= gs[t][tuple(s[e] for e in es)]
        total += w
    return complex(total * global_dim(base) ** (-len(tri.vertices)))


# ---------------------------------------------------------------------------
# reporting


@dataclass
class TVResult:
    value: complex
    method: str
    width: int | None
    states: int | None
    seconds: float

    def to_json(self) -> dict:
        return {"value": [self.value.real, self.value.imag], "method": self.method,
                "width": self.width, "states": self.states, "wall_time": self.seconds}


def turaev_viro(cat, tri, method: str = "contract", strategy="min-fill", cap_states: int = STATE_CAP,
                cap_width: int | None = None) -> TVResult:
    start = time.perf_counter()
    if method == "enumerate":
        states = count_states(cat, tri)
        if states > cap_states:
            raise StateCapError(f"{states} admissible states exceed the cap {cap_states}; "
                                "use --method contract")
        value = tv_enumerate(cat, tri, cap_states)
        return TVResult(value, method, None, states, time.perf_counter() - start)
    if method != "contract":
        raise ValueError(f"unknown method {method!r}")
    value, plan = contract(build_network(cat, tri), strategy, max_width=cap_width)
    return TVResult(value, method, plan.width, None, time.perf_counter() - start)
