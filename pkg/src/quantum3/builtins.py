"""Builtin category data: pointed Vec_{Z/n}, Fibonacci and Ising.

Values are written in closed form (golden ratio, square roots, roots of
unity). ``tests/oracles.py`` re-derives them with an independent numerical
pentagon/hexagon solver.
"""

from __future__ import annotations

import cmath
import itertools
import math

import numpy as np

from .category import FusionRing, ModularData, SphericalData

PHI = (1 + math.sqrt(5)) / 2

NAMES = ("vec_z2", "vec_z3", "fibonacci", "ising")


def _from_associator(ring: FusionRing, qdim, fmove) -> SphericalData:
    """Turn a closed-form associator ``fmove(a, b, c, d, e, f)`` into stored 6j-symbols."""
    qdim = np.asarray(qdim, dtype=complex)
    entries = {}
    for key in np.argwhere(ring.tetra_support):
        i, j, k, l, m, n = (int(x) for x in key)
        # F^{i k l}_n[j, m] = sqrt(d_j d_m) G(i, j, k, l, m, n)
        entries[(i, j, k, l, m, n)] = fmove(i, k, l, n, j, m) / np.sqrt(qdim[j] * qdim[m])
    return SphericalData.from_entries(ring, qdim, entries)


def vec_zn(n: int) -> SphericalData:
    """Pointed category of Z/n-graded vector spaces with trivial associator."""
    if n < 1:
        raise ValueError("n must be positive")
    triples = [(i, j, (i + j) % n) for i in range(n) for j in range(n)]
    ring = FusionRing.from_triples(n, triples, [(-i) % n for i in range(n)])
    return _from_associator(ring, np.ones(n), lambda *_: 1.0)


def vec_zn_symmetric(n: int) -> ModularData:
    """vec_zn with trivial braiding and trivial twists (symmetric, not modular for n > 1)."""
    base = vec_zn(n)
    return ModularData(base, base.ring.fusion.astype(complex), np.ones(n))


def fibonacci() -> ModularData:
    """Rank-2 Fibonacci category, labels ``0 = 1`` and ``1 = tau`` with tau (x) tau = 1 + tau."""
    ring = FusionRing.from_triples(2, [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 1, 1)], [0, 1])
    block = np.array([[1 / PHI, 1 / math.sqrt(PHI)], [1 / math.sqrt(PHI), -1 / PHI]])

    def fmove(a, b, c, d, e, f):
        if (a, b, c, d) == (1, 1, 1, 1):
            return block[e, f]
        return 1.0

    base = _from_associator(ring, [1.0, PHI], fmove)
    r = np.zeros((2, 2, 2), dtype=complex)
    r[0, 0, 0] = r[0, 1, 1] = r[1, 0, 1] = 1
    r[1, 1, 0] = cmath.exp(-4j * math.pi / 5)
    r[1, 1, 1] = cmath.exp(3j * math.pi / 5)
    return ModularData(base, r, [1.0, cmath.exp(4j * math.pi / 5)])


def ising() -> ModularData:
    """Rank-3 Ising category, labels ``0 = 1``, ``1 = sigma``, ``2 = psi``."""
    one, s, p = 0, 1, 2
    triples = [(0, x, x) for x in range(3)] + [(x, 0, x) for x in (1, 2)]
    triples += [(s, s, one), (s, s, p), (s, p, s), (p, s, s), (p, p, one)]
    ring = FusionRing.from_triples(3, triples, [0, 1, 2])
    h = 1 / math.sqrt(2)
    block = {0: {0: h, 2: h}, 2: {0: h, 2: -h}}

    def fmove(a, b, c, d, e, f):
        if (a, b, c, d) == (s, s, s, s):
            return block[e][f]
        if (a, b, c, d) in ((p, s, p, s), (s, p, s, p)):
            return -1.0
        return 1.0

    base = _from_associator(ring, [1.0, math.sqrt(2), 1.0], fmove)
    r = np.zeros((3, 3, 3), dtype=complex)
    for a, b, c in ring.triples():
        r[a, b, c] = 1
    r[s, s, one] = cmath.exp(-1j * math.pi / 8)
    r[s, s, p] = cmath.exp(3j * math.pi / 8)
    r[s, p, s] = r[p, s, s] = -1j
    r[p, p, one] = -1
    return ModularData(base, r, [1.0, cmath.exp(1j * math.pi / 8), -1.0])


def builtin(name: str) -> SphericalData | ModularData:
    if name == "vec_z2":
        return vec_zn(2)
    if name == "vec_z3":
        return vec_zn(3)
    if name == "fibonacci":
        return fibonacci()
    if name == "ising":
        return ising()
    raise KeyError(f"unknown builtin category {name!r}; choose from {', '.join(NAMES)}")


def count_admissible_sixj(data: SphericalData) -> int:
    return int(np.count_nonzero(data.ring.tetra_support))


def tetrahedral_images(key: tuple[int, ...], dual) -> list[tuple[int, ...]]:
    """All relabelings of a 6j index under vertex permutations of the tetrahedron.

    Reversing an edge's direction replaces its label by the dual label.
    """
    i, j, k, l, m, n = key
    lab = {(0, 1): i, (0, 2): j, (1, 2): k, (2, 3): l, (1, 3): m, (0, 3): n}

    def edge(u, v):
        return lab[(u, v)] if u < v else dual[lab[(v, u)]]

    out = []
    for perm in itertools.permutations(range(4)):
        q = perm  # new vertex t sits at old vertex q[t]
        out.append(tuple(edge(q[a], q[b]) for a, b in ((0, 1), (0, 2), (1, 2), (2, 3), (1, 3), (0, 3))))
    return out
