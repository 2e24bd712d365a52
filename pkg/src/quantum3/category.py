"""Fusion, spherical and modular category data in the multiplicity-free scalar gauge.

Labels are integers ``0 .. rank-1`` with ``0`` the unit object. All numeric
tables are dense, read-only numpy arrays; entries outside the admissible
support are zero.

Scalar 6j convention
--------------------
``sixj[i, j, k, l, m, n]`` is the tetrahedral symbol of an ordered tetrahedron
``0 < 1 < 2 < 3`` whose edges carry the labels::

    i = (01)   j = (02)   k = (12)   l = (23)   m = (13)   n = (03)

It is supported on tuples where the four faces fuse::

    (012): i (x) k -> j      (123): k (x) l -> m
    (023): j (x) l -> n      (013): i (x) m -> n

The associator in the left-to-right fusion tree basis is recovered as::

    F^{i k l}_n [j, m] = sqrt(qdim(j) qdim(m)) * sixj[i, j, k, l, m, n]

mapping ``((i k)_j l)_n`` to ``(i (k l)_m)_n``. The symbol of a negatively
oriented tetrahedron is the complex conjugate of the stored entry.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any

import numpy as np

EPS = 1e-9


class CategoryError(Exception):
    """Raised for structurally broken category data."""


class FormatError(CategoryError):
    """Raised when a category data file cannot be parsed."""

    def __init__(self, message: str, path: str | None = None, field_name: str | None = None,
                 index: Any = None):
        parts = [p for p in (path, field_name and f"field '{field_name}'",
                             index is not None and f"index {index}") if p]
        super().__init__(": ".join(parts + [message]) if parts else message)
        self.path = path
        self.field_name = field_name
        self.index = index


def close(a: complex, b: complex, eps: float = EPS) -> bool:
    """Relative closeness test used for every scalar comparison."""
    return abs(a - b) <= eps * max(1.0, abs(a), abs(b))


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Violation:
    axiom: str
    indices: tuple
    detail: str = ""

    def __str__(self) -> str:
        text = f"{self.axiom} at {self.indices}"
        return f"{text}: {self.detail}" if self.detail else text


@dataclass(frozen=True, eq=False)
class FusionRing:
    rank: int
    fusion: np.ndarray  # fusion[i, j, k] = N^k_{ij}
    dual: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "fusion", _frozen(np.asarray(self.fusion, dtype=np.int64)))
        object.__setattr__(self, "dual", tuple(int(x) for x in self.dual))
        if self.fusion.shape != (self.rank,) * 3:
            raise CategoryError(f"fusion table has shape {self.fusion.shape}, expected {(self.rank,) * 3}")
        if len(self.dual) != self.rank:
            raise CategoryError(f"dual has length {len(self.dual)}, expected {self.rank}")

    @classmethod
    def from_triples(cls, rank: int, triples, dual) -> FusionRing:
        n = np.zeros((rank, rank, rank), dtype=np.int64)
        for t in triples:
            i, j, k = (int(x) for x in t)
            n[i, j, k] = 1
        return cls(rank, n, tuple(dual))

    def admissible(self, i: int, j: int, k: int) -> bool:
        return bool(self.fusion[i, j, k])

    def triples(self) -> list[tuple[int, int, int]]:
        return [tuple(int(x) for x in t) for t in np.argwhere(self.fusion)]

    def products(self, i: int, j: int) -> list[int]:
        return [int(k) for k in np.nonzero(self.fusion[i, j])[0]]

    @cached_property
    def tetra_support(self) -> np.ndarray:
        """Boolean mask of admissible 6-tuples (i, j, k, l, m, n)."""
        return _frozen(_tetra_mask(self.fusion.astype(bool)))


def _tetra_mask(a: np.ndarray) -> np.ndarray:
    # indices: i j k l m n
    ikj = a.transpose(0, 2, 1)[:, :, :, None, None, None]  # [i, j, k] = N^j_{ik}
    klm = a[None, None, :, :, :, None]  # [k, l, m]
    jln = a[None, :, None, :, None, :]  # [j, l, n]
    imn = a[:, None, None, None, :, :]  # [i, m, n]
    return ikj & klm & jln & imn


def validate_fusion_ring(ring: FusionRing) -> list[Violation]:
    """Check unit, duality, associativity and multiplicity-freeness."""
    out: list[Violation] = []
    r, n, d = ring.rank, ring.fusion, ring.dual
    if r < 1:
        return [Violation("rank", (r,), "rank must be at least 1")]
    for x in itertools.product(range(r), repeat=3):
        if n[x] not in (0, 1):
            out.append(Violation("multiplicity-free", x, f"N = {n[x]}"))
    for j in range(r):
        for k in range(r):
            want = int(j == k)
            if n[0, j, k] != want:
                out.append(Violation("unit", (0, j), f"N^{k}_(0,{j}) = {n[0, j, k]}"))
            if n[j, 0, k] != want:
                out.append(Violation("unit", (j, 0), f"N^{k}_({j},0) = {n[j, 0, k]}"))
    for i in range(r):
        if not 0 <= d[i] < r:
            out.append(Violation("duality", (i,), f"dual label {d[i]} out of range"))
            continue
        if d[d[i]] != i:
            out.append(Violation("duality", (i,), "dual is not an involution"))
        for j in range(r):
            if n[i, j, 0] != int(j == d[i]):
                out.append(Violation("duality", (i, j), f"N^0_({i},{j}) = {n[i, j, 0]}"))
    if d and d[0] != 0:
        out.append(Violation("duality", (0,), "unit must be self-dual"))
    left = np.einsum("ijm,mkl->ijkl", n, n)
    right = np.einsum("jkm,iml->ijkl", n, n)
    for x in np.argwhere(left != right):
        out.append(Violation("associativity", tuple(int(v) for v in x)))
    return out


@dataclass(frozen=True, eq=False)
class SphericalData:
    ring: FusionRing
    qdim: np.ndarray
    sixj: np.ndarray
    sixj_mask: np.ndarray | None = None  # entries actually supplied; None means all of the support

    def __post_init__(self):
        r = self.ring.rank
        object.__setattr__(self, "qdim", _frozen(np.asarray(self.qdim, dtype=complex)))
        object.__setattr__(self, "sixj", _frozen(np.asarray(self.sixj, dtype=complex)))
        mask = self.ring.tetra_support if self.sixj_mask is None else self.sixj_mask
        object.__setattr__(self, "sixj_mask", _frozen(np.asarray(mask, dtype=bool)))
        if self.qdim.shape != (r,):
            raise CategoryError(f"qdim has length {self.qdim.shape[0]}, expected {r}")
        if self.sixj.shape != (r,) * 6:
            raise CategoryError(f"sixj has shape {self.sixj.shape}, expected {(r,) * 6}")

    @property
    def rank(self) -> int:
        return self.ring.rank

    @property
    def dual(self) -> tuple[int, ...]:
        return self.ring.dual

    @classmethod
    def from_entries(cls, ring: FusionRing, qdim, entries: dict) -> SphericalData:
        """Build from a sparse ``{(i, j, k, l, m, n): value}`` mapping."""
        r = ring.rank
        g = np.zeros((r,) * 6, dtype=complex)
        mask = np.zeros((r,) * 6, dtype=bool)
        support = ring.tetra_support
        for key, val in entries.items():
            key = tuple(int(x) for x in key)
            if not support[key]:
                raise CategoryError(f"6j entry {key} is not admissible")
            g[key] = val
            mask[key] = True
        return cls(ring, qdim, g, mask)

    def require_complete(self) -> None:
        missing = np.argwhere(self.ring.tetra_support & ~self.sixj_mask)
        if len(missing):
            t = tuple(int(x) for x in missing[0])
            raise CategoryError(f"missing admissible 6j entry {t} ({len(missing)} missing in total)")

    @cached_property
    def fmove(self) -> np.ndarray:
        """Dense associator ``F[a, b, c, d, e, f]`` for ``((a b)_e c)_d -> (a (b c)_f)_d``."""
        sq = np.sqrt(self.qdim)
        # sixj[i, j, k, l, m, n] with i=a, j=e, k=b, l=c, m=f, n=d
        g = self.sixj.transpose(0, 2, 3, 5, 1, 4)
        return _frozen(g * sq[None, None, None, None, :, None] * sq[None, None, None, None, None, :])

    def f_matrix(self, a: int, b: int, c: int, d: int) -> tuple[list[int], list[int], np.ndarray]:
        """Square block of the associator with its row (e) and column (f) labels."""
        n = self.ring.fusion
        rows = [e for e in range(self.rank) if n[a, b, e] and n[e, c, d]]
        cols = [f for f in range(self.rank) if n[b, c, f] and n[a, f, d]]
        return rows, cols, self.fmove[a, b, c, d][np.ix_(rows, cols)]

    @cached_property
    def fmove_inverse(self) -> np.ndarray:
        """``Finv[a, b, c, d, f, e]``: blockwise inverse of :attr:`fmove`."""
        r = self.rank
        out = np.zeros((r,) * 6, dtype=complex)
        for a, b, c, d in itertools.product(range(r), repeat=4):
            rows, cols, m = self.f_matrix(a, b, c, d)
            if not rows and not cols:
                continue
            if len(rows) != len(cols):
                raise CategoryError(f"associator block {(a, b, c, d)} is not square")
            out[a, b, c, d][np.ix_(cols, rows)] = np.linalg.inv(m)
        return _frozen(out)


@dataclass(frozen=True, eq=False)
class ModularData:
    base: SphericalData
    rsym: np.ndarray  # rsym[a, b, c] = R^{ab}_c
    twist: np.ndarray

    def __post_init__(self):
        r = self.base.rank
        object.__setattr__(self, "rsym", _frozen(np.asarray(self.rsym, dtype=complex)))
        object.__setattr__(self, "twist", _frozen(np.asarray(self.twist, dtype=complex)))
        if self.rsym.shape != (r, r, r):
            raise CategoryError(f"rsym has shape {self.rsym.shape}, expected {(r, r, r)}")
        if self.twist.shape != (r,):
            raise CategoryError(f"twist has length {self.twist.shape[0]}, expected {r}")

    # convenience passthroughs
    @property
    def ring(self) -> FusionRing:
        return self.base.ring

    @property
    def rank(self) -> int:
        return self.base.rank

    @property
    def qdim(self) -> np.ndarray:
        return self.base.qdim

    @property
    def sixj(self) -> np.ndarray:
        return self.base.sixj

    @property
    def dual(self) -> tuple[int, ...]:
        return self.base.dual


def spherical(data: SphericalData | ModularData) -> SphericalData:
    return data.base if isinstance(data, ModularData) else data


# ---------------------------------------------------------------------------
# validators


def check_structure(data: SphericalData) -> list[Violation]:
    """Axioms on dimensions that are not identities between 6j-symbols."""
    out = [v for v in validate_fusion_ring(data.ring)]
    d = data.qdim
    if not close(d[0], 1.0):
        out.append(Violation("qdim", (0,), f"qdim(1) = {d[0]}"))
    for i in range(data.rank):
        if abs(d[i]) <= EPS:
            out.append(Violation("qdim", (i,), "quantum dimension vanishes"))
        if not close(d[i], d[data.dual[i]]):
            out.append(Violation("qdim", (i,), "qdim(i) != qdim(dual(i))"))
    if abs(global_dim(data)) <= EPS:
        out.append(Violation("global-dim", (), "global dimension vanishes"))
    return out


def check_pentagon(data: SphericalData | ModularData) -> float:
    """Max residual of the Biedenharn-Elliott identity written with associators.

    ``F^{fcd}_e[g,l] F^{abl}_e[f,k] = sum_h F^{abc}_g[f,h] F^{ahd}_e[g,k] F^{bcd}_k[h,l]``
    """
    data = spherical(data)
    data.require_complete()
    F = data.fmove
    return float(np.max(np.abs(_pentagon_lhs(F) - _pentagon_rhs(F))))


def _pentagon_lhs(F: np.ndarray) -> np.ndarray:
    return np.einsum("fcdegl,ablefk->abcdefgkl", F, F, optimize=True)


def _pentagon_rhs(F: np.ndarray) -> np.ndarray:
    return np.einsum("abcgfh,ahdegk,bcdkhl->abcdefgkl", F, F, F, optimize=True)


def check_orthonormality(data: SphericalData | ModularData) -> float:
    """Max residual of ``sum_m d_m G(i,j,k,l,m,n) conj(G(i,j',k,l,m,n)) = delta_{jj'} / d_j``.

    The right side is taken on tuples where both ``(i k -> j)`` and ``(j l -> n)``
    fuse; elsewhere both sides vanish.
    """
    data = spherical(data)
    data.require_complete()
    g, d, n = data.sixj, data.qdim, data.ring.fusion
    lhs = np.einsum("ijklmn,m,iaklmn->ijklna", g, d, g.conj(), optimize=True)
    r = data.rank
    rhs = np.zeros_like(lhs)
    for i, j, k, l, nn in itertools.product(range(r), repeat=5):
        if n[i, k, j] and n[j, l, nn] and _any_m(n, i, k, l, nn):
            rhs[i, j, k, l, nn, j] = 1.0 / d[j]
    return float(np.max(np.abs(lhs - rhs))) if lhs.size else 0.0


def _any_m(n, i, k, l, nn) -> bool:
    return bool(np.any(n[k, l, :] * n[i, :, nn]))


def check_hexagon(data: ModularData) -> float:
    """Max residual of both hexagon identities (braiding and inverse braiding).

    ``R^{ca}_e F^{acb}_d[e,g] R^{cb}_g = sum_f F^{cab}_d[e,f] R^{cf}_d F^{abc}_d[f,g]``
    """
    F = data.base.fmove
    res = 0.0
    for R in (data.rsym, _inverse_r(data)):
        lhs = np.einsum("cae,acbdeg,cbg->abcdeg", R, F, R, optimize=True)
        rhs = np.einsum("cabdef,cfd,abcdfg->abcdeg", F, R, F, optimize=True)
        if lhs.size:
            res = max(res, float(np.max(np.abs(lhs - rhs))))
    return res


def _inverse_r(data: ModularData) -> np.ndarray:
    """``Rinv[a, b, c] = 1 / R^{ba}_c`` on the support, used by the mirrored hexagon."""
    R = data.rsym
    out = np.zeros_like(R)
    nz = R.transpose(1, 0, 2) != 0
    out[nz] = 1.0 / R.transpose(1, 0, 2)[nz]
    return out


def check_ribbon(data: ModularData) -> float:
    """Residual of ``twist(a) = sum_c qdim(c)/qdim(a) R^{aa}_c``, ``twist(1) = 1`` and self-duality."""
    d, R, t = data.qdim, data.rsym, data.twist
    res = abs(t[0] - 1.0)
    for a in range(data.rank):
        res = max(res, abs(t[a] - t[data.dual[a]]))
        val = sum(d[c] / d[a] * R[a, a, c] for c in data.ring.products(a, a))
        res = max(res, abs(t[a] - val))
    return float(res)


def check_rsym_support(data: ModularData) -> list[Violation]:
    out = []
    n = data.ring.fusion
    for a, b, c in itertools.product(range(data.rank), repeat=3):
        if n[a, b, c] and abs(data.rsym[a, b, c]) <= EPS:
            out.append(Violation("rsym", (a, b, c), "missing R-symbol on admissible triple"))
        if not n[a, b, c] and abs(data.rsym[a, b, c]) > EPS:
            out.append(Violation("rsym", (a, b, c), "R-symbol on non-admissible triple"))
    return out


def global_dim(data: SphericalData | ModularData) -> complex:
    return complex(np.sum(data.qdim ** 2))


def s_matrix(data: ModularData) -> np.ndarray:
    """S-matrix from evaluating the colored Hopf link for every pair of labels."""
    from .diagram import evaluate, hopf_link

    r = data.rank
    s = np.zeros((r, r), dtype=complex)
    for i in range(r):
        for j in range(r):
            s[i, j] = evaluate(data, hopf_link(i, j))
    return s


def delta_pm(data: ModularData) -> tuple[complex, complex]:
    d2 = data.qdim ** 2
    return complex(np.sum(data.twist * d2)), complex(np.sum(d2 / data.twist))


def is_modular(data: ModularData, eps: float = EPS) -> bool:
    return abs(np.linalg.det(s_matrix(data))) > eps


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    residuals: dict[str, float] = field(default_factory=dict)
    tolerance: float = EPS

    @property
    def ok(self) -> bool:
        return not self.violations and all(v <= self.tolerance for v in self.residuals.values())

    def lines(self) -> list[str]:
        out = [f"{name} residual: {val:.3e}" + ("" if val <= self.tolerance else "  FAIL")
               for name, val in self.residuals.items()]
        out += [f"violation: {v}" for v in self.violations]
        out.append("OK" if self.ok else "INVALID")
        return out

    def to_json(self) -> dict:
        return {"ok": self.ok, "tolerance": self.tolerance, "residuals": self.residuals,
                "violations": [str(v) for v in self.violations]}


def validate(data: SphericalData | ModularData, eps: float = EPS) -> ValidationReport:
    """Run every applicable validator and collect a report."""
    base = spherical(data)
    report = ValidationReport(tolerance=eps)
    report.violations += check_structure(base)
    if report.violations:
        return report
    try:
        base.require_complete()
    except CategoryError as exc:
        report.violations.append(Violation("sixj", (), str(exc)))
        return report
    report.residuals["pentagon"] = check_pentagon(base)
    report.residuals["orthonormality"] = check_orthonormality(base)
    if isinstance(data, ModularData):
        report.violations += check_rsym_support(data)
        report.residuals["hexagon"] = check_hexagon(data)
        report.residuals["ribbon"] = check_ribbon(data)
        dp, dm = delta_pm(data)
        report.residuals["delta-product"] = abs(dp * dm - global_dim(data))
        from .diagram import DiagramError

        if all(v <= eps for v in report.residuals.values()):
            try:
                if not is_modular(data, eps):
                    report.violations.append(Violation("modularity", (), "S-matrix is singular"))
            except DiagramError as exc:
                report.violations.append(Violation("modularity", (), str(exc)))
    return report


# ---------------------------------------------------------------------------
# file format

_FIELDS = {"rank", "dual", "fusion", "qdim", "sixj", "rsym", "twist"}


def _pair(val, path, name, idx) -> complex:
    if not (isinstance(val, (list, tuple)) and len(val) == 2
            and all(isinstance(x, (int, float)) for x in val)):
        raise FormatError("expected a [re, im] pair", path, name, idx)
    return complex(val[0], val[1])


def _label(val, rank, path, name, idx) -> int:
    if not isinstance(val, int) or isinstance(val, bool) or not 0 <= val < rank:
        raise FormatError(f"label {val!r} out of range 0..{rank - 1}", path, name, idx)
    return val


def category_from_json(obj: dict, path: str | None = None) -> SphericalData | ModularData:
    if not isinstance(obj, dict):
        raise FormatError("top level must be an object", path)
    unknown = sorted(set(obj) - _FIELDS)
    if unknown:
        raise FormatError(f"unknown field(s) {unknown}", path, unknown[0])
    for req in ("rank", "dual", "fusion", "qdim", "sixj"):
        if req not in obj:
            raise FormatError("missing required field", path, req)
    rank = obj["rank"]
    if not isinstance(rank, int) or rank < 1:
        raise FormatError("rank must be a positive integer", path, "rank")
    if not isinstance(obj["dual"], list) or len(obj["dual"]) != rank:
        raise FormatError(f"expected a list of {rank} labels", path, "dual")
    dual = [_label(x, rank, path, "dual", i) for i, x in enumerate(obj["dual"])]
    triples = []
    for i, t in enumerate(obj["fusion"]):
        if not isinstance(t, list) or len(t) != 3:
            raise FormatError("expected [i, j, k]", path, "fusion", i)
        triples.append([_label(x, rank, path, "fusion", i) for x in t])
    ring = FusionRing.from_triples(rank, triples, dual)
    if len(obj["qdim"]) != rank:
        raise FormatError(f"expected {rank} entries", path, "qdim")
    qdim = [_pair(x, path, "qdim", i) for i, x in enumerate(obj["qdim"])]
    entries = {}
    for i, row in enumerate(obj["sixj"]):
        if not isinstance(row, list) or len(row) != 8:
            raise FormatError("expected [i, j, k, l, m, n, re, im]", path, "sixj", i)
        key = tuple(_label(x, rank, path, "sixj", i) for x in row[:6])
        if not ring.tetra_support[key]:
            raise FormatError(f"6j entry {key} is not admissible", path, "sixj", i)
        entries[key] = _pair(row[6:], path, "sixj", i)
    base = SphericalData.from_entries(ring, qdim, entries)
    if ("rsym" in obj) != ("twist" in obj):
        raise FormatError("rsym and twist must be given together", path, "rsym" if "rsym" in obj else "twist")
    if "rsym" not in obj:
        return base
    rsym = np.zeros((rank,) * 3, dtype=complex)
    for i, row in enumerate(obj["rsym"]):
        if not isinstance(row, list) or len(row) != 5:
            raise FormatError("expected [i, j, k, re, im]", path, "rsym", i)
        key = tuple(_label(x, rank, path, "rsym", i) for x in row[:3])
        if not ring.admissible(*key):
            raise FormatError(f"R-symbol {key} is not admissible", path, "rsym", i)
        rsym[key] = _pair(row[3:], path, "rsym", i)
    if len(obj["twist"]) != rank:
        raise FormatError(f"expected {rank} entries", path, "twist")
    twist = [_pair(x, path, "twist", i) for i, x in enumerate(obj["twist"])]
    return ModularData(base, rsym, twist)


def _c(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def category_to_json(data: SphericalData | ModularData) -> dict:
    base = spherical(data)
    obj: dict[str, Any] = {
        "rank": base.rank,
        "dual": list(base.dual),
        "fusion": [list(t) for t in base.ring.triples()],
        "qdim": [_c(x) for x in base.qdim],
        "sixj": [[*(int(v) for v in key), *_c(base.sixj[tuple(key)])]
                 for key in np.argwhere(base.sixj_mask)],
    }
    if isinstance(data, ModularData):
        obj["rsym"] = [[a, b, c, *_c(data.rsym[a, b, c])] for a, b, c in base.ring.triples()]
        obj["twist"] = [_c(x) for x in data.twist]
    return obj


def load_category(path: str | Path) -> SphericalData | ModularData:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON at line {exc.lineno}: {exc.msg}", str(path)) from exc
    return category_from_json(obj, str(path))


def save_category(data: SphericalData | ModularData, path: str | Path) -> None:
    Path(path).write_text(json.dumps(category_to_json(data), indent=1) + "\n")
