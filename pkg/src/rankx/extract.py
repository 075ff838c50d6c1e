"""Rank extractor constructions, bound formulas and the exhaustive badness oracle."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .algebra.field import GF, INT64_PRIME_LIMIT, field_of_order, prime_power
from .algebra.kernels import bad_counts, kernel_args
from .algebra.linalg import matmul, rank
from .algebra.subspaces import SubspaceStream, subspace_stream
from .funcfield import FunctionField

CONSTRUCTIONS = ("GR", "FS", "Random", "Reduced", "PIT", "Manual")


@dataclass
class MatrixFamily:
    """Matrices E_1..E_n in F^{r x k}, stored as an (n, r, k) integer array."""

    field: GF
    r: int
    k: int
    matrices: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.matrices = np.asarray(self.matrices, dtype=np.int64 if self.field.dtype is not object else object)
        if self.matrices.ndim != 3 or self.matrices.shape[1:] != (self.r, self.k):
            raise ValueError(f"matrices must have shape (n, {self.r}, {self.k}), got {self.matrices.shape}")
        if len(self.matrices) == 0:
            raise ValueError("a family needs at least one matrix")
        if self.matrices.size and (self.matrices.min() < 0 or self.matrices.max() >= self.field.q):
            raise ValueError("matrix entries lie outside the field")
        self.meta.setdefault("construction", "Manual")
        self.meta.setdefault("theoretical_L", None)

    @property
    def n(self) -> int:
        return len(self.matrices)

    @property
    def theoretical_L(self) -> int | None:
        return self.meta.get("theoretical_L")

    @property
    def vacuous(self) -> bool:
        """True when the claimed bound says nothing (L >= n)."""
        L = self.theoretical_L
        return L is not None and L >= self.n

    def truncate(self, m: int) -> "MatrixFamily":
        meta = dict(self.meta, truncated_from=self.n)
        return MatrixFamily(self.field, self.r, self.k, self.matrices[:m].copy(), meta)


@dataclass
class BadnessReport:
    max_bad: int
    histogram: dict[int, int]
    worst_witness: np.ndarray | None
    subspaces_checked: int
    exhaustive: bool
    n: int
    theoretical_L: int | None = None

    @property
    def vacuous(self) -> bool:
        return self.theoretical_L is not None and self.theoretical_L >= self.n

    @property
    def bound_holds(self) -> bool | None:
        if self.theoretical_L is None:
            return None
        return self.max_bad <= self.theoretical_L


# -- constructions ---------------------------------------------------------


def _check_dims(r: int, k: int):
    if not 1 <= r <= k:
        raise ValueError(f"need 1 <= r <= k, got r={r}, k={k}")


def _ceil(x: Fraction) -> int:
    return math.ceil(x)


def gr_bound(r: int, k: int, g: int) -> int:
    return _ceil(r * (Fraction((r + 1) * (3 * k - r - 2), 6) + 2 * g))


def fs_bound(r: int, k: int, q: int, g: int) -> int:
    h = -(-k // (q - 1))
    return _ceil(r * (k - r + Fraction(r - 1, 2) * h + Fraction(r + 1, 2) * g))


def build_gr(FF: FunctionField, r: int, k: int) -> MatrixFamily:
    """Row i, column j holds a function with pole order i(j-1) + 2g, evaluated at each place."""
    _check_dims(r, k)
    g = FF.genus
    n = len(FF.places)
    E = np.zeros((n, r, k), dtype=np.int64)
    for i in range(1, r + 1):
        for j in range(1, k + 1):
            E[:, i - 1, j - 1] = FF.evaluate_all(FF.pole_order_function(i * (j - 1) + 2 * g))
    meta = {"construction": "GR", "ff": FF.descriptor(), "theoretical_L": gr_bound(r, k, g)}
    return MatrixFamily(FF.base, r, k, E, meta)


def build_fs(FF: FunctionField, r: int, k: int) -> MatrixFamily:
    """Entry (i, j) is (gamma^beta(j) g_alpha(j))^(i-1) f_j evaluated at each place."""
    _check_dims(r, k)
    F = FF.base
    q = F.q
    if q < 2:
        raise ValueError("field too small")
    h = -(-k // (q - 1))
    fvals = [FF.evaluate_all(f) for f in FF.pole_order_chain(k)]
    gvals = [FF.evaluate_all(g) for g in FF.pole_order_chain(h)]
    gamma = F.primitive_element()
    n = len(FF.places)
    E = np.zeros((n, r, k), dtype=np.int64)
    for j in range(1, k + 1):
        alpha = (j - 1) // (q - 1) + 1
        beta = (j - 1) % (q - 1)
        base = F.mul(F.pow(gamma, beta), gvals[alpha - 1])
        for i in range(1, r + 1):
            E[:, i - 1, j - 1] = F.mul(F.pow(base, i - 1), fvals[j - 1])
    meta = {"construction": "FS", "ff": FF.descriptor(), "theoretical_L": fs_bound(r, k, q, FF.genus), "h": h}
    return MatrixFamily(F, r, k, E, meta)


def random_family(q: int, r: int, k: int, n: int, seed: int) -> MatrixFamily:
    _check_dims(r, k)
    if n < 1:
        raise ValueError("a family needs n >= 1")
    F = field_of_order(q)
    rng = np.random.default_rng(seed)
    E = rng.integers(0, q, size=(n, r, k), dtype=np.int64)
    return MatrixFamily(F, r, k, E, {"construction": "Random", "seed": seed, "theoretical_L": None})


# -- badness oracle ----------------------------------------------------------


def _bad_counts_generic(F: GF, E: np.ndarray, Ms: np.ndarray) -> np.ndarray:
    out = np.zeros(len(Ms), dtype=np.int64)
    for b, M in enumerate(Ms):
        out[b] = sum(rank(F, matmul(F, Ei, M)) < E.shape[1] for Ei in E)
    return out


def _counts_fn(fam: MatrixFamily):
    F = fam.field
    if F.d == 1 and F.p >= INT64_PRIME_LIMIT:
        return lambda Ms: _bad_counts_generic(F, fam.matrices, Ms)
    args = kernel_args(F)
    E = np.ascontiguousarray(fam.matrices, dtype=np.int64)
    return lambda Ms: bad_counts(E, np.ascontiguousarray(Ms, dtype=np.int64), *args)


def _scan_ranges(stream: SubspaceStream, counts, ranges, batch):
    hist = np.zeros(0, dtype=np.int64)
    best, witness = -1, None
    for lo, hi in ranges:
        for _, Ms in stream.batches(lo, hi, batch):
            c = counts(Ms)
            bc = np.bincount(c)
            if len(bc) > len(hist):
                hist = np.pad(hist, (0, len(bc) - len(hist)))
            hist[: len(bc)] += bc
            i = int(np.argmax(c))
            if c[i] > best:
                best, witness = int(c[i]), Ms[i].copy()
    return hist, best, witness


def measure_badness(fam: MatrixFamily, mode: str = "exhaustive", samples: int = 0,
                    seed: int | None = None, budget: int | None = None,
                    threads: int = 1, batch: int = 32768) -> BadnessReport:
    """Count #{i : rank(E_i M) < r} over canonical M (all of them, or a seeded sample)."""
    counts = _counts_fn(fam)
    if mode == "exhaustive":
        stream = subspace_stream(fam.field, fam.k, fam.r, budget)
        total = stream.total
        if threads > 1:
            step = -(-total // threads)
            chunks = [[(a, min(a + step, total))] for a in range(0, total, step)]
            with ThreadPoolExecutor(threads) as ex:
                parts = list(ex.map(lambda rg: _scan_ranges(stream, counts, rg, batch), chunks))
        else:
            parts = [_scan_ranges(stream, counts, [(0, total)], batch)]
        hist = np.zeros(max(len(h) for h, _, _ in parts), dtype=np.int64)
        best, witness = -1, None
        for h, b, w in parts:
            hist[: len(h)] += h
            if b > best:
                best, witness = b, w
        checked = total
    elif mode == "sample":
        if samples < 1 or seed is None:
            raise ValueError("sampling needs a positive sample count and a seed")
        stream = SubspaceStream(fam.field, fam.k, fam.r)
        Ms = stream.sample(samples, seed)
        c = counts(Ms)
        hist = np.bincount(c)
        i = int(np.argmax(c))
        best, witness = int(c[i]), Ms[i].copy()
        checked = samples
    else:
        raise ValueError(f"unknown mode {mode!r}")
    histogram = {int(b): int(v) for b, v in enumerate(hist) if v}
    return BadnessReport(best, histogram, witness, int(checked), mode == "exhaustive",
                         fam.n, fam.theoretical_L)


@dataclass
class DisperserResult:
    holds: bool
    counterexample: np.ndarray | None
    report: BadnessReport


def is_disperser(fam: MatrixFamily, mode: str = "exhaustive", **kw) -> DisperserResult:
    """Every M has some E_i with rank(E_i M) = r."""
    rep = measure_badness(fam, mode, **kw)
    holds = rep.max_bad <= fam.n - 1
    return DisperserResult(holds, None if holds else rep.worst_witness, rep)


# -- randomized existence (union bound) --------------------------------------

mpmath.mp.dps = 50


def existence_log_lhs(q: int, r: int, k: int, L: int, n: int) -> mpmath.mpf:
    """Natural log of q^{r(k-r)} e^{2/(q-1)} C(n, L+1) (1 - e^{-2/(q-1)})^{L+1}."""
    if not 0 <= L < n:
        raise ValueError("need 0 <= L < n")
    c = mpmath.mpf(2) / (q - 1)
    return (r * (k - r) * mpmath.log(q) + c + mpmath.log(math.comb(n, L + 1))
            + (L + 1) * mpmath.log(-mpmath.expm1(-c)))


def existence_feasible(q: int, r: int, k: int, L: int, n: int) -> bool:
    return bool(existence_log_lhs(q, r, k, L, n) < 0)


def c_delta(delta: float) -> mpmath.mpf:
    d = mpmath.mpf(delta)
    a = 1 / d - 1
    return a * mpmath.log((mpmath.e / d) / a)


def delta_star(q: int, tol: float = 1e-9) -> float:
    """Smallest delta in (0,1) with C_delta <= -ln(1 - e^{-2/(q-1)}) / 2 (C_delta decreases)."""
    if q < 2:
        raise ValueError("q must be at least 2")
    target = -mpmath.log(-mpmath.expm1(-mpmath.mpf(2) / (q - 1))) / 2
    lo, hi = mpmath.mpf(0), mpmath.mpf(1)
    while hi - lo > tol / 4:
        mid = (lo + hi) / 2
        if c_delta(mid) <= target:
            hi = mid
        else:
            lo = mid
    return float(hi)


def existence_scan(q: int, r: int, k: int, n_of_L, L_max: int = 5000) -> tuple[int, int] | None:
    """Smallest L (with n = n_of_L(L)) for which the union bound succeeds, or None."""
    for L in range(0, L_max + 1):
        n = n_of_L(L)
        if n > L and existence_feasible(q, r, k, L, n):
            return L, n
    return None


def expected_bad_fraction(q: int, r: int) -> float:
    """Probability that a uniform r x r matrix is singular."""
    p = 1.0
    for i in range(1, r + 1):
        p *= 1 - q ** (-i)
    return 1 - p


def singular_product_gap(q: int, r: int) -> float:
    """prod_{i<=r}(1 - q^-i) - e^{-2/(q-1)}; the inequality says this is nonnegative."""
    prod = mpmath.mpf(1)
    for i in range(1, r + 1):
        prod *= 1 - mpmath.mpf(q) ** (-i)
    return float(prod - mpmath.exp(-mpmath.mpf(2) / (q - 1)))


# -- tower parameter calculators ------------------------------------------------


@dataclass(frozen=True)
class TowerParams:
    kind: str
    q: int
    i: int
    extension_degree: int
    N_lower: int
    genus: float
    genus_exact: bool


def tower_params(kind: str, q: int, i: int) -> TowerParams:
    if i < 1:
        raise ValueError("tower level starts at 1")
    p, e = prime_power(q)
    if kind == "GS":
        if e % 2:
            raise ValueError("the GS tower needs a square q")
        ell = p ** (e // 2)
        deg = ell ** (i - 1)
        N = ell**i * (ell - 1) + 1
        if i % 2 == 0:
            g = (ell ** (i // 2) - 1) ** 2
        else:
            g = (ell ** ((i + 1) // 2) - 1) * (ell ** ((i - 1) // 2) - 1)
        return TowerParams(kind, q, i, deg, N, g, True)
    if kind == "BBGS":
        if e % 2 == 0 or e < 3:
            raise ValueError("the BBGS tower needs q = p^(2m+1) with m >= 1")
        m = (e - 1) // 2
        deg = p ** (2 * m * (i - 1))
        N = deg * (q - 1)
        g = Fraction(deg, 2) * (Fraction(q - 1, p**m - 1) + Fraction(q - 1, p ** (m + 1) - 1))
        return TowerParams(kind, q, i, deg, N, float(g), False)
    raise ValueError(f"unknown tower {kind!r}")
