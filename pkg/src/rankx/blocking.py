"""Strong and affine blocking sets: constructions, exhaustive checks, and character bias."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra.field import GF, field_make, field_of_order, prime_power
from .algebra.kernels import affine_cover, kernel_args, strong_block_ranks
from .algebra.linalg import matmul, nullspace, rank, rref
from .algebra.subspaces import BudgetExceeded, Subspace, SubspaceStream, enumeration_budget, subspace_stream
from .algebra.tower import embed_subfield
from .extract import MatrixFamily


def normalize_points(F: GF, X: np.ndarray) -> np.ndarray:
    """Scale each nonzero row so its first nonzero coordinate is 1; zero rows are dropped."""
    X = np.asarray(X, dtype=np.int64)
    X = X[np.any(X != 0, axis=1)]
    if len(X) == 0:
        return X.reshape(0, X.shape[1] if X.ndim == 2 else 0)
    lead = X[np.arange(len(X)), np.argmax(X != 0, axis=1)]
    return np.asarray(F.mul(X, F.inv(lead)[:, None]), dtype=np.int64)


def _unique_rows(X: np.ndarray) -> np.ndarray:
    if len(X) == 0:
        return X
    return np.unique(X, axis=0)


@dataclass
class BlockingSet:
    mode: str
    field: GF
    k: int
    points: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in ("projective", "affine"):
            raise ValueError(f"unknown mode {self.mode!r}")
        pts = np.asarray(self.points, dtype=np.int64).reshape(-1, self.k)
        if self.mode == "projective":
            pts = normalize_points(self.field, pts)
        self.points = _unique_rows(pts)

    def __len__(self):
        return len(self.points)


def projective_points(F: GF, k: int) -> np.ndarray:
    allv = np.array(list(itertools.product(range(F.q), repeat=k)), dtype=np.int64)
    return _unique_rows(normalize_points(F, allv))


def _nonzero_combinations(q: int, r: int) -> np.ndarray:
    return np.array(list(itertools.product(range(q), repeat=r))[1:], dtype=np.int64)


def disperser_to_blocking(fam: MatrixFamily, s: int | None = None) -> BlockingSet:
    """Union of the projectivized row spaces of the members."""
    s = fam.r - 1 if s is None else s
    if fam.r != s + 1:
        raise ValueError(f"need r = s + 1, got r={fam.r}, s={s}")
    F = fam.field
    C = _nonzero_combinations(F.q, fam.r)
    vecs = matmul(F, C[None, :, :], fam.matrices)  # (n, q^r - 1, k)
    pts = _unique_rows(normalize_points(F, vecs.reshape(-1, fam.k)))
    n = fam.n
    bound = n * (F.q ** (s + 1) - 1) // (F.q - 1)
    meta = {"source": fam.meta.get("construction"), "s": s, "n": n,
            "size_bound": bound, "size_bound_loose": 2 * n * F.q**s}
    return BlockingSet("projective", F, fam.k, pts, meta)


def affine_cone(B: BlockingSet) -> BlockingSet:
    """All multiples of the points of a projective set, including the origin."""
    F = B.field
    lam = np.arange(1, F.q, dtype=np.int64)
    pts = F.mul(lam[:, None, None], B.points[None, :, :]).reshape(-1, B.k)
    pts = np.concatenate([np.zeros((1, B.k), dtype=np.int64), pts])
    return BlockingSet("affine", F, B.k, pts, {"source": "cone", "base": dict(B.meta)})


@dataclass
class BlockingCertificate:
    mode: str
    s: int
    subspaces_checked: int
    holds: bool
    exhaustive: bool
    counterexample: dict | None = None


def _stream(F, k, s, budget, sample, seed, count_factor=1):
    total = SubspaceStream(F, k, s).total if not sample else None
    if sample:
        if seed is None:
            raise ValueError("sampling needs a seed")
        st = SubspaceStream(F, k, s)
        return iter([st.sample(sample, seed)]), sample
    limit = enumeration_budget(budget)
    if total * count_factor > limit:
        raise BudgetExceeded(total * count_factor, limit)
    st = subspace_stream(F, k, s, budget)
    return (Ms for _, Ms in st.batches()), st.total


def verify_strong_blocking(B: BlockingSet, s: int, budget: int | None = None,
                           sample: int = 0, seed: int | None = None) -> BlockingCertificate:
    """For every codim-s subspace Sigma = ker(Y^T), check that B meets Sigma in a spanning set."""
    if B.mode != "projective":
        raise ValueError("strong blocking is a projective notion")
    F, k = B.field, B.k
    if not 1 <= s < k:
        raise ValueError("need 1 <= s < k")
    target = k - s
    args = kernel_args(F)
    pts = np.ascontiguousarray(B.points, dtype=np.int64)
    chunks, total = _stream(F, k, s, budget, sample, seed)
    for Ys in chunks:
        ranks = strong_block_ranks(pts, np.ascontiguousarray(Ys), target, *args)
        bad = np.nonzero(ranks < target)[0]
        if len(bad):
            Y = Ys[bad[0]]
            return BlockingCertificate("strong", s, total, False, not sample,
                                       _strong_counterexample(F, pts, Y))
    return BlockingCertificate("strong", s, total, True, not sample)


def _strong_counterexample(F: GF, pts: np.ndarray, Y: np.ndarray) -> dict:
    k = Y.shape[0]
    sigma = nullspace(F, Y.T)
    inside = pts[~np.any(matmul(F, pts, Y) != 0, axis=1)] if len(pts) else pts
    W = Subspace.span(F, inside, ambient=k) if len(inside) else Subspace(F, k, np.zeros((0, k), dtype=np.int64))
    # extend W inside Sigma up to a hyperplane of Sigma
    H = W.basis
    for v in sigma:
        if H.shape[0] == sigma.shape[0] - 1:
            break
        cand = np.concatenate([H, v[None, :]])
        if rank(F, cand) > H.shape[0]:
            H = cand
    H = rref(F, H)[0][: H.shape[0]] if len(H) else H
    return {"sigma_dual": Y.T.tolist(), "sigma_basis": sigma.tolist(),
            "points_in_sigma": inside.tolist(), "hyperplane_basis": np.asarray(H).tolist()}


def verify_affine_blocking(B: BlockingSet, s: int, budget: int | None = None,
                           sample: int = 0, seed: int | None = None) -> BlockingCertificate:
    """Every coset {x : Y^T x = c} of every codim-s linear subspace contains a point of B."""
    F, k = B.field, B.k
    if not 1 <= s <= k:
        raise ValueError("need 1 <= s <= k")
    pts = np.ascontiguousarray(B.points, dtype=np.int64)
    args = kernel_args(F)
    chunks, total = _stream(F, k, s, budget, sample, seed, count_factor=F.q**s)
    for Ys in chunks:
        missed = affine_cover(pts, np.ascontiguousarray(Ys), *args)
        bad = np.nonzero(missed >= 0)[0]
        if len(bad):
            Y = Ys[bad[0]]
            idx = int(missed[bad[0]])
            c = [(idx // F.q**j) % F.q for j in range(s)]
            return BlockingCertificate("affine", s, total * F.q**s, False, not sample,
                                       {"equations": Y.T.tolist(), "rhs": c})
    return BlockingCertificate("affine", s, total * F.q**s, True, not sample)


# -- characters and bias -------------------------------------------------------


@dataclass
class BiasedSet:
    field: GF
    k: int
    vectors: np.ndarray
    measured_bias: float | Fraction | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.int64).reshape(-1, self.k)
        if len(self.vectors) == 0:
            raise ValueError("a biased set needs at least one vector")


def _fwht(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.int64).copy()
    h = 1
    n = len(a)
    while h < n:
        a = a.reshape(-1, 2, h)
        x, y = a[:, 0, :].copy(), a[:, 1, :].copy()
        a[:, 0, :], a[:, 1, :] = x + y, x - y
        a = a.reshape(n)
        h *= 2
    return a


def _character_sums_binary(S: BiasedSet) -> np.ndarray:
    """Exact integer sums sum_x (-1)^<y,x> for all y in F_2^k (index = bit pattern of y)."""
    k = S.k
    idx = S.vectors @ (1 << np.arange(k, dtype=np.int64))
    hist = np.bincount(idx, minlength=1 << k)
    return _fwht(hist)


def _trace_values(F: GF, a) -> np.ndarray:
    return np.asarray(F.trace(np.asarray(a, dtype=np.int64)), dtype=np.int64)


def _character_magnitudes_direct(S: BiasedSet, budget: int | None = None, batch: int = 256):
    """|sum_x omega^{Tr<y,x>}| for every nonzero y, via residue-class counts."""
    F, k = S.field, S.k
    p = F.p
    total = F.q**k - 1
    limit = enumeration_budget(budget)
    if total * len(S.vectors) > limit:
        raise BudgetExceeded(total * len(S.vectors), limit, "character evaluations")
    omega = np.exp(2j * np.pi * np.arange(p) / p)
    ys = np.array(list(itertools.product(range(F.q), repeat=k))[1:], dtype=np.int64)
    out = np.empty(len(ys))
    exact = np.empty(len(ys), dtype=np.int64) if p == 2 else None
    for lo in range(0, len(ys), batch):
        Y = ys[lo:lo + batch]
        ip = matmul(F, Y, S.vectors.T)  # (B, m)
        tr = _trace_values(F, ip)
        counts = np.stack([(tr == c).sum(axis=1) for c in range(p)], axis=1)
        if p == 2:
            exact[lo:lo + batch] = counts[:, 0] - counts[:, 1]
        out[lo:lo + batch] = np.abs(counts @ omega)
    return out, exact, ys


def bias(S: BiasedSet, budget: int | None = None, method: str = "auto") -> float | Fraction:
    """Max over nontrivial additive characters of |E_{x in S} chi(x)|.

    Exact (a Fraction) in characteristic 2, float otherwise.
    """
    F = S.field
    m = len(S.vectors)
    if method == "auto":
        method = "walsh" if F.q == 2 else "direct"
    if method == "walsh":
        if F.q != 2:
            raise ValueError("the Walsh transform route needs q = 2")
        sums = _character_sums_binary(S)
        return Fraction(int(np.abs(sums[1:]).max()), m)
    mags, exact, _ = _character_magnitudes_direct(S, budget)
    if exact is not None:
        return Fraction(int(np.abs(exact).max()), m)
    return float(mags.max() / m)


def trace_to_subfield(big: GF, small: GF, x) -> np.ndarray:
    """Tr_{big/small}(x) as small-field elements."""
    m = big.d // small.d
    acc = np.asarray(x, dtype=np.int64)
    y = acc
    for _ in range(m - 1):
        y = big.pow(y, small.q)
        acc = big.add(acc, y)
    emb = embed_subfield(small, big)
    inv = np.full(big.q, -1, dtype=np.int64)
    inv[emb] = np.arange(small.q)
    out = inv[np.asarray(acc, dtype=np.int64)]
    assert np.all(out >= 0)
    return out


def biased_exponents(p: int, k: int, pattern: str = "coprime") -> list[int]:
    if pattern == "consecutive":
        return list(range(1, k + 1))
    if pattern == "coprime":
        out, e = [], 1
        while len(out) < k:
            if e % p:
                out.append(e)
            e += 1
        return out
    raise ValueError(f"unknown exponent pattern {pattern!r}")


def build_biased_set(q: int, k: int, m: int, exponents: str = "coprime") -> BiasedSet:
    """Vectors (Tr(x^e_1), ..., Tr(x^e_k)) for x ranging over GF(q^m)."""
    p, e = prime_power(q)
    if q**m >= 2**31:
        raise ValueError("q^m too large")
    small = field_make(p, e)
    big = field_make(p, e * m)
    exps = biased_exponents(p, k, exponents)
    xs = np.arange(big.q, dtype=np.int64)
    V = np.stack([trace_to_subfield(big, small, big.pow(xs, ex)) for ex in exps], axis=1)
    heuristic = (max(exps) - 1) * q ** (-m / 2)
    meta = {"q": q, "k": k, "m": m, "exponents": exps, "pattern": exponents, "heuristic_bias": heuristic}
    return BiasedSet(small, k, V, None, meta)


@dataclass
class AffineSubspace:
    offset: np.ndarray
    directions: np.ndarray

    def points(self, F: GF) -> np.ndarray:
        D = np.asarray(self.directions, dtype=np.int64)
        if D.size == 0:
            return np.asarray(self.offset, dtype=np.int64)[None, :]
        C = np.array(list(itertools.product(range(F.q), repeat=len(D))), dtype=np.int64)
        return np.asarray(F.add(matmul(F, C, D), self.offset[None, :]), dtype=np.int64)


def subspace_indicator_l1(V: AffineSubspace, F: GF, k: int, budget: int | None = None) -> float:
    """L1 norm of the Fourier transform of 1_V (normalized by |G|)."""
    limit = enumeration_budget(budget)
    G = F.q**k
    X = V.points(F)
    if G * len(X) > limit:
        raise BudgetExceeded(G * len(X), limit, "character evaluations")
    ys = np.array(list(itertools.product(range(F.q), repeat=k)), dtype=np.int64)
    omega = np.exp(2j * np.pi * np.arange(F.p) / F.p)
    tr = _trace_values(F, matmul(F, ys, X.T))  # (G, |V|)
    coeffs = omega[(-tr) % F.p].sum(axis=1) / G
    return float(np.abs(coeffs).sum())


def expectation_gap(S: BiasedSet, f_values: dict) -> float:
    """|E_S f - E_G f| for a function given as a lookup on vectors (tuples)."""
    F, k = S.field, S.k
    allv = list(itertools.product(range(F.q), repeat=k))
    eg = sum(f_values.get(v, 0) for v in allv) / len(allv)
    es = sum(f_values.get(tuple(int(c) for c in v), 0) for v in S.vectors) / len(S.vectors)
    return abs(es - eg)


@dataclass
class BiasedBlockingResult:
    bias: float | Fraction
    affine_threshold: Fraction
    strong_threshold: Fraction
    affine_ok: bool
    strong_ok: bool
    affine_set: BlockingSet | None
    strong_set: BlockingSet | None


def biased_to_blocking(S: BiasedSet, s: int, budget: int | None = None) -> BiasedBlockingResult:
    q = S.field.q
    if S.measured_bias is None:
        S.measured_bias = bias(S, budget)
    b = S.measured_bias
    aff = Fraction(1, q**s)
    strong = Fraction(q - 1, 2 * q ** (s + 1))
    aff_ok = b < aff
    strong_ok = b < strong
    meta = {"source": "biased", "bias": float(b), "s": s}
    A = BlockingSet("affine", S.field, S.k, S.vectors, dict(meta)) if aff_ok else None
    P = BlockingSet("projective", S.field, S.k, S.vectors, dict(meta)) if strong_ok else None
    return BiasedBlockingResult(b, aff, strong, aff_ok, strong_ok, A, P)


@dataclass(frozen=True)
class BoundTable:
    q: int
    k: int
    s: int
    b_affine_lower: int
    b_affine_lower_next: int
    b_strong_lower: Fraction
    b_jamison: int

    def disperser_size_bound(self, n: int) -> tuple[int, int]:
        """(n (q^{s+1}-1)/(q-1), 2 n q^s)."""
        q, s = self.q, self.s
        return n * (q ** (s + 1) - 1) // (q - 1), 2 * n * q**s

    def cone_consistent(self, strong_size: int, affine_holds: bool) -> bool:
        """(q-1) |B| + 1 >= b_q(k, s+1), whenever the cone is verified affine-blocking."""
        return not affine_holds or (self.q - 1) * strong_size + 1 >= self.b_affine_lower_next


def affine_lower(q: int, k: int, s: int) -> int:
    return (q**s - 1) * (k - s + 1) + 1


def bound_tables(q: int, k: int, s: int) -> BoundTable:
    return BoundTable(q, k, s, affine_lower(q, k, s), affine_lower(q, k, s + 1),
                      Fraction((q ** (s + 1) - 1) * (k - s), q - 1), (q - 1) * k + 1)


def minimum_affine_blocking_size(q: int, k: int, s: int = 1, max_size: int | None = None):
    """Smallest |B| with B an affine s-blocking set of F_q^k, by exhaustive subset search."""
    F = field_of_order(q)
    allv = np.array(list(itertools.product(range(q), repeat=k)), dtype=np.int64)
    max_size = len(allv) if max_size is None else max_size
    for size in range(1, max_size + 1):
        for combo in itertools.combinations(range(len(allv)), size):
            B = BlockingSet("affine", F, k, allv[list(combo)])
            if verify_affine_blocking(B, s).holds:
                return size, B
    return None, None
