"""Hitting sets for determinants of sums of rank-one matrices.

A(x) = sum_i x_i u_i v_i^T = U diag(x) V^T.  The hitting family is indexed by
(T, v) with T in [p]^t and v in S^t; the point is a[i] = prod_j v_j^(w_i[j])
where w_i[j] = T_j^i mod p.  Indices are 0-based throughout: column i of U
carries the weight exponent i + 1.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra.field import GF, next_prime
from .algebra.linalg import det, matmul
from .algebra.subspaces import BudgetExceeded, enumeration_budget


class EmptySupport(ValueError):
    """det(A) is the zero polynomial."""


@dataclass
class RankOneDet:
    field: GF
    U: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        self.U = np.asarray(self.U, dtype=self.field.dtype)
        self.V = np.asarray(self.V, dtype=self.field.dtype)
        if self.U.shape != self.V.shape or self.U.ndim != 2:
            raise ValueError("U and V must both be r x N")

    @property
    def r(self) -> int:
        return self.U.shape[0]

    @property
    def N(self) -> int:
        return self.U.shape[1]

    def summand(self, i: int) -> np.ndarray:
        return self.field.mul(self.U[:, i][:, None], self.V[:, i][None, :])

    def at(self, a) -> np.ndarray:
        """A(a) = U diag(a) V^T."""
        F = self.field
        Ua = F.mul(self.U, np.asarray(a, dtype=F.dtype)[None, :])
        return matmul(F, Ua, self.V.T)

    def det_at(self, a) -> int:
        return det(self.field, self.at(a))


def random_rank_one_det(F: GF, r: int, N: int, rng: np.random.Generator) -> RankOneDet:
    hi = min(F.q, 2**62)
    U = rng.integers(0, hi, size=(r, N))
    V = rng.integers(0, hi, size=(r, N))
    return RankOneDet(F, U, V)


def cauchy_binet_coefficients(A: RankOneDet, budget: int | None = None) -> dict[tuple[int, ...], int]:
    """c_S = det(U_S) det(V_S) for every r-subset S (including zeros)."""
    count = math.comb(A.N, A.r)
    limit = enumeration_budget(budget)
    if count > limit:
        raise BudgetExceeded(count, limit, "column subsets")
    F = A.field
    out = {}
    for S in itertools.combinations(range(A.N), A.r):
        cols = list(S)
        out[S] = int(F.mul(det(F, A.U[:, cols]), det(F, A.V[:, cols])))
    return out


def supp(A: RankOneDet, budget: int | None = None) -> set[tuple[int, ...]]:
    """Common bases: r-subsets S with det(U_S) det(V_S) != 0."""
    return {S for S, c in cauchy_binet_coefficients(A, budget).items() if c}


def monomial_support(A: RankOneDet) -> dict[tuple[int, ...], int]:
    """Coefficients of det(A(x)) by inclusion-exclusion over 0/1 evaluations.

    det(A(x)) is multilinear and homogeneous of degree r, so the coefficient of
    prod_{i in S} x_i equals sum_{T subset S} (-1)^{|S|-|T|} det(A(1_T)).
    """
    F = A.field
    out = {}
    for S in itertools.combinations(range(A.N), A.r):
        total = 0
        for m in range(len(S) + 1):
            for T in itertools.combinations(S, m):
                x = np.zeros(A.N, dtype=F.dtype)
                x[list(T)] = 1
                d = A.det_at(x)
                total = F.add(total, d if (len(S) - m) % 2 == 0 else F.neg(d))
        if total:
            out[S] = int(total)
    return out


# -- weights ---------------------------------------------------------------


def build_U(N: int, s: int, eps: float | Fraction):
    """Prime p >= sN/eps and the generator a -> (a^1, ..., a^N) mod p."""
    eps = Fraction(eps).limit_denominator(10**12)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    p = next_prime(math.ceil(Fraction(s * N) / eps))

    def u(a: int) -> np.ndarray:
        if not 0 <= a < p:
            raise IndexError(a)
        return np.array([pow(a, i, p) for i in range(1, N + 1)], dtype=np.int64)

    return p, u


def circulation(u, cycle) -> int:
    """|sum_i (-1)^i u[e_i]| with i counted from 1."""
    cycle = list(cycle)
    if len(cycle) % 2 or len(set(cycle)) != len(cycle):
        raise ValueError("a cycle is an even-length sequence of distinct edges")
    u = np.asarray(u)
    if cycle and (min(cycle) < 0 or max(cycle) >= len(u)):
        raise ValueError("edge index out of range")
    return abs(sum(int(u[e]) * (1 if i % 2 else -1) for i, e in enumerate(cycle, start=1)))


@dataclass
class HittingFamily:
    field: GF
    N: int
    delta: float
    s: int
    t: int
    epsilon: Fraction
    p: int
    S_required: int
    S: np.ndarray = field(repr=False)

    @property
    def undersized(self) -> bool:
        return len(self.S) < self.S_required

    @property
    def reduced(self) -> bool:
        return self.s != self.N**4

    @property
    def size(self) -> int:
        return self.p**self.t * len(self.S) ** self.t

    def descriptor(self) -> dict:
        return {"N": self.N, "t": self.t, "delta": self.delta, "epsilon": float(self.epsilon),
                "p": self.p, "s": self.s, "S_size": int(len(self.S)), "S_required": self.S_required,
                "undersized": self.undersized}

    def weights(self, T) -> np.ndarray:
        return weight_of_index(self, T)

    def point(self, T, v) -> np.ndarray:
        return hitting_point(self, T, v)

    def random_index(self, rng: random.Random) -> tuple[tuple[int, ...], tuple[int, ...]]:
        T = tuple(rng.randrange(self.p) for _ in range(self.t))
        v = tuple(int(self.S[rng.randrange(len(self.S))]) for _ in range(self.t))
        return T, v

    def sample_points(self, count: int, seed: int) -> np.ndarray:
        rng = random.Random(seed)
        pts = [self.point(*self.random_index(rng)) for _ in range(count)]
        return np.array(pts, dtype=self.field.dtype).reshape(count, self.N)


def evaluation_set(F: GF, size: int) -> np.ndarray:
    """The first ``size`` elements in the order 1, 2, ..., q-1, 0."""
    size = min(size, F.q)
    if F.q <= 2**40:
        S = np.arange(1, size + 1, dtype=F.dtype if F.dtype is not object else np.int64)
        S[S == F.q] = 0
        return S
    raise ValueError("evaluation set too large to list")


def build_hitting_family(F: GF, N: int, delta: float, s: int | None = None,
                         S_size: int | None = None) -> HittingFamily:
    """The hitting family at the explicit proof parameters (or caller-reduced s, |S|)."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if N < 1:
        raise ValueError("N must be positive")
    t = max(1, math.ceil(math.log2(N)))
    d = Fraction(delta).limit_denominator(10**9)
    eps = d / (2 * t)
    s = N**4 if s is None else s
    p, _ = build_U(N, s, eps)
    required = math.ceil(Fraction(8 * N**6 * t * t) / (d * d))
    size = required if S_size is None else S_size
    return HittingFamily(F, N, float(delta), s, t, eps, p, required, evaluation_set(F, size))


def weight_of_index(fam: HittingFamily, T) -> np.ndarray:
    """(N, t) array with w[i-1][j] = T_j^i mod p."""
    T = tuple(int(a) for a in T)
    if len(T) != fam.t or any(not 0 <= a < fam.p for a in T):
        raise IndexError(f"index {T} outside [{fam.p}]^{fam.t}")
    return np.array([[pow(a, i, fam.p) for a in T] for i in range(1, fam.N + 1)], dtype=np.int64)


def hitting_point(fam: HittingFamily, T, v) -> np.ndarray:
    F = fam.field
    v = tuple(int(x) for x in v)
    if len(v) != fam.t or any(not 0 <= x < F.q for x in v):
        raise IndexError(f"evaluation point {v} outside the field")
    w = weight_of_index(fam, T)
    a = []
    for i in range(fam.N):
        acc = 1
        for j in range(fam.t):
            acc = F.mul(acc, F.pow(v[j], int(w[i, j])))
        a.append(int(acc))
    return np.array(a, dtype=F.dtype)


# -- isolation ---------------------------------------------------------------


def _weight_sum(w: np.ndarray, S) -> tuple[int, ...]:
    return tuple(int(x) for x in w[list(S)].sum(axis=0))


@dataclass
class IsolationResult:
    isolating: bool
    argmax: list[tuple[int, ...]]
    top_weight: tuple[int, ...]


def is_isolating(w, A: RankOneDet, budget: int | None = None) -> IsolationResult:
    w = np.asarray(w, dtype=np.int64).reshape(A.N, -1)
    sp = supp(A, budget)
    if not sp:
        raise EmptySupport("det(A) is identically zero")
    sums = {S: _weight_sum(w, S) for S in sp}
    top = max(sums.values())
    arg = sorted(S for S, v in sums.items() if v == top)
    return IsolationResult(len(arg) == 1, arg, top)


@dataclass
class NonzeroCheck:
    holds: bool | None
    isolating: bool
    top_sum: int
    status: str


def isolation_implies_nonzero_check(w, A: RankOneDet, budget: int | None = None) -> NonzeroCheck:
    """Group the Cauchy-Binet terms by w(S); the lexicographically top group must not cancel."""
    w = np.asarray(w, dtype=np.int64).reshape(A.N, -1)
    coeffs = {S: c for S, c in cauchy_binet_coefficients(A, budget).items() if c}
    if not coeffs:
        return NonzeroCheck(None, False, 0, "inconclusive: empty support")
    groups: dict[tuple[int, ...], int] = {}
    members: dict[tuple[int, ...], int] = {}
    F = A.field
    for S, c in coeffs.items():
        key = _weight_sum(w, S)
        groups[key] = int(F.add(groups.get(key, 0), c))
        members[key] = members.get(key, 0) + 1
    top = max(groups)
    isolating = members[top] == 1
    top_sum = groups[top]
    if not isolating:
        return NonzeroCheck(None, False, top_sum, "inconclusive: weight assignment is not isolating")
    return NonzeroCheck(top_sum != 0, True, top_sum, "nonzero" if top_sum else "cancelled")


# -- statistics ---------------------------------------------------------------


def wilson_radius(successes: int, n: int, z: float = 1.959963984540054) -> float:
    """Half-width of the Wilson score interval."""
    if n <= 0:
        raise ValueError("need a positive sample count")
    f = successes / n
    denom = 1 + z * z / n
    return z * math.sqrt(f * (1 - f) / n + z * z / (4 * n * n)) / denom


@dataclass
class HitEstimate:
    fraction: float
    radius: float
    samples: int
    hits: int


def estimate_hit_fraction(A: RankOneDet, fam: HittingFamily, samples: int, seed: int,
                          budget: int | None = None) -> HitEstimate:
    if samples < 1:
        raise ValueError("samples must be positive")
    if fam.N != A.N:
        raise ValueError("family dimension does not match the determinant")
    if fam.field != A.field:
        raise ValueError("family and determinant live over different fields")
    if not supp(A, budget):
        raise EmptySupport("det(A) is identically zero")
    rng = random.Random(seed)
    hits = 0
    for _ in range(samples):
        a = fam.point(*fam.random_index(rng))
        hits += A.det_at(a) != 0
    return HitEstimate(hits / samples, wilson_radius(hits, samples), samples, hits)
