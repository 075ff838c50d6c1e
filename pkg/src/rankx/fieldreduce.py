"""Moving rank extractors from GF(Q) down to a subfield GF(q).

Two routes: the coordinate split (every choice of basis coordinate per row)
and the rank-one program evaluated at hitting-set points.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .algebra.field import FieldError, TABLE_LIMIT, field_make, prime_power
from .algebra.tower import TowerContext
from .extract import MatrixFamily, build_fs, measure_badness
from .funcfield import FunctionField, hermitian_function_field, rational_function_field
from .hitting import HittingFamily, build_hitting_family


def _check_field(fam: MatrixFamily, ctx: TowerContext):
    if fam.field != ctx.big:
        raise FieldError(f"family lives over {fam.field!r}, expected {ctx.big!r}")


def coordinate_rows(fam: MatrixFamily, ctx: TowerContext) -> np.ndarray:
    """(n, r, d, k) array: [e, i, j] is the j-th coordinate row of row i of E_e."""
    _check_field(fam, ctx)
    coords = ctx.decompose(fam.matrices)  # (n, r, k, d)
    return np.moveaxis(coords, -1, 2)


def reduce_multilinear(fam: MatrixFamily, ctx: TowerContext) -> MatrixFamily:
    """Emit E^(sigma) for every E and every sigma in [d]^r (sigma in lexicographic order)."""
    C = coordinate_rows(fam, ctx)
    n, r, d, k = C.shape
    sigmas = list(itertools.product(range(d), repeat=r))
    out = np.empty((n, len(sigmas), r, k), dtype=np.int64)
    rows = np.arange(r)
    for s, sigma in enumerate(sigmas):
        out[:, s] = C[:, rows, list(sigma), :]
    meta = {"construction": "Reduced", "source": dict(fam.meta), "d": d,
            "big_q": ctx.Q, "small_q": ctx.q, "theoretical_L": None}
    if fam.theoretical_L is not None:
        # each bad M for E contributes at most d^r bad children
        meta["inherited_L"] = fam.theoretical_L * len(sigmas)
    return MatrixFamily(ctx.small, r, fam.k, out.reshape(n * len(sigmas), r, k), meta)


def build_rank1_program(E, ctx: TowerContext) -> np.ndarray:
    """(r, d, r, k) array of the rank-one pieces A_{i,j}(E)."""
    E = np.asarray(E)
    r, k = E.shape
    C = np.moveaxis(ctx.decompose(E), -1, 1)  # (r, d, k)
    d = C.shape[1]
    A = np.zeros((r, d, r, k), dtype=np.int64)
    for i in range(r):
        for j in range(d):
            A[i, j, i] = C[i, j]
    return A


def _apply_points(C: np.ndarray, points: np.ndarray, F) -> np.ndarray:
    """E*(a) for every matrix (coordinate rows C: n,r,d,k) and point a (P, r*d)."""
    n, r, d, k = C.shape
    P = len(points)
    a = points.reshape(P, r, d)
    # out[e, p, i, :] = sum_j a[p, i, j] * C[e, i, j, :]
    prod = F.mul(a[None, :, :, :, None], C[:, None, :, :, :])
    return F.sum(prod, axis=3)


def pit_reduce(fam: MatrixFamily, ctx: TowerContext, hit: HittingFamily | None = None,
               points=None, samples: int | None = None, seed: int | None = None,
               budget: int = 10**6) -> MatrixFamily:
    """Emit E*(a) = sum_{i,j} a_{i*d+j} A_{i,j}(E) for every E and hitting point a."""
    C = coordinate_rows(fam, ctx)
    n, r, d, k = C.shape
    meta = {"construction": "PIT", "source": dict(fam.meta), "d": d, "big_q": ctx.Q,
            "small_q": ctx.q, "theoretical_L": None}
    if points is None:
        if hit is None:
            raise ValueError("need a hitting family or explicit points")
        if hit.N != d * r:
            raise ValueError(f"hitting family has N={hit.N}, need d*r={d * r}")
        if hit.field != ctx.small:
            raise FieldError("hitting family must live over the small field")
        if samples is None:
            if hit.size > budget:
                raise ValueError(f"hitting family has {hit.size} points; pass samples= and seed=")
            pts = [hit.point(T, v) for T in itertools.product(range(hit.p), repeat=hit.t)
                   for v in itertools.product(hit.S.tolist(), repeat=hit.t)]
            points = np.array(pts, dtype=np.int64)
        else:
            if seed is None:
                raise ValueError("sampling hitting points needs a seed")
            points = hit.sample_points(samples, seed)
            meta["point_seed"] = seed
        meta["hit"] = hit.descriptor()
        L = fam.theoretical_L
        if L is not None:
            meta["reduction_bound_inputs"] = {"L": L, "n": n, "delta": hit.delta}
    points = np.asarray(points, dtype=np.int64).reshape(-1, d * r)
    out = _apply_points(C, points, ctx.small)
    meta["points"] = len(points)
    return MatrixFamily(ctx.small, r, fam.k, out.reshape(n * len(points), r, k), meta)


def pit_badness_bound(L: int, n: int, delta: float, points: int) -> Fraction:
    """(L + delta (n - L)) * |H|: bad members of the reduced family allowed by the reduction bound."""
    return (L + Fraction(delta).limit_denominator(10**9) * (n - L)) * points


# -- pipelines -----------------------------------------------------------------


def _backend(Q_field, k: int) -> FunctionField | None:
    Q = Q_field.q
    if Q > k:
        return FunctionField("rational", Q_field)
    p, e = prime_power(Q)
    if e % 2 == 0:
        return FunctionField("hermitian", Q_field, p ** (e // 2))
    return None


def pipeline_small_field_disperser(q: int, r: int, k: int, theta: int | None = None,
                                   max_order: int = TABLE_LIMIT) -> MatrixFamily:
    """FS over an extension GF(q^d), trimmed to L+1 members, then split to GF(q)."""
    p, e = prime_power(q)
    theta = (2 * r) ** 4 if theta is None else theta
    tried = []
    d = 1 if e > 1 else 2
    while q**d <= max_order:
        Q = q**d
        tried.append(d)
        if Q >= theta:
            big = field_make(p, e * d)
            FF = _backend(big, k)
            if FF is not None:
                break
        d += 1
    else:
        raise ValueError(f"no admissible extension degree for q={q}, theta={theta}; tried d in {tried}")
    fs = build_fs(FF, r, k)
    L = fs.theoretical_L
    keep = min(fs.n, L + 1)
    trimmed = fs.truncate(keep)
    trace = {"d": d, "theta": theta, "instance": FF.descriptor(), "n_built": fs.n, "kept": keep,
             "theoretical_L": L, "vacuous": L >= fs.n, "tried_d": tried}
    if d == 1:
        trimmed.meta["pipeline"] = trace
        return trimmed
    ctx = TowerContext(big, field_make(p, e))
    out = reduce_multilinear(trimmed, ctx)
    out.meta["pipeline"] = trace
    return out


def pipeline_prime_field_extractor(q: int, r: int, k: int, delta: float, samples: int, seed: int,
                                   s: int | None = None) -> MatrixFamily:
    """FS over GF(q^2), trimmed to ceil(L0 / (delta/2)) members, then reduced through hitting points."""
    p, e = prime_power(q)
    if e != 1:
        raise ValueError("this pipeline needs a prime field")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in the open interval (0, 1)")
    big = field_make(q, 2)
    FF = rational_function_field(q * q) if q * q > k else hermitian_function_field(q)
    fs = build_fs(FF, r, k)
    L0 = fs.theoretical_L
    dprime = Fraction(delta).limit_denominator(10**9) / 2
    n1 = math.ceil(L0 / dprime)
    trimmed = fs.truncate(min(n1, fs.n))
    small = field_make(q)
    ctx = TowerContext(big, small)
    hit = build_hitting_family(small, 2 * r, float(dprime), s=s)
    out = pit_reduce(trimmed, ctx, hit, samples=samples, seed=seed)
    out.meta["pipeline"] = {"Q": q * q, "instance": FF.descriptor(), "L0": L0, "delta": delta,
                            "delta_prime": float(dprime), "n1": n1, "kept": trimmed.n,
                            "short_of_n1": trimmed.n < n1, "target_ratio": delta}
    return out


def measured_ratio(fam: MatrixFamily, mode: str = "sample", samples: int = 10_000, seed: int = 0):
    rep = measure_badness(fam, mode, samples=samples, seed=seed)
    return rep.max_bad / fam.n, rep
