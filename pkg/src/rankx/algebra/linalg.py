"""Dense linear algebra over a GF: matrices are 2-D integer numpy arrays."""

from __future__ import annotations

import itertools

import numpy as np

from .field import GF


class DimensionError(ValueError):
    pass


class RankDeficient(ValueError):
    pass


def as_matrix(F: GF, A) -> np.ndarray:
    A = np.array(A, dtype=F.dtype)
    if A.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {A.shape}")
    if A.size and (A.min() < 0 or A.max() >= F.q):
        raise ValueError(f"matrix entries outside {F!r}")
    return A


def identity(F: GF, n: int) -> np.ndarray:
    return np.eye(n, dtype=F.dtype)


def matmul(F: GF, A, B) -> np.ndarray:
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape[-1] != B.shape[-2]:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    if F.d == 1 and F.dtype is not object and (F.p - 1) ** 2 * max(A.shape[-1], 1) < 2**62:
        return (A.astype(np.int64) @ B.astype(np.int64)) % F.p
    if F.d == 1:
        return (A.astype(object) @ B.astype(object)) % F.p
    prod = F.mul(A[..., :, :, None], B[..., None, :, :])
    return F.sum(prod, axis=-2)


def rref(F: GF, A) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form and pivot columns."""
    R = np.array(A, dtype=F.dtype, copy=True)
    m, n = R.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.nonzero(R[row:, col])[0]
        if len(nz) == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        R[row] = F.mul(R[row], F.inv(R[row, col]))
        others = np.nonzero(R[:, col])[0]
        others = others[others != row]
        if len(others):
            f = R[others, col][:, None]
            R[others] = F.sub(R[others], F.mul(f, R[row][None, :]))
        pivots.append(col)
        row += 1
    return R, pivots


def rank(F: GF, A) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def det(F: GF, A) -> int:
    A = np.array(A, dtype=F.dtype, copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"determinant of non-square matrix {A.shape}")
    n = A.shape[0]
    result = 1
    for col in range(n):
        nz = np.nonzero(A[col:, col])[0]
        if len(nz) == 0:
            return 0
        piv = col + int(nz[0])
        if piv != col:
            A[[col, piv]] = A[[piv, col]]
            result = F.neg(result)
        pv = A[col, col]
        result = F.mul(result, pv)
        inv = F.inv(pv)
        below = np.arange(col + 1, n)
        if len(below):
            f = F.mul(A[below, col], inv)[:, None]
            A[below] = F.sub(A[below], F.mul(f, A[col][None, :]))
    return int(result)


def mat_rank_det(F: GF, A) -> tuple[int, int | None]:
    """(rank, determinant) with determinant None for non-square input."""
    A = np.asarray(A)
    r = rank(F, A)
    d = det(F, A) if A.ndim == 2 and A.shape[0] == A.shape[1] else None
    return r, d


def nullspace(F: GF, A) -> np.ndarray:
    """Rows form a basis of {x : A x = 0}, in reduced row-echelon form."""
    A = np.asarray(A, dtype=F.dtype)
    m, n = A.shape
    R, piv = rref(F, A)
    free = [c for c in range(n) if c not in piv]
    N = np.zeros((len(free), n), dtype=F.dtype)
    for t, f in enumerate(free):
        N[t, f] = 1
        for i, pc in enumerate(piv):
            N[t, pc] = F.neg(R[i, f])
    if len(N):
        N = rref(F, N)[0]
    return N


def solve(F: GF, A, b) -> np.ndarray | None:
    """Some x with A x = b, or None when inconsistent."""
    A = np.asarray(A, dtype=F.dtype)
    b = np.asarray(b, dtype=F.dtype).reshape(-1, 1)
    aug = np.concatenate([A, b], axis=1)
    R, piv = rref(F, aug)
    n = A.shape[1]
    if n in piv:
        return None
    x = np.zeros(n, dtype=F.dtype)
    for i, pc in enumerate(piv):
        x[pc] = R[i, n]
    return x


def cauchy_binet_expand(F: GF, A, B) -> int:
    """det(A B) computed as the sum over r-subsets I of det(A_I) det(B^I)."""
    A = np.asarray(A)
    B = np.asarray(B)
    r, k = A.shape
    if B.shape != (k, r):
        raise DimensionError(f"need A r x k and B k x r, got {A.shape} and {B.shape}")
    if r > k:
        raise DimensionError("Cauchy-Binet needs r <= k")
    total = 0
    for I in itertools.combinations(range(k), r):
        idx = list(I)
        total = F.add(total, F.mul(det(F, A[:, idx]), det(F, B[idx, :])))
    return int(total)


def greedy_column_select(F: GF, M) -> list[int]:
    """Scan columns right to left, keeping each column outside the span of those kept.

    Returns the selected 0-based indices in increasing order.
    """
    M = np.asarray(M, dtype=F.dtype)
    r, k = M.shape
    chosen: list[int] = []
    for i in range(k - 1, -1, -1):
        cols = chosen + [i]
        if rank(F, M[:, cols]) == len(cols):
            chosen.append(i)
        if len(chosen) == r:
            break
    if len(chosen) != r or rank(F, M) != r:
        raise RankDeficient(f"matrix has rank {rank(F, M)} < {r}")
    return sorted(chosen)
