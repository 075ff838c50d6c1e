"""Compiled inner loops for the exhaustive oracles.

Every kernel takes the field as ``(mode, p, q, d, exp, log)``: mode 0 is a
prime field (arithmetic mod p, p < 2^31), mode 1 an extension field using the
log/exp tables of :class:`~rankx.algebra.field.GF`.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .field import GF, INT64_PRIME_LIMIT

_EMPTY = np.zeros(1, dtype=np.int64)


def kernel_args(F: GF):
    if F.d == 1:
        if F.p >= INT64_PRIME_LIMIT:
            raise ValueError("compiled kernels need p < 2^31")
        return (0, F.p, F.q, 1, _EMPTY, _EMPTY)
    return (1, F.p, F.q, F.d, F._exp, F._log)


@njit(cache=True, nogil=True)
def fadd(a, b, mode, p, d):
    if mode == 0:
        return (a + b) % p
    if p == 2:
        return a ^ b
    res = 0
    mult = 1
    for _ in range(d):
        res += ((a % p + b % p) % p) * mult
        mult *= p
        a //= p
        b //= p
    return res


@njit(cache=True, nogil=True)
def fneg(a, mode, p, d):
    if mode == 0:
        return (p - a) % p
    if p == 2:
        return a
    res = 0
    mult = 1
    for _ in range(d):
        res += ((p - a % p) % p) * mult
        mult *= p
        a //= p
    return res


@njit(cache=True, nogil=True)
def fmul(a, b, mode, p, q, exp, log):
    if mode == 0:
        return (a * b) % p
    if a == 0 or b == 0:
        return 0
    return exp[log[a] + log[b]]


@njit(cache=True, nogil=True)
def finv(a, mode, p, q, exp, log):
    if mode == 0:
        # extended Euclid
        t, newt = 0, 1
        r, newr = p, a % p
        while newr != 0:
            quo = r // newr
            t, newt = newt, t - quo * newt
            r, newr = newr, r - quo * newr
        return t % p
    return exp[(q - 1 - log[a]) % (q - 1)]


@njit(cache=True, nogil=True)
def rank_inplace(A, m, n, mode, p, q, d, exp, log):
    """Rank of the m x n top-left block of A; destroys A."""
    rank = 0
    for col in range(n):
        if rank == m:
            break
        piv = -1
        for i in range(rank, m):
            if A[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(col, n):
                tmp = A[piv, j]
                A[piv, j] = A[rank, j]
                A[rank, j] = tmp
        inv = finv(A[rank, col], mode, p, q, exp, log)
        for i in range(rank + 1, m):
            if A[i, col] != 0:
                f = fneg(fmul(A[i, col], inv, mode, p, q, exp, log), mode, p, d)
                for j in range(col, n):
                    A[i, j] = fadd(A[i, j], fmul(f, A[rank, j], mode, p, q, exp, log), mode, p, d)
        rank += 1
    return rank


@njit(cache=True, nogil=True)
def batch_rank(mats, mode, p, q, d, exp, log):
    B, m, n = mats.shape
    out = np.empty(B, dtype=np.int64)
    work = np.empty((m, n), dtype=np.int64)
    for b in range(B):
        for i in range(m):
            for j in range(n):
                work[i, j] = mats[b, i, j]
        out[b] = rank_inplace(work, m, n, mode, p, q, d, exp, log)
    return out


@njit(cache=True, nogil=True)
def bad_counts(E, Ms, mode, p, q, d, exp, log):
    """For each M in Ms (B x k x r), the number of i with rank(E_i M) < r."""
    n, r, k = E.shape
    B = Ms.shape[0]
    out = np.zeros(B, dtype=np.int64)
    prod = np.empty((r, r), dtype=np.int64)
    for b in range(B):
        cnt = 0
        for i in range(n):
            for a in range(r):
                for c in range(r):
                    acc = 0
                    for j in range(k):
                        e = E[i, a, j]
                        if e != 0:
                            m = Ms[b, j, c]
                            if m != 0:
                                acc = fadd(acc, fmul(e, m, mode, p, q, exp, log), mode, p, d)
                    prod[a, c] = acc
            if rank_inplace(prod, r, r, mode, p, q, d, exp, log) < r:
                cnt += 1
        out[b] = cnt
    return out


@njit(cache=True, nogil=True)
def bad_mask(E, M, mode, p, q, d, exp, log):
    """Boolean vector over the family: rank(E_i M) < r for a single M."""
    n, r, k = E.shape
    out = np.zeros(n, dtype=np.bool_)
    prod = np.empty((r, r), dtype=np.int64)
    for i in range(n):
        for a in range(r):
            for c in range(r):
                acc = 0
                for j in range(k):
                    acc = fadd(acc, fmul(E[i, a, j], M[j, c], mode, p, q, exp, log), mode, p, d)
                prod[a, c] = acc
        out[i] = rank_inplace(prod, r, r, mode, p, q, d, exp, log) < r
    return out


@njit(cache=True, nogil=True)
def intersect_counts(members, Ws, mode, p, q, d, exp, log):
    """For each W (rows = basis, B x t x k): number of members V (n x dv x k) with V meet W != 0."""
    n, dv, k = members.shape
    B, t, _ = Ws.shape
    out = np.zeros(B, dtype=np.int64)
    m = dv + t
    work = np.empty((m, k), dtype=np.int64)
    for b in range(B):
        cnt = 0
        for i in range(n):
            for a in range(dv):
                for j in range(k):
                    work[a, j] = members[i, a, j]
            for a in range(t):
                for j in range(k):
                    work[dv + a, j] = Ws[b, a, j]
            if rank_inplace(work, m, k, mode, p, q, d, exp, log) < m:
                cnt += 1
        out[b] = cnt
    return out


@njit(cache=True, nogil=True)
def strong_block_ranks(points, duals, target, mode, p, q, d, exp, log):
    """For each Sigma = ker(Y^T) (Y in duals, k x s): rank of the points lying in Sigma, capped at target."""
    P, k = points.shape
    B, _, s = duals.shape
    out = np.zeros(B, dtype=np.int64)
    basis = np.zeros((k, k), dtype=np.int64)
    has = np.zeros(k, dtype=np.bool_)
    v = np.empty(k, dtype=np.int64)
    for b in range(B):
        for c in range(k):
            has[c] = False
        rank = 0
        for pi in range(P):
            member = True
            for c in range(s):
                acc = 0
                for j in range(k):
                    acc = fadd(acc, fmul(points[pi, j], duals[b, j, c], mode, p, q, exp, log), mode, p, d)
                if acc != 0:
                    member = False
                    break
            if not member:
                continue
            for j in range(k):
                v[j] = points[pi, j]
            lead = -1
            for c in range(k):
                if v[c] == 0:
                    continue
                if has[c]:
                    f = fneg(v[c], mode, p, d)
                    for j in range(c, k):
                        v[j] = fadd(v[j], fmul(f, basis[c, j], mode, p, q, exp, log), mode, p, d)
                else:
                    lead = c
                    break
            if lead < 0:
                continue
            inv = finv(v[lead], mode, p, q, exp, log)
            for j in range(k):
                basis[lead, j] = fmul(v[j], inv, mode, p, q, exp, log)
            has[lead] = True
            rank += 1
            if rank >= target:
                break
        out[b] = rank
    return out


@njit(cache=True, nogil=True)
def affine_cover(points, duals, mode, p, q, d, exp, log):
    """For each linear codim-s subspace ker(Y^T): index of the first coset missed by points, or -1."""
    P, k = points.shape
    B, _, s = duals.shape
    ncos = 1
    for _ in range(s):
        ncos *= q
    out = np.full(B, -1, dtype=np.int64)
    seen = np.zeros(ncos, dtype=np.bool_)
    for b in range(B):
        for c in range(ncos):
            seen[c] = False
        hit = 0
        for pi in range(P):
            idx = 0
            mult = 1
            for c in range(s):
                acc = 0
                for j in range(k):
                    acc = fadd(acc, fmul(points[pi, j], duals[b, j, c], mode, p, q, exp, log), mode, p, d)
                idx += acc * mult
                mult *= q
            if not seen[idx]:
                seen[idx] = True
                hit += 1
                if hit == ncos:
                    break
        if hit < ncos:
            for c in range(ncos):
                if not seen[c]:
                    out[b] = c
                    break
    return out
