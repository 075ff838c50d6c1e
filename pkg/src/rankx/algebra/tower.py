"""Subfield embeddings and coordinates of GF(Q) over a subfield GF(q)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .field import GF, FieldError


def embed_subfield(small: GF, big: GF) -> np.ndarray:
    """Array ``emb`` with ``emb[a]`` the image in ``big`` of the element ``a`` of ``small``."""
    if small.p != big.p or big.d % small.d:
        raise FieldError(f"{small!r} is not a subfield of {big!r}")
    if small.d == 1:
        return np.arange(small.q, dtype=np.int64)
    # a root of small's modulus (coefficients lie in F_p, shared by both)
    m = small.modulus
    xs = big.elements()
    val = np.zeros(big.q, dtype=np.int64)
    for c in reversed(m):
        val = big.add(big.mul(val, xs), c)
    roots = np.nonzero(val == 0)[0]
    if len(roots) == 0:
        raise FieldError("subfield modulus has no root in the big field")
    rho = int(roots[0])
    powers = [big.pow(rho, i) for i in range(small.d)]
    emb = np.zeros(small.q, dtype=np.int64)
    for a in range(small.q):
        acc = 0
        for c, pw in zip(small.coeffs(a), powers):
            acc = big.add(acc, big.mul(c, pw))
        emb[a] = acc
    return emb


@dataclass
class TowerContext:
    """GF(Q) as a d-dimensional vector space over GF(q) with a fixed basis.

    ``basis[0]`` is 1.  ``coords[a, t]`` is the t-th coordinate (an element of
    the small field) of the big-field element ``a``.
    """

    big: GF
    small: GF
    basis: tuple[int, ...] = ()
    embed: np.ndarray = field(default=None, repr=False)
    coords: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.big.d % self.small.d or self.big.p != self.small.p:
            raise FieldError(f"{self.small!r} is not a subfield of {self.big!r}")
        self.d = self.big.d // self.small.d
        if self.embed is None:
            self.embed = embed_subfield(self.small, self.big)
        if not self.basis:
            self.basis = default_basis(self.big, self.small, self.d)
        if len(self.basis) != self.d:
            raise FieldError(f"basis must have {self.d} elements")
        self.coords = _coordinate_table(self.big, self.small, self.embed, self.basis)

    def decompose(self, a):
        """Coordinates (a^(1), ..., a^(d)) over the small field; trailing axis of length d."""
        return self.coords[np.asarray(a)]

    def compose(self, cs):
        """Inverse of :meth:`decompose` along the trailing axis."""
        cs = np.asarray(cs)
        acc = np.zeros(cs.shape[:-1], dtype=np.int64)
        for t, e in enumerate(self.basis):
            acc = self.big.add(acc, self.big.mul(self.embed[cs[..., t]], e))
        return acc

    @property
    def Q(self) -> int:
        return self.big.q

    @property
    def q(self) -> int:
        return self.small.q


def default_basis(big: GF, small: GF, d: int) -> tuple[int, ...]:
    """Power basis 1, z, ..., z^(d-1) over a prime field, else powers of the primitive element."""
    if small.d == 1:
        return tuple(big.p**i for i in range(d))
    g = big.primitive_element()
    return tuple(int(big.pow(g, i)) for i in range(d))


def _coordinate_table(big: GF, small: GF, embed, basis) -> np.ndarray:
    d = len(basis)
    table = np.full((big.q, d), -1, dtype=np.int64)
    # enumerate all small-field coordinate vectors in blocks
    combos = np.array(list(itertools.product(range(small.q), repeat=d)), dtype=np.int64)
    values = np.zeros(len(combos), dtype=np.int64)
    for t, e in enumerate(basis):
        values = big.add(values, big.mul(embed[combos[:, t]], e))
    if len(np.unique(values)) != big.q:
        raise FieldError("basis elements are linearly dependent over the subfield")
    table[values] = combos
    return table


def subfield_decompose(a, ctx: TowerContext):
    """Coordinates of ``a`` in GF(Q) with respect to ``ctx.basis``."""
    if np.any((np.asarray(a) < 0) | (np.asarray(a) >= ctx.Q)):
        raise FieldError("element outside the big field")
    return ctx.decompose(a)
