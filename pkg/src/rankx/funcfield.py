"""Rational and Hermitian function fields with poles only at the place at infinity.

Elements are sparse maps ``{(a, b): c}`` standing for sum c * x^a * y^b.  The
rational field only uses b = 0.  The Hermitian field y^l + y = x^(l+1) over
GF(l^2) keeps elements in residue form (b < l) by rewriting
y^l = x^(l+1) - y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .algebra.field import GF, field_of_order, prime_power

INF = math.inf


class GapOrder(ValueError):
    """No function has this pole order at infinity (a Weierstrass gap)."""


class UnknownPlace(KeyError):
    pass


@dataclass(frozen=True)
class FFElement:
    terms: tuple[tuple[tuple[int, int], int], ...]

    @classmethod
    def from_map(cls, m: Mapping[tuple[int, int], int]) -> "FFElement":
        return cls(tuple(sorted((k, int(v)) for k, v in m.items() if v)))

    def as_map(self) -> dict[tuple[int, int], int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms


@dataclass(frozen=True, eq=False)
class FunctionField:
    """A rational (``ell = 0``) or Hermitian function field over ``base``."""

    kind: str
    base: GF
    ell: int = 0
    _places: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in ("rational", "hermitian"):
            raise ValueError(f"unknown function field kind {self.kind!r}")
        if self.kind == "hermitian" and self.base.q != self.ell**2:
            raise ValueError("Hermitian field needs q = ell^2")

    def __eq__(self, other):
        return isinstance(other, FunctionField) and (self.kind, self.base, self.ell) == (
            other.kind, other.base, other.ell)

    def __hash__(self):
        return hash((self.kind, self.base, self.ell))

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def genus(self) -> int:
        return self.ell * (self.ell - 1) // 2 if self.kind == "hermitian" else 0

    def descriptor(self) -> dict:
        return {"kind": self.kind, "q": self.q, "ell": self.ell}

    # -- places ------------------------------------------------------------

    @property
    def places(self) -> list[tuple[int, ...]]:
        if self._places is None:
            object.__setattr__(self, "_places", tuple(rational_places(self)))
        return list(self._places)

    # -- arithmetic --------------------------------------------------------

    def element(self, m: Mapping) -> FFElement:
        """Canonical element from a term map (keys are ints or (a, b) pairs)."""
        acc: dict[tuple[int, int], int] = {}
        for key, c in m.items():
            a, b = (key, 0) if isinstance(key, (int, np.integer)) else key
            self._accumulate(acc, int(a), int(b), int(c) % self.q if self.base.d == 1 else int(c))
        return FFElement.from_map(acc)

    def _accumulate(self, acc, a, b, c):
        F = self.base
        if c == 0:
            return
        if self.kind == "rational" and b:
            raise ValueError("rational function field has no y")
        if b >= self.ell and self.kind == "hermitian":
            # x^a y^b = x^a y^(b-l) (x^(l+1) - y)
            self._accumulate(acc, a + self.ell + 1, b - self.ell, c)
            self._accumulate(acc, a, b - self.ell + 1, F.neg(c))
            return
        acc[(a, b)] = int(F.add(acc.get((a, b), 0), c))

    def add(self, f: FFElement, g: FFElement) -> FFElement:
        acc = dict(f.terms)
        for k, c in g.terms:
            acc[k] = int(self.base.add(acc.get(k, 0), c))
        return FFElement.from_map(acc)

    def mul(self, f: FFElement, g: FFElement) -> FFElement:
        acc: dict[tuple[int, int], int] = {}
        for (a1, b1), c1 in f.terms:
            for (a2, b2), c2 in g.terms:
                self._accumulate(acc, a1 + a2, b1 + b2, int(self.base.mul(c1, c2)))
        return FFElement.from_map(acc)

    def scale(self, c: int, f: FFElement) -> FFElement:
        return FFElement.from_map({k: int(self.base.mul(c, v)) for k, v in f.terms})

    def monomial(self, a: int, b: int = 0, c: int = 1) -> FFElement:
        return self.element({(a, b): c})

    def one(self) -> FFElement:
        return self.monomial(0, 0)

    # -- valuation and evaluation -----------------------------------------

    def pole_order_of_monomial(self, a: int, b: int) -> int:
        if self.kind == "rational":
            return a
        return a * self.ell + b * (self.ell + 1)

    def valuation(self, f: FFElement) -> float:
        if f.is_zero():
            return INF
        return -max(self.pole_order_of_monomial(a, b) for (a, b), _ in f.terms)

    def evaluate(self, f: FFElement, place) -> int:
        place = tuple(int(v) for v in np.atleast_1d(place))
        if place not in set(self.places):
            raise UnknownPlace(place)
        return int(self._eval_at(f, np.array([place], dtype=np.int64))[0])

    def evaluate_all(self, f: FFElement) -> np.ndarray:
        """Values of f at every place, in place order."""
        return self._eval_at(f, np.array(self.places, dtype=np.int64))

    def _eval_at(self, f: FFElement, pts: np.ndarray) -> np.ndarray:
        F = self.base
        out = np.zeros(len(pts), dtype=np.int64)
        for (a, b), c in f.terms:
            term = F.mul(c, F.pow(pts[:, 0], a))
            if b:
                term = F.mul(term, F.pow(pts[:, 1], b))
            out = F.add(out, term)
        return np.asarray(out, dtype=np.int64)

    # -- pole orders -------------------------------------------------------

    def is_pole_number(self, d: int) -> bool:
        if d < 0:
            return False
        if self.kind == "rational":
            return True
        b = d % self.ell
        return d - b * (self.ell + 1) >= 0

    def pole_order_function(self, d: int) -> FFElement:
        """A monomial with pole order exactly d at infinity."""
        if d < 0:
            raise ValueError("pole order must be nonnegative")
        if self.kind == "rational":
            return self.monomial(d)
        b = d % self.ell
        rest = d - b * (self.ell + 1)
        if rest < 0:
            raise GapOrder(f"{d} is a gap of <{self.ell}, {self.ell + 1}>")
        return self.monomial(rest // self.ell, b)

    def pole_numbers(self, n: int) -> list[int]:
        """The n smallest pole numbers in increasing order."""
        out = []
        d = 0
        while len(out) < n:
            if self.is_pole_number(d):
                out.append(d)
            d += 1
        return out

    def pole_order_chain(self, n: int) -> list[FFElement]:
        if n < 1:
            raise ValueError("chain length must be positive")
        return [self.pole_order_function(d) for d in self.pole_numbers(n)]


def rational_function_field(q: int) -> FunctionField:
    return FunctionField("rational", field_of_order(q))


def hermitian_function_field(ell: int) -> FunctionField:
    prime_power(ell)
    return FunctionField("hermitian", field_of_order(ell * ell), ell)


def function_field_from_descriptor(desc: Mapping) -> FunctionField:
    if desc["kind"] == "rational":
        return rational_function_field(int(desc["q"]))
    return hermitian_function_field(int(desc["ell"]))


def rational_places(FF: FunctionField) -> list[tuple[int, ...]]:
    F = FF.base
    xs = np.arange(F.q, dtype=np.int64)
    if FF.kind == "rational":
        return [(int(a),) for a in xs]
    ell = FF.ell
    lhs = F.add(F.pow(xs, ell), xs)   # beta^l + beta
    rhs = F.pow(xs, ell + 1)          # alpha^(l+1)
    return [(int(a), int(b)) for a in xs for b in xs if lhs[b] == rhs[a]]


def semigroup_gaps(ell: int) -> list[int]:
    """Integers not representable as a*ell + b*(ell+1) with a, b >= 0."""
    g = ell * (ell - 1) // 2
    reachable = set()
    for a in range(2 * g + 1):
        for b in range(2 * g + 1):
            reachable.add(a * ell + b * (ell + 1))
    return [d for d in range(1, max(2 * g, 1)) if d not in reachable]


def ff_arith(FF: FunctionField, op: str, f: FFElement, g: FFElement) -> FFElement:
    if op == "add":
        return FF.add(f, g)
    if op == "mul":
        return FF.mul(f, g)
    raise ValueError(f"unknown operation {op!r}")
