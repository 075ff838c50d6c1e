"""Finite fields GF(p^d) with elements encoded as integers.

An element with power-basis coordinates ``(c_0, ..., c_{d-1})`` is stored as
the integer ``sum(c_i * p**i)``.  All arithmetic methods accept Python ints or
numpy integer arrays and broadcast like numpy ufuncs.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

import numpy as np

MAX_ORDER = 2**63
# Prime fields below this bound use int64 arrays; products stay below 2^62.
INT64_PRIME_LIMIT = 2**31
# Extension fields build log/exp tables of length q.
TABLE_LIMIT = 2**22
# Extension fields up to this order also get a dense addition table.
ADD_TABLE_LIMIT = 1024


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    if n % 3 == 0:
        return n == 3
    i = 5
    while i * i <= n:
        if n % i == 0 or n % (i + 2) == 0:
            return False
        i += 6
    return True


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, d) with q = p^d, or raise."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    fs = prime_factors(q)
    if len(fs) != 1:
        raise FieldError(f"{q} is not a prime power")
    p = fs[0]
    d = round(math.log(q, p))
    while p**d < q:
        d += 1
    while p**d > q:
        d -= 1
    if p**d != q:
        raise FieldError(f"{q} is not a prime power")
    return p, d


# --- polynomials over F_p as coefficient lists, low to high -----------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _polymul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _polysub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _polygcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _polymod(a, b, p)
    return a


def _polypowmod(base: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _polymod(base, m, p)
    while e:
        if e & 1:
            result = _polymod(_polymul(result, base, p), m, p)
        base = _polymod(_polymul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Irreducibility of a monic polynomial over F_p (Rabin-style gcd test)."""
    f = _trim([c % p for c in f])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    h = x
    for _ in range(n // 2):
        h = _polypowmod(h, p, f, p)
        g = _polygcd(f, _polysub(h, x, p), p)
        if len(g) > 1:
            return False
    return True


def smallest_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree d over F_p."""
    if d == 1:
        return (0, 1)
    for code in range(p**d):
        low = [(code // p**i) % p for i in range(d)]
        if low[0] == 0:
            continue
        f = low + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible polynomial of degree {d} over F_{p}")


class GF:
    """The finite field of order p^d."""

    def __init__(self, p: int, d: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if d < 1:
            raise FieldError("extension degree must be >= 1")
        if p**d >= MAX_ORDER:
            raise FieldError(f"field order {p}^{d} exceeds 2^63")
        self.p = p
        self.d = d
        self.q = p**d
        if modulus is None:
            modulus = smallest_irreducible(p, d)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != d + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree d")
        if d > 1 and not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = modulus
        self.dtype = np.int64 if self.q < INT64_PRIME_LIMIT else object
        self._pows = [p**i for i in range(d)]
        self._exp = self._log = self._add = self._digits = None
        if d > 1:
            if self.q > TABLE_LIMIT:
                raise FieldError(f"extension fields above {TABLE_LIMIT} elements are not supported")
            self._build_tables()

    # -- construction helpers --------------------------------------------

    def _poly_mul_int(self, a: int, b: int) -> int:
        pa, pb = self.coeffs(a), self.coeffs(b)
        prod = _polymod(_polymul(pa, pb, self.p), list(self.modulus), self.p)
        return self.from_coeffs(prod)

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        # primitive element by direct order test in polynomial arithmetic
        factors = prime_factors(q - 1)
        prim = None
        for a in range(1, q):
            if all(self._scalar_poly_pow(a, (q - 1) // f) != 1 for f in factors):
                prim = a
                break
        assert prim is not None
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        # multiplication by prim is F_p-linear; tabulate it on the basis
        basis_img = [self._poly_mul_int(self._pows[i], prim) for i in range(self.d)]
        img_digits = np.array([self.coeffs(v) for v in basis_img], dtype=np.int64)
        pows = np.array(self._pows, dtype=np.int64)
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            dig = np.array(self.coeffs(x), dtype=np.int64)
            x = int(((dig @ img_digits) % p) @ pows)
        exp[q - 1:] = exp[: q - 1]
        self._exp, self._log = exp, log
        self._prim = prim
        digits = (np.arange(q, dtype=np.int64)[:, None] // pows[None, :]) % p
        self._digits = digits
        if q <= ADD_TABLE_LIMIT:
            s = (digits[:, None, :] + digits[None, :, :]) % p
            self._add = s @ pows

    def _scalar_poly_pow(self, a: int, e: int) -> int:
        r = _polypowmod(self.coeffs(a), e, list(self.modulus), self.p)
        return self.from_coeffs(r)

    # -- representation --------------------------------------------------

    def coeffs(self, a: int) -> list[int]:
        a = int(a)
        return [(a // self._pows[i]) % self.p for i in range(self.d)]

    def from_coeffs(self, cs: Sequence[int]) -> int:
        cs = list(cs) + [0] * (self.d - len(cs))
        if len(cs) > self.d:
            raise FieldError("too many coefficients")
        return sum((int(c) % self.p) * self._pows[i] for i, c in enumerate(cs))

    def asarray(self, a) -> np.ndarray:
        return np.asarray(a, dtype=self.dtype)

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=self.dtype)

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.d, self.modulus) == (other.p, other.d, other.modulus)

    def __hash__(self):
        return hash((self.p, self.d, self.modulus))

    def __repr__(self):
        if self.d == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.d}, modulus={self.modulus})"

    # -- arithmetic ------------------------------------------------------

    def add(self, a, b):
        if self.d == 1:
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self._add is not None:
            return self._add[a, b]
        s = (self._digits[a] + self._digits[b]) % self.p
        return s @ np.array(self._pows, dtype=np.int64)

    def neg(self, a):
        if self.d == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        s = (-self._digits[a]) % self.p
        return s @ np.array(self._pows, dtype=np.int64)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.d == 1:
            return (a * b) % self.p
        a = np.asarray(a)
        b = np.asarray(b)
        out = self._exp[self._log[a] + self._log[b]]
        out = np.where((a == 0) | (b == 0), 0, out)
        return out if out.ndim else int(out)

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.d == 1:
            if np.ndim(a) == 0:
                return pow(int(a), -1, self.p)
            return self.pow(a, self.p - 2)
        out = self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return out if np.ndim(out) else int(out)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        """a**e with a an element (or array) and e a nonnegative int (or array)."""
        if self.d == 1:
            if np.ndim(a) == 0 and np.ndim(e) == 0:
                return pow(int(a), int(e), self.p)
            a = np.asarray(a, dtype=self.dtype)
            e = np.asarray(e, dtype=np.int64)
            a, e = np.broadcast_arrays(a, e)
            result = np.ones(a.shape, dtype=self.dtype)
            base = a.copy()
            e = e.copy()
            while np.any(e > 0):
                odd = (e & 1) == 1
                result = np.where(odd, (result * base) % self.p, result)
                base = (base * base) % self.p
                e >>= 1
            return result
        a = np.asarray(a)
        e = np.asarray(e, dtype=np.int64)
        lg = (self._log[a] * (e % (self.q - 1))) % (self.q - 1)
        out = self._exp[lg]
        out = np.where(a == 0, np.where(e == 0, 1, 0), out)
        return out if out.ndim else int(out)

    def sum(self, a, axis=-1):
        """Field sum along an axis."""
        a = np.asarray(a)
        if self.d == 1:
            if self.dtype is object:
                return np.sum(a, axis=axis) % self.p
            return np.sum(a % self.p, axis=axis, dtype=np.int64) % self.p
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        s = np.sum(self._digits[a], axis=axis if axis >= 0 else axis - 1) % self.p
        return s @ np.array(self._pows, dtype=np.int64)

    def dot(self, a, b, axis=-1):
        return self.sum(self.mul(a, b), axis=axis)

    # -- structure -------------------------------------------------------

    def order(self, a: int) -> int:
        a = int(a)
        if a == 0:
            raise FieldError("zero has no multiplicative order")
        n = self.q - 1
        for f in prime_factors(self.q - 1):
            while n % f == 0 and self.pow(a, n // f) == 1:
                n //= f
        return n

    def primitive_element(self) -> int:
        """First element of multiplicative order q-1 in integer enumeration order."""
        if self.q == 2:
            return 1
        factors = prime_factors(self.q - 1)
        for a in range(1, self.q):
            if all(self.pow(a, (self.q - 1) // f) != 1 for f in factors):
                return a
        raise AssertionError("unreachable: cyclic group has a generator")

    def frobenius(self, a, times: int = 1):
        return self.pow(a, self.p**times)

    def trace(self, a):
        """Absolute trace to F_p (returned as an int in [0, p))."""
        out = a
        y = a
        for _ in range(self.d - 1):
            y = self.pow(y, self.p)
            out = self.add(out, y)
        return out


@lru_cache(maxsize=None)
def field_make(p: int, d: int = 1) -> GF:
    """The field GF(p^d) with the lexicographically smallest monic irreducible modulus."""
    return GF(p, d)


def field_of_order(q: int) -> GF:
    p, d = prime_power(q)
    return field_make(p, d)


def field_arith(F: GF, op: str, *operands):
    """Dispatch 'add', 'mul', 'inv', 'pow', 'neg', 'sub', 'div' on elements of F."""
    for x in operands[:1] if op == "pow" else operands:
        if np.any((np.asarray(x) < 0) | (np.asarray(x) >= F.q)):
            raise FieldError(f"operand outside {F!r}")
    fn = {"add": F.add, "mul": F.mul, "inv": F.inv, "pow": F.pow,
          "neg": F.neg, "sub": F.sub, "div": F.div}.get(op)
    if fn is None:
        raise ValueError(f"unknown field operation {op!r}")
    return fn(*operands)
