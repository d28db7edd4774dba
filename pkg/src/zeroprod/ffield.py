"""Finite fields GF(p) and GF(p^e) with elements encoded as integer codes.

An element of GF(p^e) is stored as the integer whose base-p digits are its
polynomial coefficients, least significant first: code = c0 + c1*p + ...
For e > 1 multiplication and addition go through exp/log tables of a
primitive element and a Zech logarithm table, so every table has q entries.
"""

from dataclasses import dataclass, field
from functools import total_ordering
from itertools import product

import numpy as np

from .ntheory import is_prime, prime_power

MAX_PRIME = 1 << 64
MAX_EXT_ORDER = 1 << 16


# -- polynomial helpers over GF(p), coefficient lists little-endian ---------

def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    """Remainder of a modulo the monic polynomial m."""
    a = list(a)
    dm = len(m) - 1
    while len(_poly_trim(a)) - 1 >= dm:
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
    return a


def _poly_mulmod(a, b, m, p):
    out = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_mod(out, m, p)


def _monic(p, d):
    """All monic polynomials of degree d, little-endian coefficient lists."""
    for tail in product(range(p), repeat=d):
        yield list(reversed(tail)) + [1]


def is_irreducible(poly, p):
    """Exhaustive test: no monic factor of degree 1..deg/2 divides poly."""
    d = len(poly) - 1
    for k in range(1, d // 2 + 1):
        for f in _monic(p, k):
            if not _poly_trim(_poly_mod(poly, f, p)):
                return False
    return True


def smallest_irreducible(p, e):
    """Lexicographically least monic irreducible of degree e.

    Candidates are ordered by (c_{e-1}, ..., c_0) with the leading 1 fixed.
    """
    for high_first in product(range(p), repeat=e):
        poly = list(reversed(high_first)) + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def code_to_poly(code, p, e):
    return [(code // p**i) % p for i in range(e)]


def poly_to_code(poly, p):
    return sum(int(c) * p**i for i, c in enumerate(poly))


# -- field -------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """GF(p^e). Arithmetic methods act on integer codes in [0, q)."""

    p: int
    e: int
    q: int
    modulus: tuple = None
    _exp: tuple = field(default=None, compare=False, repr=False)
    _log: tuple = field(default=None, compare=False, repr=False)
    _zech: tuple = field(default=None, compare=False, repr=False)
    generator: int = field(default=None, compare=False, repr=False)

    @property
    def is_prime_field(self):
        return self.e == 1

    def __str__(self):
        return f"GF({self.q})" if self.e == 1 else f"GF({self.p}^{self.e})"

    def check(self, a):
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element code of {self}")
        return a

    def elem(self, code):
        return Elem(self, self.check(int(code)))

    # code-level arithmetic
    def add(self, a, b):
        if self.e == 1:
            s = a + b
            return s - self.q if s >= self.q else s
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % (self.q - 1)]
        return 0 if z < 0 else self._exp[la + z]

    def neg(self, a):
        if a == 0:
            return 0
        if self.e == 1:
            return self.q - a
        if self.p == 2:
            return a
        return self._exp[self._log[a] + (self.q - 1) // 2]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.e == 1:
            return a * b % self.q
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        if self.e == 1:
            return pow(a, -1, self.q)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def nonzero(self):
        return range(1, self.q)

    def kernel_tables(self):
        """(exp, log, zech) as int64 arrays for the compiled kernels.

        Prime fields get empty arrays.
        """
        if self.e == 1:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty, empty
        return (np.asarray(self._exp, dtype=np.int64),
                np.asarray(self._log, dtype=np.int64),
                np.asarray(self._zech, dtype=np.int64))


@total_ordering
@dataclass(frozen=True)
class Elem:
    """A field element bound to its field; operators refuse mixed fields."""

    field: FieldSpec
    code: int

    def _other(self, other):
        if isinstance(other, Elem):
            if other.field != self.field:
                raise ValueError(f"mixed-field operands: {self.field} and {other.field}")
            return other.code
        if isinstance(other, int):
            return self.field.check(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else Elem(self.field, self.field.add(self.code, b))

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else Elem(self.field, self.field.sub(self.code, b))

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else Elem(self.field, self.field.mul(self.code, b))

    def __truediv__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else Elem(self.field, self.field.div(self.code, b))

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return Elem(self.field, self.field.neg(self.code))

    def inv(self):
        return Elem(self.field, self.field.inv(self.code))

    def __lt__(self, other):
        return self.code < self._other(other)

    def __int__(self):
        return self.code

    def __repr__(self):
        return f"Elem({self.code} in {self.field})"


def _build_tables(p, e, modulus):
    q = p**e
    polys = [code_to_poly(c, p, e) for c in range(q)]
    for g in range(2, q):
        exp = []
        cur = [1]
        for _ in range(q - 1):
            c = poly_to_code(cur, p)
            exp.append(c)
            cur = _poly_mulmod(cur, polys[g], modulus, p)
        if len(set(exp)) == q - 1:
            break
    else:  # pragma: no cover
        raise AssertionError("multiplicative group has no generator")
    log = [-1] * q
    for i, c in enumerate(exp):
        log[c] = i
    # zech[j] = log(1 + g^j), -1 where 1 + g^j = 0
    zech = []
    for j in range(q - 1):
        s = [(a + b) % p for a, b in zip(polys[1], polys[exp[j]])]
        c = poly_to_code(s, p)
        zech.append(log[c] if c else -1)
    return tuple(exp + exp), tuple(log), tuple(zech), g


def make_field(p, e=1):
    """Construct GF(p^e).

    Raises ValueError for composite p, e < 1, or q beyond the supported
    bounds (p < 2^64 for prime fields, q <= 2^16 for extensions).
    """
    if e < 1:
        raise ValueError(f"extension degree must be >= 1, got {e}")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e == 1:
        if p >= MAX_PRIME:
            raise ValueError(f"prime {p} exceeds the 64-bit limit")
        return FieldSpec(p, 1, p)
    q = p**e
    if q > MAX_EXT_ORDER:
        raise ValueError(f"extension field order {q} exceeds {MAX_EXT_ORDER}")
    modulus = smallest_irreducible(p, e)
    exp, log, zech, g = _build_tables(p, e, modulus)
    return FieldSpec(p, e, q, modulus, exp, log, zech, g)


def field_from_q(q, p=None, e=None):
    """Field designation used by files and flags: q, optionally with p and e."""
    pp, ee = prime_power(q)
    if (p is not None and p != pp) or (e is not None and e != ee):
        raise ValueError(f"q={q} is inconsistent with p={p}, e={e}")
    return make_field(pp, ee)


def elements(f):
    """All element codes of f, ascending."""
    return iter(range(f.q))
