"""Exact arithmetic in Z[q, q^-1] and its fraction field Q(q).

Everything downstream (shuffle products, Gram matrices, cuspidal
normalization) is built on these two immutable value types.  Coefficients are
Python ints, so there is no overflow and no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Mapping


class LaurentPoly:
    """A finitely supported map exponent -> nonzero integer coefficient."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] | int = 0):
        if isinstance(coeffs, int):
            self._c = {0: coeffs} if coeffs else {}
        else:
            items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
            c: dict[int, int] = {}
            for e, v in items:
                if v:
                    c[e] = c.get(e, 0) + v
            self._c = {e: v for e, v in c.items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, c: dict[int, int]) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls._raw({exp: coeff} if coeff else {})

    # -- inspection -------------------------------------------------------
    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def min_exp(self) -> int:
        return min(self._c)

    def max_exp(self) -> int:
        return max(self._c)

    def coefficient(self, exp: int) -> int:
        return self._c.get(exp, 0)

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def is_unit(self) -> bool:
        """True for +-q^k, the units of Z[q, q^-1]."""
        return len(self._c) == 1 and abs(next(iter(self._c.values()))) == 1

    def is_nonnegative(self) -> bool:
        return all(v > 0 for v in self._c.values())

    def is_bar_invariant(self) -> bool:
        return all(self._c.get(-e) == v for e, v in self._c.items())

    def content(self) -> int:
        return reduce(gcd, (abs(v) for v in self._c.values()), 0)

    def at_one(self) -> int:
        return sum(self._c.values())

    def evaluate(self, x, modulus: int | None = None):
        """Evaluate at q = x; with ``modulus`` the computation is done in Z/p."""
        if modulus is None:
            return sum(v * Fraction(x) ** e for e, v in self._c.items())
        inv = pow(x, -1, modulus)
        total = 0
        for e, v in self._c.items():
            total += v * (pow(x, e, modulus) if e >= 0 else pow(inv, -e, modulus))
        return total % modulus

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        c = dict(self._c)
        for e, v in other._c.items():
            s = c.get(e, 0) + v
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return ZERO
            return LaurentPoly._raw({e: v * other for e, v in self._c.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if len(other._c) == 1:
            (f, w), = other._c.items()
            return LaurentPoly._raw({e + f: v * w for e, v in self._c.items()})
        c: dict[int, int] = {}
        for e, v in self._c.items():
            for f, w in other._c.items():
                c[e + f] = c.get(e + f, 0) + v * w
        return LaurentPoly._raw({e: v for e, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if self.is_unit():
                (e, v), = self._c.items()
                return LaurentPoly._raw({e * n: v ** n if v == 1 else (-1) ** n})
            raise ValueError("negative power of a non-unit")
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by q^k."""
        return LaurentPoly._raw({e + k: v for e, v in self._c.items()})

    def bar(self) -> "LaurentPoly":
        return LaurentPoly._raw({-e: v for e, v in self._c.items()})

    def exact_div(self, other: "LaurentPoly | int") -> "LaurentPoly":
        """Exact quotient in Z[q, q^-1]; raises ArithmeticError if not divisible."""
        if isinstance(other, int):
            other = LaurentPoly(other)
        q, r = _dense_divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other: "LaurentPoly") -> bool:
        if self.is_zero():
            return other.is_zero()
        return not _dense_divmod(other, self)[1]

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        if isinstance(other, RatFunc):
            return other == self
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # -- rendering ----------------------------------------------------------
    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, v in sorted(self._c.items()):
            if e == 0:
                mono = str(abs(v))
            else:
                var = "q" if e == 1 else f"q^{e}"
                mono = var if abs(v) == 1 else f"{abs(v)}*{var}"
            sign = "-" if v < 0 else "+"
            parts.append((sign, mono))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, mono in parts[1:]:
            out += f" {sign} {mono}"
        return out

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"

    def to_json(self) -> list[list[int]]:
        return [[e, v] for e, v in sorted(self._c.items())]

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        return cls((int(e), int(v)) for e, v in data)


ZERO = LaurentPoly._raw({})
ONE = LaurentPoly._raw({0: 1})
Q = LaurentPoly._raw({1: 1})


def q_power(k: int) -> LaurentPoly:
    return LaurentPoly._raw({k: 1})


# -- dense helpers (polynomial arithmetic after shifting to exponent 0) --------

def _dense(f: LaurentPoly) -> tuple[int, list[int]]:
    lo = f.min_exp()
    out = [0] * (f.max_exp() - lo + 1)
    for e, v in f._c.items():
        out[e - lo] = v
    return lo, out


def _from_dense(lo: int, coeffs) -> LaurentPoly:
    return LaurentPoly((lo + i, v) for i, v in enumerate(coeffs) if v)


def _dense_divmod(f: LaurentPoly, g: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Division in Z[q,q^-1] viewed through polynomial long division.

    Both arguments are shifted to minimal exponent 0; the quotient carries the
    exponent difference.  The remainder is nonzero iff g does not divide f.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by zero Laurent polynomial")
    if f.is_zero():
        return ZERO, ZERO
    flo, fd = _dense(f)
    glo, gd = _dense(g)
    rem = [Fraction(v) for v in fd]
    lead = gd[-1]
    quot = [Fraction(0)] * max(len(fd) - len(gd) + 1, 1)
    for i in range(len(fd) - len(gd), -1, -1):
        c = rem[i + len(gd) - 1] / lead
        if c:
            quot[i] = c
            for j, v in enumerate(gd):
                rem[i + j] -= c * v
    if any(rem) or any(c.denominator != 1 for c in quot):
        return ZERO, LaurentPoly(1)
    return _from_dense(flo - glo, [int(c) for c in quot]), ZERO


def _poly_gcd_dense(a: list[int], b: list[int]) -> list[int]:
    """gcd of integer polynomials (dense, low->high), primitive part only."""
    def strip(p):
        p = list(p)
        while p and p[-1] == 0:
            p.pop()
        return p

    def prim(p):
        c = reduce(gcd, (abs(int(v)) for v in p), 0)
        p = [int(v) // c for v in p]
        return p if p[-1] > 0 else [-v for v in p]

    a, b = strip(a), strip(b)
    if not a:
        return prim(b) if b else []
    if not b:
        return prim(a)
    a, b = prim(a), prim(b)
    # Euclid over Q with primitive normalization at every step
    while b:
        r = [Fraction(v) for v in a]
        while len(r) >= len(b) and any(r):
            c = r[-1] / b[-1]
            shift = len(r) - len(b)
            for j, v in enumerate(b):
                r[shift + j] -= c * v
            r = strip(r)
        if not r:
            return prim(b)
        den = reduce(lambda x, y: x * y // gcd(x, y), (v.denominator for v in r), 1)
        a, b = b, prim([v * den for v in r])
    return prim(a)


def laurent_gcd(polys: Iterable[LaurentPoly]) -> LaurentPoly:
    """gcd in Z[q, q^-1], normalized to minimal exponent 0 and positive leading term.

    The integer content is included, so ``laurent_gcd([2q, 4]) == 2``.
    """
    g: list[int] = []
    content = 0
    for f in polys:
        if f.is_zero():
            continue
        content = gcd(content, f.content())
        _, d = _dense(f)
        g = _poly_gcd_dense(g, d) if g else _poly_gcd_dense(d, [])
        if len(g) == 1:
            g = [1]
    if not g:
        return ZERO
    return _from_dense(0, [v * content for v in g])


# -- quantum integers ---------------------------------------------------------

def qint(n: int, d: int = 2) -> LaurentPoly:
    """Quantum integer [n]_i with q_i = q^(d/2), d = i.i."""
    if d <= 0 or d % 2:
        raise ValueError(f"i.i must be a positive even integer, got {d}")
    if n < 0:
        raise ValueError(f"quantum integer undefined for n={n}")
    h = d // 2
    return LaurentPoly((h * (n - 1 - 2 * k), 1) for k in range(n))


def qfact(n: int, d: int = 2) -> LaurentPoly:
    out = ONE
    for k in range(1, n + 1):
        out = out * qint(k, d)
    return out


def bar(f: LaurentPoly) -> LaurentPoly:
    return f.bar()


def _center_unit(entries: list[LaurentPoly]) -> tuple[int, int]:
    """Return (s, sign) such that q^-s * sign * v is bar-invariant, or (None, 0)."""
    lo = min(f.min_exp() for f in entries)
    hi = max(f.max_exp() for f in entries)
    if (lo + hi) % 2:
        return None, 0
    s = (lo + hi) // 2
    shifted = [f.shift(-s) for f in entries]
    if all(f.is_bar_invariant() for f in shifted):
        return s, 1
    return None, 0


def primitive_part(f: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly, int]:
    """Split f = content * unit * p with p having coprime integer coefficients.

    The unit +-q^k is chosen so that p is bar-invariant when some shift of f is,
    otherwise so that p has minimal exponent 0; its sign makes p's top
    coefficient positive.
    """
    if f.is_zero():
        raise ValueError("primitive part of zero")
    p, unit, content = primitive_part_vector([f])
    return p[0], unit, content


def primitive_part_vector(entries: list[LaurentPoly]) -> tuple[list[LaurentPoly], LaurentPoly, int]:
    """Vector version of :func:`primitive_part` with one content and one unit."""
    nz = [f for f in entries if f]
    if not nz:
        raise ValueError("primitive part of the zero vector")
    content = reduce(gcd, (f.content() for f in nz))
    g = [LaurentPoly._raw({e: v // content for e, v in f._c.items()}) for f in entries]
    gnz = [f for f in g if f]
    s, _ = _center_unit(gnz)
    if s is None:
        s = min(f.min_exp() for f in gnz)
    g = [f.shift(-s) for f in g]
    top = max(gnz[0].shift(-s)._c.items())[1]
    sign = 1 if top > 0 else -1
    g = [f * sign for f in g]
    return g, LaurentPoly.monomial(s, sign), content


# -- the fraction field -----------------------------------------------------

class RatFunc:
    """An element of Q(q) kept in lowest terms.

    The denominator has minimal exponent 0 and positive leading coefficient,
    so equal values have identical (numerator, denominator) pairs.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly | int = 0, den: LaurentPoly | int = 1):
        if isinstance(num, int):
            num = LaurentPoly(num)
        if isinstance(den, int):
            den = LaurentPoly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = ZERO, ONE
            return
        if not den.is_monomial() or den.content() != 1:
            g = laurent_gcd([num, den])
            if g != ONE:
                num, den = num.exact_div(g), den.exact_div(g)
        lo = den.min_exp()
        num, den = num.shift(-lo), den.shift(-lo)
        if den.coefficient(den.max_exp()) < 0:
            num, den = -num, -den
        # integer content common to both
        c = gcd(num.content(), den.content())
        if c > 1:
            num = LaurentPoly._raw({e: v // c for e, v in num._c.items()})
            den = LaurentPoly._raw({e: v // c for e, v in den._c.items()})
        self.num, self.den = num, den

    @staticmethod
    def _lift(x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, LaurentPoly)):
            return RatFunc(x)
        return None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den.is_monomial() and self.den.content() == 1

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise ArithmeticError(f"{self} is not a Laurent polynomial")
        return self.num.shift(-self.den.min_exp())

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        r = RatFunc.__new__(RatFunc)
        r.num, r.den = -self.num, self.den
        return r

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero in Q(q)")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def bar(self) -> "RatFunc":
        return RatFunc(self.num.bar(), self.den.bar())

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({str(self)!r})"
