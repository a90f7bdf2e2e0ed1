"""Exact arithmetic over the field Q(t) of rational functions in t.

Every coefficient in this package is either a plain rational number
(``fractions.Fraction``, re-exported here as ``Rational``) or a rational
function of the deformation parameter t.  A rational function is stored as a
pair of integer-coefficient polynomials in canonical form, so that structural
equality coincides with mathematical equality:

* numerator and denominator have no common factor (neither a polynomial
  factor nor an integer content factor),
* the leading coefficient of the denominator is positive.

No floating point appears anywhere in this module.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd

Rational = Fraction


class PoleError(ZeroDivisionError):
    """Raised when a rational function is evaluated at a zero of its denominator."""


class IntPoly:
    """Univariate polynomial in t with arbitrary-precision integer coefficients.

    Coefficients are stored densely in increasing power order; the leading
    coefficient is nonzero (the zero polynomial stores an empty tuple).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        if isinstance(coeffs, int):
            coeffs = (coeffs,)
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self):
        """Degree, with the convention deg 0 = -1."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def content(self):
        """Nonnegative gcd of the coefficients (0 for the zero polynomial)."""
        c = 0
        for a in self.coeffs:
            c = _int_gcd(c, abs(a))
        return c

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly((other,))
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return IntPoly(tuple(-a for a in self.coeffs))

    def __add__(self, other):
        if isinstance(other, int):
            other = IntPoly((other,))
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    def __sub__(self, other):
        if isinstance(other, int):
            other = IntPoly((other,))
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            other = IntPoly((other,))
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = IntPoly((1,))
        base = self
        while k:
            if k & 1:
                out = out * base
            if k > 1:
                base = base * base
            k >>= 1
        return out

    def shift(self, k):
        """Multiply by t**k."""
        if not self.coeffs:
            return self
        return IntPoly((0,) * k + self.coeffs)

    def divexact(self, other):
        """Exact division; raises ValueError when the division leaves a remainder."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return IntPoly()
        rem = list(self.coeffs)
        lead = other.leading()
        out = [0] * (len(rem) - len(other.coeffs) + 1)
        for i in range(len(out) - 1, -1, -1):
            c = rem[i + other.degree]
            if c % lead != 0:
                raise ValueError("inexact polynomial division")
            q = c // lead
            out[i] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= q * b
        if any(rem):
            raise ValueError("inexact polynomial division")
        return IntPoly(out)

    def eval(self, t_val):
        """Evaluate at an exact rational point (Horner)."""
        acc = Fraction(0)
        for a in reversed(self.coeffs):
            acc = acc * t_val + a
        return acc

    def primitive(self):
        """Return (content-with-sign, primitive part); leading coefficient positive."""
        if self.is_zero():
            return 0, self
        c = self.content()
        if self.leading() < 0:
            c = -c
        return c, IntPoly(tuple(a // c for a in self.coeffs))

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, a in enumerate(self.coeffs):
            if a == 0:
                continue
            if k == 0:
                term = str(a)
            else:
                var = "t" if k == 1 else f"t^{k}"
                if a == 1:
                    term = var
                elif a == -1:
                    term = f"-{var}"
                else:
                    term = f"{a}*{var}"
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return out

    __repr__ = __str__


def _pseudo_rem(a: IntPoly, b: IntPoly) -> IntPoly:
    """Pseudo-remainder of a by b (both nonzero, deg a >= deg b)."""
    lead = b.leading()
    rem = list(a.coeffs)
    for i in range(len(a.coeffs) - len(b.coeffs), -1, -1):
        top = rem[i + b.degree]
        if top == 0:
            continue
        for j in range(len(rem)):
            rem[j] *= lead
        for j, c in enumerate(b.coeffs):
            rem[i + j] -= top * c
    return IntPoly(rem[: b.degree] if b.degree > 0 else [])


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Gcd in Z[t] (content times primitive gcd), with positive leading coefficient."""
    if a.is_zero():
        return b.primitive()[1] * b.content() if not b.is_zero() else IntPoly()
    if b.is_zero():
        return a.primitive()[1] * a.content()
    return IntPoly(_poly_gcd_coeffs(a.coeffs, b.coeffs))


def _gcd_cache_wrap(fn):
    from functools import lru_cache

    return lru_cache(maxsize=1 << 16)(fn)


@_gcd_cache_wrap
def _poly_gcd_coeffs(ac, bc):
    ca, pa = IntPoly(ac).primitive()
    cb, pb = IntPoly(bc).primitive()
    content = _int_gcd(abs(ca), abs(cb))
    while not pb.is_zero():
        if pa.degree < pb.degree:
            pa, pb = pb, pa
            continue
        r = _pseudo_rem(pa, pb)
        pa, pb = pb, r.primitive()[1]
    return (content * pa).coeffs


class RatFunc:
    """Element of Q(t): a canonical quotient of two integer polynomials in t."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        if isinstance(num, Fraction):
            if isinstance(den, int) and den == 1:
                num, den = num.numerator, num.denominator
            else:
                raise TypeError("pass a Fraction alone, without a denominator")
        if isinstance(num, int):
            num = IntPoly((num,))
        if isinstance(den, int):
            den = IntPoly((den,))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator in Q(t)")
        if num.is_zero():
            num, den = IntPoly(), IntPoly((1,))
        else:
            g = poly_gcd(num, den)
            num = num.divexact(g)
            den = den.divexact(g)
            if den.leading() < 0:
                num, den = -num, -den
        self.num = num
        self.den = den

    @staticmethod
    def _raw(num: IntPoly, den: IntPoly) -> "RatFunc":
        """Skip normalisation; caller guarantees canonical form."""
        out = object.__new__(RatFunc)
        out.num, out.den = num, den
        return out

    @staticmethod
    def t(power=1):
        """The monomial t**power."""
        return RatFunc(IntPoly((0,) * power + (1,)))

    @staticmethod
    def zero():
        return RatFunc(0)

    @staticmethod
    def one():
        return RatFunc(1)

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.coeffs == (1,) and self.den.coeffs == (1,)

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num.coeffs, self.den.coeffs))

    def __neg__(self):
        out = object.__new__(RatFunc)
        out.num, out.den = -self.num, self.den
        return out

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        if g.coeffs == (1,):
            num = self.num * other.den + other.num * self.den
            if num.is_zero():
                return RatFunc._raw(IntPoly(), IntPoly((1,)))
            return RatFunc._raw(num, self.den * other.den)
        d1 = self.den.divexact(g)
        d2 = other.den.divexact(g)
        return RatFunc(self.num * d2 + other.num * d1, self.den * d2)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return RatFunc._raw(IntPoly(), IntPoly((1,)))
        # cross-cancel: each numerator is already coprime to its own denominator
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        g1 = poly_gcd(n1, d2)
        if g1.coeffs != (1,):
            n1, d2 = n1.divexact(g1), d2.divexact(g1)
        g2 = poly_gcd(n2, d1)
        if g2.coeffs != (1,):
            n2, d1 = n2.divexact(g2), d1.divexact(g2)
        return RatFunc._raw(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        flipped = (
            RatFunc._raw(other.den, other.num)
            if other.num.leading() > 0
            else RatFunc._raw(-other.den, -other.num)
        )
        return self * flipped

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if k < 0:
            return (RatFunc(1) / self) ** (-k)
        out = RatFunc._raw(IntPoly((1,)), IntPoly((1,)))
        base = self
        while k:
            if k & 1:
                out = out * base
            if k > 1:
                base = base * base
            k >>= 1
        return out

    def eval(self, t_val) -> Fraction:
        """Exact value at a rational point; raises PoleError at a pole."""
        t_val = Fraction(t_val)
        d = self.den.eval(t_val)
        if d == 0:
            raise PoleError(f"pole at t = {t_val}")
        return self.num.eval(t_val) / d

    def as_fraction(self) -> Fraction:
        """The value of a constant rational function; ValueError otherwise."""
        if self.num.degree > 0 or self.den.degree > 0:
            raise ValueError("not a constant rational function")
        return Fraction(self.num.leading() if self.num else 0, self.den.leading())

    def __str__(self):
        if self.den.coeffs == (1,):
            return str(self.num)
        return f"{self.num} / {self.den}"

    __repr__ = __str__


def _coerce(value):
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, (int, Fraction)):
        return RatFunc(Fraction(value))
    return None


def t_analogue(m: int) -> IntPoly:
    """The t-analogue [m]_t = 1 + t + ... + t**(m-1), as an explicit sum.

    Stored as the sum polynomial rather than (1 - t**m)/(1 - t), so t = 1 is
    an ordinary evaluation point.
    """
    if m < 1:
        raise ValueError(f"t-analogue requires m >= 1, got {m}")
    return IntPoly((1,) * m)


def t_factorial(m: int) -> IntPoly:
    """The t-factorial [m]_t! = [1]_t [2]_t ... [m]_t (with [0]_t! = 1)."""
    if m < 0:
        raise ValueError(f"t-factorial requires m >= 0, got {m}")
    out = IntPoly((1,))
    for k in range(2, m + 1):
        out = out * t_analogue(k)
    return out


def rational_from_string(text: str) -> Fraction:
    """Parse "p/q" or "p" into an exact rational."""
    return Fraction(text.strip())
