"""Sparse multivariate polynomials in x_1..x_n over Q(t).

A polynomial is a map from exponent vectors (tuples of nonnegative integers,
one entry per variable) to nonzero ``RatFunc`` coefficients.  Variables are
indexed 1..n in every public signature, matching the usual notation for ring
sites.  Canonical term order is graded lexicographic.

Besides ring arithmetic the module provides the symmetric-function toolbox
used elsewhere: elementary symmetric polynomials on variable subsets, Schur
polynomials of two-column shapes via the dual Jacobi-Trudi determinant, and
exact multivariate division (quotient must leave no remainder).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .ratfunc import RatFunc, Rational, IntPoly


class InexactDivisionError(ArithmeticError):
    """Raised when a requested polynomial division is not exact."""


def _grlex(exps):
    return (sum(exps), exps)


def _coerce_coeff(c):
    if isinstance(c, RatFunc):
        return c
    if isinstance(c, (int, Fraction)):
        return RatFunc(Fraction(c))
    raise TypeError(f"cannot use {type(c).__name__} as a coefficient")


class XPoly:
    """Sparse polynomial in n variables with coefficients in Q(t)."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        if n < 1:
            raise ValueError("need at least one variable")
        self.n = n
        clean = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(exps)
                if len(exps) != n:
                    raise ValueError(f"exponent vector {exps} has wrong arity for n={n}")
                coeff = _coerce_coeff(coeff)
                if not coeff.is_zero():
                    clean[exps] = coeff
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(n: int) -> "XPoly":
        return XPoly(n)

    @staticmethod
    def one(n: int) -> "XPoly":
        return XPoly(n, {(0,) * n: RatFunc.one()})

    @staticmethod
    def constant(n: int, c) -> "XPoly":
        return XPoly(n, {(0,) * n: _coerce_coeff(c)})

    @staticmethod
    def variable(n: int, i: int) -> "XPoly":
        """The variable x_i (1-based)."""
        if not 1 <= i <= n:
            raise IndexError(f"variable index {i} out of range 1..{n}")
        exps = [0] * n
        exps[i - 1] = 1
        return XPoly(n, {tuple(exps): RatFunc.one()})

    @staticmethod
    def monomial(n: int, exps, coeff=1) -> "XPoly":
        return XPoly(n, {tuple(exps): _coerce_coeff(coeff)})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            other = XPoly.constant(self.n, other)
        if not isinstance(other, XPoly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def sorted_terms(self):
        """Terms in decreasing graded-lex order."""
        return sorted(self.terms.items(), key=lambda kv: _grlex(kv[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exps = max(self.terms, key=_grlex)
        return exps, self.terms[exps]

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    # -- arithmetic --------------------------------------------------------

    def _check_arity(self, other):
        if self.n != other.n:
            raise ValueError(f"arity mismatch: {self.n} vs {other.n} variables")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            other = XPoly.constant(self.n, other)
        if not isinstance(other, XPoly):
            return NotImplemented
        self._check_arity(other)
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = out.get(exps)
            coeff = coeff if acc is None else acc + coeff
            if coeff.is_zero():
                out.pop(exps, None)
            else:
                out[exps] = coeff
        res = object.__new__(XPoly)
        res.n, res.terms = self.n, out
        return res

    __radd__ = __add__

    def __neg__(self):
        res = object.__new__(XPoly)
        res.n = self.n
        res.terms = {e: -c for e, c in self.terms.items()}
        return res

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            other = XPoly.constant(self.n, other)
        if not isinstance(other, XPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RatFunc)):
            c = _coerce_coeff(other)
            if c.is_zero():
                return XPoly(self.n)
            res = object.__new__(XPoly)
            res.n = self.n
            res.terms = {e: v * c for e, v in self.terms.items()}
            return res
        if not isinstance(other, XPoly):
            return NotImplemented
        self._check_arity(other)
        out = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exps = tuple(a + b for a, b in zip(ea, eb))
                prod = ca * cb
                acc = out.get(exps)
                prod = prod if acc is None else acc + prod
                if prod.is_zero():
                    out.pop(exps, None)
                else:
                    out[exps] = prod
        res = object.__new__(XPoly)
        res.n, res.terms = self.n, out
        return res

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = XPoly.one(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- evaluation and substitution ----------------------------------------

    def eval(self, xs, t_val) -> Fraction:
        """Exact value at rational points xs (length n) and t_val."""
        if len(xs) != self.n:
            raise ValueError(f"expected {self.n} values, got {len(xs)}")
        xs = [Fraction(v) for v in xs]
        t_val = Fraction(t_val)
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            mono = Fraction(1)
            for x, e in zip(xs, exps):
                if e:
                    mono *= x ** e
            total += coeff.eval(t_val) * mono
        return total

    def permute_variables(self, images) -> "XPoly":
        """Substitute x_i -> x_images[i-1]; images is a permutation of 1..n."""
        if sorted(images) != list(range(1, self.n + 1)):
            raise ValueError("images must be a permutation of 1..n")
        out = {}
        for exps, coeff in self.terms.items():
            new = [0] * self.n
            for i, e in enumerate(exps):
                new[images[i] - 1] += e
            out[tuple(new)] = coeff
        return XPoly(self.n, out)

    # -- serialization -------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in self.sorted_terms():
            mono = " ".join(
                f"x{i + 1}^{e}" for i, e in enumerate(exps) if e
            )
            c = str(coeff)
            if " " in c or "/" in c:
                c = f"({c})"
            parts.append(f"{c} * {mono}" if mono else c)
        return " + ".join(parts)

    __repr__ = __str__

    def to_json_terms(self):
        """Canonically ordered list of {exponents, coeff_num, coeff_den} dicts."""
        return [
            {
                "exponents": list(exps),
                "coeff_num": list(coeff.num.coeffs),
                "coeff_den": list(coeff.den.coeffs),
            }
            for exps, coeff in self.sorted_terms()
        ]


def swap_variables(p: XPoly, i: int) -> XPoly:
    """Exchange x_i and x_{i+1} in every term (1 <= i <= n-1)."""
    if not 1 <= i <= p.n - 1:
        raise IndexError(f"swap index {i} out of range 1..{p.n - 1}")
    out = {}
    for exps, coeff in p.terms.items():
        e = list(exps)
        e[i - 1], e[i] = e[i], e[i - 1]
        out[tuple(e)] = coeff
    return XPoly(p.n, out)


def is_symmetric_in(p: XPoly, i: int, j: int) -> bool:
    """True iff transposing x_i and x_j leaves p fixed."""
    if not (1 <= i <= p.n and 1 <= j <= p.n):
        raise IndexError("variable index out of range")
    if i == j:
        return True
    for exps, coeff in p.terms.items():
        e = list(exps)
        e[i - 1], e[j - 1] = e[j - 1], e[i - 1]
        if p.terms.get(tuple(e)) != coeff:
            return False
    return True


def elementary(k: int, n: int, var_subset=None) -> XPoly:
    """Elementary symmetric polynomial e_k on the given variables (1-based).

    e_0 = 1; k larger than the number of variables gives the zero polynomial.
    """
    if k < 0:
        return XPoly.zero(n)
    indices = tuple(range(1, n + 1)) if var_subset is None else tuple(var_subset)
    if len(set(indices)) != len(indices):
        raise ValueError("variable subset contains repeats")
    if any(not 1 <= i <= n for i in indices):
        raise IndexError("variable subset index out of range")
    if k > len(indices):
        return XPoly.zero(n)
    one = RatFunc.one()
    out = {}
    for combo in combinations(indices, k):
        exps = [0] * n
        for i in combo:
            exps[i - 1] = 1
        out[tuple(exps)] = one
    return XPoly(n, out)


def elementary_eval(k: int, xs) -> Fraction:
    """e_k evaluated at rational values, via the standard recurrence."""
    if k < 0:
        return Fraction(0)
    row = [Fraction(1)] + [Fraction(0)] * k
    for x in xs:
        x = Fraction(x)
        for d in range(min(k, len(row) - 1), 0, -1):
            row[d] += x * row[d - 1]
    return row[k]


def elementary_product(parts, n: int) -> XPoly:
    """Product of elementary symmetric polynomials e_{parts[0]} e_{parts[1]} ...

    This realises e indexed by a partition, e.g. the conjugate-partition
    normalisation constant of the stationary distribution.
    """
    out = XPoly.one(n)
    for k in parts:
        if k == 0:
            continue
        out = out * elementary(k, n)
    return out


def schur_two_column(a: int, b: int, n: int, var_subset=None) -> XPoly:
    """Schur polynomial of shape (2^a, 1^b) on the given variables.

    Computed by the dual Jacobi-Trudi 2x2 determinant
    e_{a+b} e_a - e_{a+b+1} e_{a-1}, with e_{-1} = 0.
    """
    if a < 0 or b < 0:
        raise ValueError("shape parameters must be nonnegative")
    e = lambda k: elementary(k, n, var_subset)
    return e(a + b) * e(a) - e(a + b + 1) * e(a - 1)


def exact_divide(num: XPoly, den: XPoly) -> XPoly:
    """Quotient q with q * den == num; InexactDivisionError if none exists.

    Runs leading-term elimination under graded lex.  If the division is exact
    the leading term of every intermediate remainder is divisible by the
    leading term of the divisor, so hitting a non-divisible leading term (or
    a nonzero final remainder) proves inexactness.
    """
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero():
        return XPoly.zero(num.n)
    num._check_arity(den)
    den_exps, den_coeff = den.leading_term()
    rem = dict(num.terms)
    quot = {}
    while rem:
        lead = max(rem, key=_grlex)
        diff = tuple(a - b for a, b in zip(lead, den_exps))
        if any(d < 0 for d in diff):
            raise InexactDivisionError(
                f"leading term x^{lead} not divisible by divisor leading term x^{den_exps}"
            )
        c = rem[lead] / den_coeff
        quot[diff] = c
        for exps, coeff in den.terms.items():
            target = tuple(a + b for a, b in zip(diff, exps))
            acc = rem.get(target, None)
            val = -(c * coeff) if acc is None else acc - c * coeff
            if val.is_zero():
                rem.pop(target, None)
            else:
                rem[target] = val
    return XPoly(num.n, quot)


def poly_from_exponent_weight(n: int, exps, coeff) -> XPoly:
    """Single-term polynomial helper used by the diagram enumeration."""
    return XPoly.monomial(n, exps, coeff)
