from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tpushtasep.ratfunc import (
    IntPoly,
    PoleError,
    RatFunc,
    poly_gcd,
    t_analogue,
    t_factorial,
)

T = RatFunc.t()


def intpolys(max_deg=3, nonzero=False):
    base = st.lists(st.integers(-9, 9), min_size=1, max_size=max_deg + 1).map(
        lambda cs: IntPoly(tuple(cs))
    )
    if nonzero:
        return base.filter(lambda p: not p.is_zero())
    return base


def ratfuncs():
    return st.tuples(intpolys(), intpolys(nonzero=True)).map(
        lambda pair: RatFunc(pair[0], pair[1])
    )


class TestTAnalogue:
    def test_explicit_sum(self):
        assert t_analogue(4) == IntPoly((1, 1, 1, 1))
        assert t_analogue(1) == IntPoly((1,))

    def test_value_at_one(self):
        # the sum form keeps t = 1 an ordinary point: [m]_1 = m
        assert t_analogue(3).eval(Fraction(1)) == 3

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            t_analogue(0)

    @given(m=st.integers(1, 8), t0=st.fractions(min_value=-3, max_value=3))
    def test_matches_geometric_sum(self, m, t0):
        assert t_analogue(m).eval(t0) == sum(t0 ** k for k in range(m))

    def test_factorial(self):
        assert t_factorial(0) == IntPoly((1,))
        assert t_factorial(3) == t_analogue(2) * t_analogue(3)


class TestCanonicalForm:
    def test_gcd_cancellation(self):
        f = RatFunc(IntPoly((-1, 0, 1)), IntPoly((-1, 1)))  # (t^2-1)/(t-1)
        assert f == RatFunc(IntPoly((1, 1)))

    def test_positive_denominator_leading(self):
        f = RatFunc(IntPoly((1,)), IntPoly((1, -1)))  # 1/(1-t)
        assert f.den.leading() > 0
        assert f.num == IntPoly((-1,))

    def test_content_reduced(self):
        f = RatFunc(IntPoly((2, 2)), IntPoly((4,)))
        assert (f.num.coeffs, f.den.coeffs) == ((1, 1), (2,))

    @given(f=ratfuncs())
    def test_normalisation_idempotent(self, f):
        again = RatFunc(f.num, f.den)
        assert (again.num, again.den) == (f.num, f.den)
        assert poly_gcd(f.num, f.den).degree <= 0

    def test_common_denominator_addition(self):
        assert T / (1 + T) + RatFunc(1) / (1 + T) == RatFunc(1)

    def test_inverse_pair(self):
        assert (RatFunc(1) / (1 + T)) * ((1 + T) / RatFunc(1)) == RatFunc(1)


class TestFieldAxioms:
    @given(a=ratfuncs(), b=ratfuncs(), c=ratfuncs())
    def test_ring_identities(self, a, b, c):
        assert a + b == b + a
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c

    @given(a=ratfuncs(), b=ratfuncs())
    def test_division_roundtrip(self, a, b):
        if not b.is_zero():
            assert (a / b) * b == a

    @given(a=ratfuncs(), b=ratfuncs(), t0=st.fractions(min_value=-2, max_value=2))
    def test_evaluation_homomorphism(self, a, b, t0):
        try:
            va, vb = a.eval(t0), b.eval(t0)
        except PoleError:
            return
        assert (a + b).eval(t0) == va + vb
        assert (a * b).eval(t0) == va * vb
        assert (a - b).eval(t0) == va - vb
        if vb != 0 and not b.is_zero():
            assert (a / b).eval(t0) == va / vb

    def test_divide_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            RatFunc(1) / RatFunc(0)


class TestEvaluation:
    def test_simple_values(self):
        assert RatFunc(IntPoly((1, 1))).eval(Fraction(1, 2)) == Fraction(3, 2)
        assert (T / (1 + T)).eval(0) == 0

    def test_pole(self):
        f = RatFunc(1, IntPoly((1, -1)))  # 1/(1-t)
        with pytest.raises(PoleError):
            f.eval(1)


class TestSerialization:
    def test_increasing_power_text(self):
        assert str(T / (1 + T)) == "t / 1 + t"
        assert str(RatFunc(IntPoly((1, 0, 2)))) == "1 + 2*t^2"
        assert str(RatFunc(0)) == "0"

    def test_rational_strings(self):
        assert str(Fraction(3, 4)) == "3/4"
        assert str(Fraction(5)) == "5"
