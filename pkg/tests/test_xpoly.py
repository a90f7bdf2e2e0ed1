import random
from fractions import Fraction
from itertools import combinations_with_replacement

import pytest
from hypothesis import given, settings, strategies as st

from helpers import rand_xpoly
from tpushtasep.ratfunc import IntPoly, RatFunc
from tpushtasep.xpoly import (
    InexactDivisionError,
    XPoly,
    elementary,
    elementary_eval,
    exact_divide,
    is_symmetric_in,
    schur_two_column,
    swap_variables,
)


def xv(n, i):
    return XPoly.variable(n, i)


def schur_by_tableaux(shape, nvars):
    """Independent Schur oracle: sum x^content over semistandard tableaux.

    Rows weakly increase left to right, columns strictly increase downward;
    enumerated row by row.
    """
    rows = [r for r in shape if r]

    def fill(row_idx, above):
        if row_idx == len(rows):
            yield []
            return
        width = rows[row_idx]
        for values in combinations_with_replacement(range(1, nvars + 1), width):
            if above is not None and any(
                values[c] <= above[c] for c in range(width)
            ):
                continue
            for rest in fill(row_idx + 1, values):
                yield [values] + rest

    total = XPoly.zero(nvars)
    for tableau in fill(0, None):
        exps = [0] * nvars
        for row in tableau:
            for v in row:
                exps[v - 1] += 1
        total = total + XPoly.monomial(nvars, tuple(exps))
    return total


class TestArithmetic:
    def test_difference_of_squares(self):
        n = 2
        assert (xv(n, 1) + xv(n, 2)) * (xv(n, 1) - xv(n, 2)) == xv(n, 1) ** 2 - xv(
            n, 2
        ) ** 2

    def test_additive_identity(self):
        p = xv(3, 1) * xv(3, 2)
        assert p + XPoly.zero(3) == p

    def test_arity_mismatch(self):
        with pytest.raises(ValueError):
            xv(2, 1) + xv(3, 1)

    def test_elementary_product_is_partition_sum(self):
        # e_1 e_2 equals the three-variable partition function of the
        # two-species one-vacancy ring (checked against the family elsewhere)
        p = elementary(1, 3) * elementary(2, 3)
        assert p.eval([1, 1, 1], Fraction(1, 7)) == 9

    @settings(max_examples=40)
    @given(seed=st.integers(0, 10 ** 6), t0=st.fractions(min_value=0, max_value=2))
    def test_eval_homomorphism(self, seed, t0):
        rng = random.Random(seed)
        a = rand_xpoly(rng, 3)
        b = rand_xpoly(rng, 3)
        xs = [Fraction(rng.randint(1, 5)) for _ in range(3)]
        try:
            va, vb = a.eval(xs, t0), b.eval(xs, t0)
            assert (a + b).eval(xs, t0) == va + vb
            assert (a * b).eval(xs, t0) == va * vb
        except ZeroDivisionError:
            pass  # a random coefficient had a pole at t0


class TestElementary:
    def test_e2_three_vars(self):
        n = 3
        expected = xv(n, 1) * xv(n, 2) + xv(n, 1) * xv(n, 3) + xv(n, 2) * xv(n, 3)
        assert elementary(2, 3) == expected

    def test_e0_is_one(self):
        assert elementary(0, 4) == XPoly.one(4)
        assert elementary(0, 4, [2, 3]) == XPoly.one(4)

    def test_too_large_k_vanishes(self):
        assert elementary(3, 4, [1, 2]).is_zero()

    def test_subset(self):
        assert elementary(1, 3, [2, 3]) == xv(3, 2) + xv(3, 3)

    def test_generating_function(self):
        # prod_j (1 + z x_j) = sum_k e_k z^k, checked coefficientwise with an
        # auxiliary variable as x_{n+1}
        for n in range(1, 6):
            total = XPoly.one(n + 1)
            z = XPoly.variable(n + 1, n + 1)
            for j in range(1, n + 1):
                total = total * (XPoly.one(n + 1) + z * XPoly.variable(n + 1, j))
            expected = XPoly.zero(n + 1)
            for k in range(n + 1):
                ek = elementary(k, n + 1, list(range(1, n + 1)))
                expected = expected + ek * z ** k
            assert total == expected

    @given(
        k=st.integers(0, 4),
        xs=st.lists(st.fractions(min_value=-3, max_value=3), min_size=1, max_size=6),
    )
    def test_elementary_eval_matches_symbolic(self, k, xs):
        n = len(xs)
        assert elementary(k, n).eval(xs, 0) == elementary_eval(k, xs)


class TestSchurTwoColumn:
    def test_single_column_collapses(self):
        assert schur_two_column(0, 3, 4) == elementary(3, 4)

    def test_shape_21_matches_tableaux(self):
        assert schur_two_column(1, 1, 3) == schur_by_tableaux((2, 1), 3)

    def test_shape_2_matches_tableaux(self):
        assert schur_two_column(1, 0, 2) == schur_by_tableaux((2,), 2)
        expected = xv(2, 1) ** 2 + xv(2, 1) * xv(2, 2) + xv(2, 2) ** 2
        assert schur_two_column(1, 0, 2) == expected

    def test_shape_221_matches_tableaux(self):
        assert schur_two_column(2, 1, 4) == schur_by_tableaux((2, 2, 1), 4)

    def test_symmetric_under_all_swaps(self):
        s = schur_two_column(2, 1, 4)
        for i in range(1, 4):
            assert swap_variables(s, i) == s

    def test_overflow_shape_vanishes(self):
        assert schur_two_column(2, 3, 4).is_zero()


class TestExactDivide:
    def test_difference_of_squares(self):
        n = 2
        q = exact_divide(xv(n, 1) ** 2 - xv(n, 2) ** 2, xv(n, 1) - xv(n, 2))
        assert q == xv(n, 1) + xv(n, 2)

    def test_partition_sum_factor(self):
        p = elementary(1, 3) * elementary(2, 3)
        assert exact_divide(p, elementary(1, 3)) == elementary(2, 3)

    def test_inexact_raises(self):
        with pytest.raises(InexactDivisionError):
            exact_divide(xv(2, 1) + xv(2, 2), xv(2, 1) * xv(2, 2))

    @settings(max_examples=40)
    @given(seed=st.integers(0, 10 ** 6))
    def test_product_roundtrip(self, seed):
        rng = random.Random(seed)
        a = rand_xpoly(rng, 3, nterms=3)
        b = rand_xpoly(rng, 3, nterms=3)
        if a.is_zero() or b.is_zero():
            return
        assert exact_divide(a * b, b) == a


class TestSwapAndSymmetry:
    def test_swap_monomial(self):
        assert swap_variables(xv(3, 1) ** 2 * xv(3, 2), 1) == xv(3, 1) * xv(3, 2) ** 2

    def test_swap_fixes_elementary(self):
        for i in (1, 2):
            assert swap_variables(elementary(2, 3), i) == elementary(2, 3)

    def test_is_symmetric(self):
        assert is_symmetric_in(elementary(2, 3), 1, 3)
        assert not is_symmetric_in(xv(3, 1) ** 2 * xv(3, 2), 1, 2)

    def test_swap_on_weighted_entry(self):
        # x1 x2 (x1 + x3/(1+t)) swaps to x2 x1 (x2 + x3/(1+t))
        n = 3
        c = RatFunc(1, IntPoly((1, 1)))
        p = xv(n, 1) * xv(n, 2) * (xv(n, 1) + xv(n, 3) * c)
        expected = xv(n, 1) * xv(n, 2) * (xv(n, 2) + xv(n, 3) * c)
        assert swap_variables(p, 1) == expected


class TestSerialization:
    def test_text_form(self):
        p = xv(2, 1) * xv(2, 2) + XPoly.constant(2, RatFunc(1, IntPoly((1, 1))))
        assert str(p) == "1 * x1^1 x2^1 + (1 / 1 + t)"

    def test_json_terms(self):
        p = xv(2, 1) * RatFunc(IntPoly((0, 1)), IntPoly((1, 1)))
        [term] = p.to_json_terms()
        assert term == {
            "exponents": [1, 0],
            "coeff_num": [0, 1],
            "coeff_den": [1, 1],
        }
