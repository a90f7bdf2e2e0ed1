"""Hecke-algebra operators at q = 1 and the KZ-family verifier.

The operators act on polynomials in x_1..x_n over Q(t):

    s_i  swaps x_i and x_{i+1},
    L_i(f) = (t x_i - x_{i+1}) / (x_i - x_{i+1}) * (f - s_i f),
    T_i(f) = t f - L_i(f),      T_i^{-1}(f) = (f - L_i(f)) / t,

satisfying the quadratic relation (T_i - t)(T_i + 1) = 0 together with the
braid and commutation relations.  The divided difference in L_i is always an
exact polynomial division, since f - s_i f vanishes on x_i = x_{i+1}.

A family of polynomials indexed by the permutations of a content word is a
KZ family if T_i maps the member at eta to the member at s_i eta whenever
eta_i > eta_{i+1}, scales it by t on equal neighbours, and the family is
compatible with cyclic rotation of both word and variables.  These exchange
relations plus a cyclic shift pin the family down to one symmetric-function
multiple, which is what makes them a usable test harness for the diagram
construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chain import Content, enumerate_states
from .ratfunc import RatFunc, t_analogue
from .xpoly import XPoly, exact_divide, is_symmetric_in, swap_variables

_T = RatFunc.t()


def apply_T(p: XPoly, i: int) -> XPoly:
    """T_i(p) = t p - L_i(p), for 1 <= i <= n-1."""
    return p * _T - divided_difference_L(p, i)


def apply_T_inverse(p: XPoly, i: int) -> XPoly:
    """T_i^{-1}(p) = t^{-1} p - t^{-1} L_i(p): two-sided inverse of T_i."""
    inv_t = RatFunc(1) / _T
    return p * inv_t - divided_difference_L(p, i) * inv_t


def divided_difference_L(p: XPoly, i: int) -> XPoly:
    """L_i(p): exact quotient of (t x_i - x_{i+1})(p - s_i p) by (x_i - x_{i+1})."""
    if not 1 <= i <= p.n - 1:
        raise IndexError(f"operator index {i} out of range 1..{p.n - 1}")
    diff = p - swap_variables(p, i)
    if diff.is_zero():
        return XPoly.zero(p.n)
    xi = XPoly.variable(p.n, i)
    xi1 = XPoly.variable(p.n, i + 1)
    return exact_divide((xi * _T - xi1) * diff, xi - xi1)


def apply_omega_q1(p: XPoly) -> XPoly:
    """Cyclic substitution f(x_1,..,x_n) -> f(x_n, x_1, .., x_{n-1})."""
    out = {}
    for exps, coeff in p.terms.items():
        out[exps[1:] + exps[:1]] = coeff
    return XPoly(p.n, out)


def rotate_word(eta) -> tuple:
    """(eta_n, eta_1, ..., eta_{n-1})."""
    eta = tuple(eta)
    return eta[-1:] + eta[:-1]


def swap_word(eta, i: int) -> tuple:
    eta = list(eta)
    eta[i - 1], eta[i] = eta[i], eta[i - 1]
    return tuple(eta)


@dataclass
class KZReport:
    """Outcome of the family verification, one entry per checked relation."""

    entries: list = field(default_factory=list)

    def record(self, relation, eta, i, ok):
        self.entries.append(
            {"relation": relation, "eta": list(eta), "i": i, "pass": bool(ok)}
        )

    @property
    def passed(self) -> bool:
        return all(e["pass"] for e in self.entries)

    def failures(self):
        return [e for e in self.entries if not e["pass"]]

    def to_json_list(self):
        return self.entries


def verify_kz_family(family: dict, content: Content | None = None) -> KZReport:
    """Check the exchange and cyclic-shift relations of a polynomial family.

    family maps each permutation of the content word to a polynomial.  The
    four relations checked for every member and every adjacent position:

      first:   eta_i > eta_{i+1}  =>  T_i f_eta = f_{s_i eta}
      second:  eta_i = eta_{i+1}  =>  T_i f_eta = t f_eta
      fourth:  eta_i < eta_{i+1}  =>  T_i f_eta = (t-1) f_eta + t f_{s_i eta}
      third:   f_eta(x) = f_{rot(eta)}(x_n, x_1, ..., x_{n-1})

    All violations are reported, none raises.
    """
    if content is None:
        content = Content.from_word(next(iter(family)))
    expected = set(enumerate_states(content))
    if set(map(tuple, family)) != expected:
        raise ValueError("family keys are not exactly the permutations of the content")

    report = KZReport()
    t = _T
    for eta in sorted(expected, reverse=True):
        f = family[eta]
        for i in range(1, content.n):
            lhs = apply_T(f, i)
            if eta[i - 1] > eta[i]:
                report.record("first", eta, i, lhs == family[swap_word(eta, i)])
            elif eta[i - 1] == eta[i]:
                report.record("second", eta, i, lhs == f * t)
            else:
                rhs = f * (t - RatFunc(1)) + family[swap_word(eta, i)] * t
                report.record("fourth", eta, i, lhs == rhs)
        report.record("third", eta, 0, f == apply_omega_q1(family[rotate_word(eta)]))
    return report


def pair_symmetry_check(family: dict, content: Content | None = None):
    """f_eta + f_{s_i eta} is symmetric in x_i, x_{i+1}, for all eta and i."""
    if content is None:
        content = Content.from_word(next(iter(family)))
    failures = []
    for eta, f in family.items():
        for i in range(1, content.n):
            total = f + family[swap_word(eta, i)]
            if not is_symmetric_in(total, i, i + 1):
                failures.append((eta, i))
    return failures


def shape_permute_exponent(nu, i: int) -> int:
    """The t-exponent of the shape-permuting scalar at position i of nu.

    Counts j < i with nu_{i+1} < nu_j <= nu_i plus j > i with
    nu_{i+1} <= nu_j < nu_i; at least 1 whenever nu_i > nu_{i+1}, since
    j = i+1 itself qualifies.
    """
    nu = tuple(nu)
    hi, lo = nu[i - 1], nu[i]
    left = sum(1 for j in range(1, i) if lo < nu[j - 1] <= hi)
    right = sum(1 for j in range(i + 1, len(nu) + 1) if lo <= nu[j - 1] < hi)
    return left + right


def shape_permute_q1(E: XPoly, nu, i: int) -> XPoly:
    """Move one descent of the index: maps E_nu to E_{s_i nu} at q = 1.

    Requires nu_i > nu_{i+1}.  The added scalar is
    (1 - t)/(1 - t^r) = 1/[r]_t with r = shape_permute_exponent(nu, i),
    so t = 1 stays a regular point.
    """
    nu = tuple(nu)
    if not 1 <= i <= len(nu) - 1:
        raise IndexError(f"position {i} out of range")
    if nu[i - 1] <= nu[i]:
        raise ValueError(f"need nu_{i} > nu_{i + 1}, got {nu[i - 1]} <= {nu[i]}")
    r = shape_permute_exponent(nu, i)
    assert r >= 1, "descent positions always contribute at least themselves"
    return apply_T(E, i) + E * RatFunc(1, t_analogue(r))
