"""Closed-form stationary observables and their brute-force cross-checks.

Densities and currents of the ring dynamics in stationarity:

* the single-species stationary law (independent of t),
* the species density at site 1, a ratio of a two-column Schur polynomial
  and two elementary symmetric polynomials, also independent of t,
* the single-species current across an edge, with its t-dependent prefactor
  (1 + 2t + ... + m_0 t^(m_0-1)) / [m_0]_t,
* a brute-force current oracle that walks every displacement cascade and
  counts edge crossings of a chosen species along the clockwise arcs,
* the elementary-symmetric-function identity behind the current formula.

A displaced particle travels clockwise from its starting site to its landing
site; it crosses the marked edge exactly when that arc passes it.  An active
particle picks among the weaker particles only, so no arc completes a full
revolution.  The difference of the two projected single-species currents is
NOT the species current for t > 0 (a single cascade can push several
particles over the same edge); the oracle makes that failure observable.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .chain import (
    Content,
    StationaryVector,
    SystemParams,
    cascade_probability,
    cascade_probability_at,
    cascades,
    apply_moves,
    enumerate_states,
    stationary_oracle,
)
from .diagrams import asep_family, partition_function
from .ratfunc import IntPoly, RatFunc, t_analogue
from .xpoly import XPoly, elementary_eval, schur_two_column


@dataclass(frozen=True)
class CurrentSpec:
    """Which species to count, across which directed ring edge."""

    species: int
    edge: tuple | None = None  # (a, a+1 cyclically); None means (n, 1)

    def edge_start(self, n: int) -> int:
        if self.edge is None:
            return n
        a, b = self.edge
        if b != a % n + 1:
            raise ValueError(f"{self.edge} is not a clockwise ring edge")
        return a


@dataclass(frozen=True)
class ObservableReport:
    exact_value: str
    method: str
    metadata: dict = field(default_factory=dict)

    def to_json_dict(self):
        return {
            "exact_value": self.exact_value,
            "method": self.method,
            "metadata": self.metadata,
        }


def single_species_stationary(m0: int, m1: int, params: SystemParams) -> StationaryVector:
    """pi(eta) = prod of x_i over occupied sites, divided by e_{m1}(x)."""
    if m0 < 1 or m1 < 0 or m0 + m1 != params.n:
        raise ValueError("need m0 >= 1 and m0 + m1 = n")
    content = Content((m0, m1) if m1 else (m0,))
    norm = elementary_eval(m1, params.x)
    states = tuple(enumerate_states(content))
    probs = {}
    for eta in states:
        p = Fraction(1)
        for site, v in enumerate(eta):
            if v:
                p *= params.x[site]
        probs[eta] = p / norm
    return StationaryVector(content, states, probs)


def density(content: Content, r: int, params: SystemParams) -> Fraction:
    """Stationary probability that site 1 carries a species-r particle.

    x_1 * s_(2^a_{r+1}, 1^(m_r - 1))(x_2..x_n) / (e_{a_r}(x) e_{a_{r+1}}(x));
    the value does not involve t.  Species with multiplicity 0 have density 0.
    """
    content.require_vacancy()
    if not 1 <= r <= content.s:
        raise ValueError(f"species {r} out of range 1..{content.s}")
    if params.n != content.n:
        raise ValueError("params length does not match content size")
    if content.multiplicities[r] == 0:
        return Fraction(0)
    n = content.n
    a_r, a_r1 = content.a(r), content.a(r + 1)
    tail = list(range(2, n + 1))
    schur = schur_two_column(a_r1, content.multiplicities[r] - 1, n, tail)
    numerator = params.x[0] * schur.eval(params.x, Fraction(0))
    return numerator / (elementary_eval(a_r, params.x) * elementary_eval(a_r1, params.x))


def density_from_oracle(
    content: Content, r: int, params: SystemParams, pi: StationaryVector | None = None
) -> Fraction:
    """Marginal of the exact stationary law at site 1 (the slow route)."""
    if pi is None:
        pi = stationary_oracle(content, params)
    return sum(
        (p for eta, p in pi.probabilities.items() if eta[0] == r), Fraction(0)
    )


def current_prefactor(m0: int) -> RatFunc:
    """(1 + 2t + 3t^2 + ... + m0 t^(m0-1)) / [m0]_t."""
    if m0 < 1:
        raise ValueError("need at least one vacancy")
    return RatFunc(IntPoly(tuple(range(1, m0 + 1))), t_analogue(m0))


def current_single_species(m0: int, m1: int, params: SystemParams) -> Fraction:
    """Stationary edge current of the single-species system."""
    if m0 < 1 or m1 < 1 or m0 + m1 != params.n:
        raise ValueError("need m0 >= 1, m1 >= 1 and m0 + m1 = n")
    ratio = elementary_eval(m1 - 1, params.x) / elementary_eval(m1, params.x)
    return current_prefactor(m0).eval(params.t) * ratio


def arc_crosses(src: int, dst: int, edge_start: int, n: int) -> bool:
    """Does the clockwise arc src -> dst pass the edge (edge_start, next)?"""
    return (edge_start - src) % n < (dst - src) % n


def current_oracle(
    content: Content,
    spec: CurrentSpec,
    params: SystemParams,
    pi: StationaryVector | None = None,
) -> Fraction:
    """Expected species crossings of the edge per unit time, from first principles.

    Sums pi(eta) * (1/x_j) * P(cascade) * [the species-spec particle moved and
    its arc crosses the edge] over all states, bell sites and cascades.
    """
    content.require_vacancy()
    if not 1 <= spec.species <= content.s:
        raise ValueError(f"species {spec.species} out of range")
    n = content.n
    edge_start = spec.edge_start(n)
    if pi is None:
        pi = stationary_oracle(content, params)
    total = Fraction(0)
    for eta, p in pi.probabilities.items():
        for j in range(1, n + 1):
            if eta[j - 1] == 0:
                continue
            rate_j = p / params.x[j - 1]
            for moves, choices in cascades(eta, j):
                crossing = sum(
                    1
                    for src, dst, species in moves
                    if species == spec.species and arc_crosses(src, dst, edge_start, n)
                )
                if crossing:
                    assert all((dst - src) % n > 0 for src, dst, _ in moves)
                    prob = cascade_probability_at(choices, params.t)
                    total += rate_j * prob * crossing
    return total


def current_oracle_symbolic(content: Content, spec: CurrentSpec):
    """The oracle current as an exact fraction of polynomials (num, den).

    den = e_(conjugate partition)(x) * x_1 ... x_n; num collects
    F_eta * P(cascade) * (x_1...x_n / x_j) over crossing cascades, keeping
    everything polynomial in x with coefficients in Q(t).
    """
    content.require_vacancy()
    n = content.n
    edge_start = spec.edge_start(n)
    family = asep_family(content)
    num = XPoly.zero(n)
    for eta, poly in family.items():
        for j in range(1, n + 1):
            if eta[j - 1] == 0:
                continue
            mono = tuple(0 if c == j else 1 for c in range(1, n + 1))
            for moves, choices in cascades(eta, j):
                crossing = sum(
                    1
                    for src, dst, species in moves
                    if species == spec.species and arc_crosses(src, dst, edge_start, n)
                )
                if crossing:
                    prob = cascade_probability(choices)
                    num = num + poly * XPoly.monomial(n, mono, prob * crossing)
    den = partition_function(content) * XPoly.monomial(n, (1,) * n)
    return num, den


def naive_colored_current(content: Content, r: int, params: SystemParams) -> Fraction:
    """Difference of the two projected single-species currents.

    Equals the true species current at t = 0 but not in general; kept as the
    documented negative control.
    """
    content.require_vacancy()
    n = content.n
    a_r, a_r1 = content.a(r), content.a(r + 1)
    strong = current_single_species(n - a_r, a_r, params)
    if a_r1 == 0:
        return strong
    return strong - current_single_species(n - a_r1, a_r1, params)


def species_current_exact(
    content: Content, r: int, params: SystemParams, pi: StationaryVector | None = None
) -> Fraction:
    """True species-r current across the default edge (n, 1)."""
    return current_oracle(content, CurrentSpec(r), params, pi=pi)


# -- the elementary-symmetric identity -------------------------------------------


def elementary_identity_check(n: int, m0: int, h: int) -> bool:
    """Verify (h+1) e_{n-m0-1}(x_1..x_n) against its cyclic double sum.

    Both sides are multilinear, so monomials are squarefree and can be held
    as variable subsets with integer multiplicities; the comparison is exact
    symbolic expansion, no sampling.
    """
    if not (0 <= h <= m0 - 1 < n):
        raise ValueError("need 0 <= h <= m0 - 1 < n")
    lhs = Counter()
    for subset in combinations(range(1, n + 1), n - m0 - 1):
        lhs[frozenset(subset)] = h + 1

    rhs = Counter()
    for a in range(m0 - h, n):
        for j in range(1, n - a + 1):
            k = j + a
            inner = list(range(j + 1, k))  # x_{j+1} .. x_{j+a-1}
            outer = list(range(k + 1, n + 1)) + list(range(1, j))
            d_inner = h - m0 + a
            d_outer = n - h - 1 - a
            if d_inner < 0 or d_outer < 0:
                continue
            if d_inner > len(inner) or d_outer > len(outer):
                continue
            for s1 in combinations(inner, d_inner):
                for s2 in combinations(outer, d_outer):
                    rhs[frozenset(s1 + s2)] += 1
    return lhs == +rhs


# -- rate-permutation symmetry ---------------------------------------------------


def prefix_law(pi: StationaryVector, k: int) -> dict:
    """Joint stationary law of the words on sites 1..k."""
    out = {}
    for eta, p in pi.probabilities.items():
        key = eta[:k]
        out[key] = out.get(key, Fraction(0)) + p
    return out


def symmetry_check(content: Content, params: SystemParams, k: int):
    """Prefix observables ignore the order of the rates beyond the prefix.

    For each i with k < i < n, compares the exact joint law of sites 1..k
    before and after swapping x_i and x_{i+1}.  Returns [(i, equal)] pairs.
    """
    if not 1 <= k < content.n:
        raise ValueError(f"prefix length {k} out of range 1..{content.n - 1}")
    base = prefix_law(stationary_oracle(content, params), k)
    report = []
    for i in range(k + 1, content.n):
        xs = list(params.x)
        xs[i - 1], xs[i] = xs[i], xs[i - 1]
        swapped = SystemParams(tuple(xs), params.t)
        law = prefix_law(stationary_oracle(content, swapped), k)
        report.append((i, law == base))
    return report
