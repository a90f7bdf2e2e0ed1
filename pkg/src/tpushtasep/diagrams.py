"""Multiline diagrams and the combinatorial stationary distribution.

A ball system of content lambda (a partition with distinct nonzero parts) is
an s x n array, rows numbered 1..s from the bottom, in which row r holds one
ball for every species >= r present.  A multiline diagram labels the balls:
row r uses each species >= r exactly once, and whenever two vertically
adjacent cells are occupied the lower label is at least the upper one.

Diagrams are generated row by row from the top.  The ball of label h in row
r+1 matches a ball in row r: the ball directly below it if that one is still
unlabelled (a trivial match, weight 1), otherwise the k-th unlabelled ball
clockwise with weight t^(k-1) / [K]_t, K the number of balls in row r of
label at most h.  The product of the matching weights and of x_j per ball in
column j is the diagram weight; summing weights over all diagrams with a
fixed bottom row yields the polynomial whose normalised values give the
stationary law of the ring dynamics.

Contents with repeated nonzero parts are handled by lifting to a refinement
with distinct parts, summing the lifted polynomials over the fibres of the
collapse map, and dividing out the (exactly divisible) ratio of elementary
symmetric products.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .chain import Content, StationaryVector, SystemParams, enumerate_states
from .ratfunc import IntPoly, RatFunc, t_analogue, t_factorial
from .xpoly import (
    XPoly,
    elementary,
    elementary_eval,
    elementary_product,
    exact_divide,
)


@dataclass(frozen=True)
class MultilineDiagram:
    """Labelled ball array; balls is a sorted tuple of (row, col, label)."""

    n: int
    balls: tuple

    def __post_init__(self):
        object.__setattr__(self, "balls", tuple(sorted(self.balls)))
        seen = set()
        for row, col, label in self.balls:
            if not (row >= 1 and 1 <= col <= self.n and label >= 1):
                raise ValueError(f"ball ({row},{col},{label}) out of range")
            if (row, col) in seen:
                raise ValueError(f"two balls in cell ({row},{col})")
            seen.add((row, col))

    @property
    def rows(self) -> int:
        return max((row for row, _, _ in self.balls), default=0)

    def row_config(self, r: int) -> tuple:
        """The word read off row r (0 on empty cells)."""
        out = [0] * self.n
        for row, col, label in self.balls:
            if row == r:
                out[col - 1] = label
        return tuple(out)

    def label_position(self, r: int, label: int):
        for row, col, lab in self.balls:
            if row == r and lab == label:
                return col
        return None

    def column_counts(self) -> tuple:
        out = [0] * self.n
        for _, col, _ in self.balls:
            out[col - 1] += 1
        return tuple(out)

    def validate(self, content: Content):
        """Check row contents and the vertical ordering constraint."""
        if not content.diagram_enumerable():
            raise ValueError("diagrams require distinct nonzero parts")
        s = content.s
        if self.rows > s:
            raise ValueError("too many rows for the content")
        for r in range(1, s + 1):
            expected = [
                h
                for h in range(r, s + 1)
                for _ in range(content.multiplicities[h])
            ]
            got = sorted(label for row, _, label in self.balls if row == r)
            if got != expected:
                raise ValueError(f"row {r} labels {got} != {expected}")
        occupied = {(row, col): label for row, col, label in self.balls}
        for (row, col), label in occupied.items():
            above = occupied.get((row + 1, col))
            if above is not None and label < above:
                raise ValueError(
                    f"label {label} at ({row},{col}) below larger label {above}"
                )

    def to_json_dict(self):
        return {
            "rows": self.rows,
            "cols": self.n,
            "balls": [
                {"row": row, "col": col, "label": label}
                for row, col, label in self.balls
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


@dataclass(frozen=True)
class DiagramWeight:
    """x-part as a column exponent vector, t-part as an element of Q(t)."""

    x_exponents: tuple
    t_weight: RatFunc

    def to_json_dict(self):
        return {"x_exponents": list(self.x_exponents), "t_weight": str(self.t_weight)}


def diagram_weight(diagram: MultilineDiagram, content: Content) -> DiagramWeight:
    """Weight of a diagram, computed directly from its labelled cells.

    For each label h >= 2 and each row r < h the factor is 1 on a trivial
    (same-column) match; otherwise t^l / [K]_t with K the number of balls in
    row r of label at most h and l the number of balls of label below h
    strictly between the two columns, clockwise.
    """
    diagram.validate(content)
    n = diagram.n
    t_part = RatFunc.one()
    for h in range(2, content.s + 1):
        if not content.multiplicities[h]:
            continue
        for r in range(1, h):
            j_upper = diagram.label_position(r + 1, h)
            j_lower = diagram.label_position(r, h)
            if j_upper == j_lower:
                continue
            row_labels = [
                (col, label) for row, col, label in diagram.balls if row == r
            ]
            K = sum(1 for _, label in row_labels if label <= h)
            ell = sum(
                1
                for col, label in row_labels
                if label < h and 0 < (col - j_upper) % n < (j_lower - j_upper) % n
            )
            t_part = t_part * RatFunc(IntPoly(1).shift(ell), t_analogue(K))
    return DiagramWeight(diagram.column_counts(), t_part)


# -- row-by-row generation ----------------------------------------------------


def _row_matchings_generic(upper_config, lower_cols, r, content, one, step):
    """All labelings of row r consistent with row r+1, with their weights.

    upper_config is the word of row r+1; lower_cols the occupied columns of
    row r (len = number of species >= r).  Labels of the upper row are
    processed in decreasing order; a label matches trivially when the cell
    below it is free, else the k-th free ball clockwise via step(w, k, K).
    Returns [(lower_config, weight)].
    """
    n = len(upper_config)
    labels = sorted((h for h in upper_config if h), reverse=True)
    lower = set(lower_cols)
    expected = content.a(r)
    if len(lower) != expected:
        raise ValueError(f"row {r} needs {expected} balls, got {len(lower)}")

    results = []

    def rec(idx, unlabeled, assignment, weight):
        if idx == len(labels):
            cfg = [0] * n
            for col, label in assignment.items():
                cfg[col - 1] = label
            leftovers = list(unlabeled)
            if leftovers:
                # exactly one ball can remain, and it takes the row label
                cfg[leftovers[0] - 1] = r
            results.append((tuple(cfg), weight))
            return
        h = labels[idx]
        j = upper_config.index(h) + 1
        if j in unlabeled:
            rec(idx + 1, unlabeled - {j}, {**assignment, j: h}, weight)
            return
        candidates = sorted(unlabeled, key=lambda col: (col - j) % n)
        K = len(candidates)
        for k, col in enumerate(candidates, start=1):
            rec(idx + 1, unlabeled - {col}, {**assignment, col: h}, step(weight, k, K))

    rec(0, frozenset(lower), {}, one)
    return results


def row_matchings(upper_config, lower_cols, r: int, content: Content):
    """Row labelings with exact weights in Q(t)."""

    def step(w, k, K):
        return w * RatFunc(IntPoly(1).shift(k - 1), t_analogue(K))

    return _row_matchings_generic(
        upper_config, lower_cols, r, content, RatFunc.one(), step
    )


def iter_diagrams(content: Content):
    """Yield every multiline diagram of the given distinct-part content."""
    if not content.diagram_enumerable():
        raise ValueError("diagram enumeration requires distinct nonzero parts")
    n, s = content.n, content.s
    if s == 0:
        yield MultilineDiagram(n, ())
        return

    def rec(r, upper_cfg, acc):
        if r == 0:
            balls = []
            for row, cfg in zip(range(s, 0, -1), acc):
                for col, label in enumerate(cfg, start=1):
                    if label:
                        balls.append((row, col, label))
            yield MultilineDiagram(n, tuple(balls))
            return
        for cols in combinations(range(1, n + 1), content.a(r)):
            for cfg, _ in row_matchings(upper_cfg, cols, r, content):
                yield from rec(r - 1, cfg, acc + [cfg])

    for cols in combinations(range(1, n + 1), content.a(s)):
        top = tuple(s if c in cols else 0 for c in range(1, n + 1))
        yield from rec(s - 1, top, [top])


def enumerate_diagrams(content: Content, bottom_row):
    """All diagrams whose bottom row equals the given word, with weights."""
    if not content.diagram_enumerable():
        raise ValueError(
            "repeated nonzero parts have no direct diagram expansion; "
            "use the refinement route"
        )
    bottom = tuple(bottom_row)
    if Content.from_word(bottom).partition() != content.partition():
        raise ValueError(f"bottom row {bottom} is not a permutation of the content")
    return [
        (d, diagram_weight(d, content))
        for d in iter_diagrams(content)
        if d.row_config(1) == bottom
    ]


# -- polynomials ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _family_distinct(content: Content):
    """Bottom-row weight sums for a distinct-part content, by row DP."""
    n, s = content.n, content.s
    if s == 0:
        return {(0,) * n: XPoly.one(n)}
    layer = {}
    for cols in combinations(range(1, n + 1), content.a(s)):
        cfg = tuple(s if c in cols else 0 for c in range(1, n + 1))
        exps = tuple(1 if c in cols else 0 for c in range(1, n + 1))
        layer[cfg] = XPoly.monomial(n, exps)
    for r in range(s - 1, 0, -1):
        below = {}
        ball_sets = list(combinations(range(1, n + 1), content.a(r)))
        for upper_cfg, poly in layer.items():
            for cols in ball_sets:
                exps = tuple(1 if c in cols else 0 for c in range(1, n + 1))
                for cfg, weight in row_matchings(upper_cfg, cols, r, content):
                    term = poly * XPoly.monomial(n, exps, weight)
                    below[cfg] = below[cfg] + term if cfg in below else term
        layer = below
    return layer


@lru_cache(maxsize=None)
def _values_distinct(content: Content, xs, t_val):
    """The distinct-part bottom-row sums evaluated at rational (x, t).

    Same recursion as the symbolic computation, run in plain rational
    arithmetic; used by the stationary evaluation where no symbolic output
    is needed.
    """
    n, s = content.n, content.s
    analogue = [Fraction(0)] + [
        t_analogue(k).eval(t_val) for k in range(1, n + 1)
    ]
    powers = [t_val ** i for i in range(n + 1)]

    def step(w, k, K):
        return w * powers[k - 1] / analogue[K]

    if s == 0:
        return {(0,) * n: Fraction(1)}
    layer = {}
    for cols in combinations(range(1, n + 1), content.a(s)):
        cfg = tuple(s if c in cols else 0 for c in range(1, n + 1))
        value = Fraction(1)
        for c in cols:
            value *= xs[c - 1]
        layer[cfg] = value
    for r in range(s - 1, 0, -1):
        below = {}
        ball_sets = list(combinations(range(1, n + 1), content.a(r)))
        for upper_cfg, value in layer.items():
            for cols in ball_sets:
                xmono = Fraction(1)
                for c in cols:
                    xmono *= xs[c - 1]
                base = value * xmono
                for cfg, weight in _row_matchings_generic(
                    upper_cfg, cols, r, content, Fraction(1), step
                ):
                    below[cfg] = below.get(cfg, Fraction(0)) + base * weight
        layer = below
    return layer


def family_values(content: Content, params: SystemParams):
    """{eta: F_eta(params.x; params.t)} as exact rationals."""
    xs = tuple(Fraction(v) for v in params.x)
    t_val = Fraction(params.t)
    if content.diagram_enumerable():
        return dict(_values_distinct(content, xs, t_val))
    lifted, phi = refine_content(content)
    lifted_values = _values_distinct(lifted, xs, t_val)
    grouped = {}
    for zeta, value in lifted_values.items():
        eta = tuple(phi[v] for v in zeta)
        grouped[eta] = grouped.get(eta, Fraction(0)) + value
    mu_parts = Counter(content.conjugate())
    lifted_parts = Counter(lifted.conjugate())
    scale = Fraction(1)
    for k in (mu_parts - lifted_parts).elements():
        scale *= elementary_eval(k, xs)
    for k in (lifted_parts - mu_parts).elements():
        scale /= elementary_eval(k, xs)
    return {eta: value * scale for eta, value in grouped.items()}


def refine_content(mu: Content):
    """Lift a content to one with distinct parts, no part 1 and a single 0.

    Returns (lifted content, collapse map as a dict lifted-value -> value).
    A content already of that shape is returned unchanged with the identity
    map.  Otherwise each value block of size c is lifted to c consecutive
    integers, the lowest block to {0} followed by 2..c (the value 1 is never
    used, so the lift simultaneously has a unique 0 and no 1).
    """
    values = [v for v in range(mu.s + 1) if mu.multiplicities[v]]
    if (
        mu.has_distinct_nonzero_parts()
        and mu.multiplicities[0] == 1
        and (mu.s < 1 or mu.multiplicities[1] == 0)
    ):
        return mu, {v: v for v in values}

    phi = {}
    next_free = 0
    for idx, v in enumerate(values):
        count = mu.multiplicities[v]
        if idx == 0:
            block = [0] + list(range(2, count + 1))
        else:
            start = max(next_free, 2)
            block = list(range(start, start + count))
        for lifted in block:
            phi[lifted] = v
        next_free = block[-1] + 1

    lifted_multi = [0] * (max(phi) + 1)
    for lifted in phi:
        lifted_multi[lifted] = 1
    lifted_content = Content(tuple(lifted_multi))
    assert lifted_content.multiplicities[0] == 1
    assert lifted_content.s < 1 or lifted_content.multiplicities[1] == 0
    return lifted_content, phi


@lru_cache(maxsize=None)
def asep_family(content: Content):
    """The full family {eta: F_eta(x; t)} over all permutations of the content.

    Distinct-part contents are summed directly over diagrams.  Otherwise the
    content is refined, the lifted polynomials are summed over fibres of the
    collapse map, and the symmetric proportionality factor (a ratio of
    elementary symmetric products fixed by the two conjugate partitions) is
    divided out exactly; any division failure would signal an internal bug
    and raises.
    """
    n = content.n
    if content.diagram_enumerable():
        family = _family_distinct(content)
    else:
        lifted, phi = refine_content(content)
        lifted_family = _family_distinct(lifted)
        grouped = {}
        for zeta, poly in lifted_family.items():
            eta = tuple(phi[v] for v in zeta)
            grouped[eta] = grouped[eta] + poly if eta in grouped else poly
        # the proportionality factor is e_(mu')/e_(lifted'); cancel the two
        # index multisets first so only small single-factor divisions remain
        mu_parts = Counter(content.conjugate())
        lifted_parts = Counter(lifted.conjugate())
        mul_parts = list((mu_parts - lifted_parts).elements())
        div_parts = list((lifted_parts - mu_parts).elements())
        family = {}
        for eta, poly in grouped.items():
            for k in mul_parts:
                poly = poly * elementary(k, n)
            for k in sorted(div_parts):
                poly = exact_divide(poly, elementary(k, n))
            family[eta] = poly
    expected = set(enumerate_states(content))
    if set(family) != expected:
        raise RuntimeError("diagram enumeration missed configurations")
    return family


def asep_polynomial_q1(content: Content, eta) -> XPoly:
    """The stationary-weight polynomial attached to one configuration."""
    eta = tuple(eta)
    if Content.from_word(eta).partition() != content.partition():
        raise ValueError(f"{eta} is not a permutation of the content")
    return asep_family(content)[eta]


def partition_function(content: Content, n: int | None = None) -> XPoly:
    """Sum of the family: the product of elementary symmetric polynomials
    indexed by the conjugate partition."""
    return elementary_product(content.conjugate(), n or content.n)


def stationary_from_diagrams(content: Content, params: SystemParams) -> StationaryVector:
    """Stationary law via the combinatorial formula: F_eta / e_(conjugate)."""
    content.require_vacancy()
    if params.n != content.n:
        raise ValueError("params length does not match content size")
    values = family_values(content, params)
    total = Fraction(1)
    for part in content.conjugate():
        total *= elementary_eval(part, params.x)
    probs = {eta: value / total for eta, value in values.items()}
    states = tuple(enumerate_states(content))
    return StationaryVector(content, states, probs)


# -- random sampling -----------------------------------------------------------


def sample_diagram(content: Content, params: SystemParams, seed) -> MultilineDiagram:
    """Draw one diagram with probability proportional to its weight.

    Ball rows are sampled independently (row r occupies a set A with
    probability prod_{j in A} x_j / e_{|A|}), then labels are matched top to
    bottom exactly as in the weight definition.
    """
    if not content.diagram_enumerable():
        raise ValueError("sampling requires distinct nonzero parts")
    rng = np.random.default_rng(seed)
    n, s = content.n, content.s
    xs = [float(v) for v in params.x]
    t = float(params.t)

    def sample_row(size):
        cols = []
        need = size
        for j in range(1, n + 1):
            remaining = xs[j:]
            if need == 0:
                break
            e_with = xs[j - 1] * _e_float(need - 1, remaining)
            e_without = _e_float(need, remaining)
            if rng.random() * (e_with + e_without) < e_with:
                cols.append(j)
                need -= 1
        return cols

    rows = {r: sample_row(content.a(r)) for r in range(1, s + 1)}
    balls = []
    upper = {}  # col -> label in the row above
    for r in range(s, 0, -1):
        unlabeled = set(rows[r])
        assignment = {}
        for h in sorted(upper.values(), reverse=True):
            j = next(col for col, lab in upper.items() if lab == h)
            if j in unlabeled:
                assignment[j] = h
                unlabeled.discard(j)
                continue
            candidates = sorted(unlabeled, key=lambda col: (col - j) % n)
            K = len(candidates)
            weights = [t ** k for k in range(K)]
            total = sum(weights)
            u = rng.random() * total
            acc = 0.0
            chosen = candidates[-1]
            for col, w in zip(candidates, weights):
                acc += w
                if u < acc:
                    chosen = col
                    break
            assignment[chosen] = h
            unlabeled.discard(chosen)
        if r == s:
            for col in list(unlabeled):
                assignment[col] = s
            unlabeled.clear()
        for col in unlabeled:
            assignment[col] = r
        for col, label in assignment.items():
            balls.append((r, col, label))
        upper = assignment
    return MultilineDiagram(n, tuple(balls))


def _e_float(k, values):
    if k < 0:
        return 0.0
    row = [1.0] + [0.0] * k
    for x in values:
        for d in range(min(k, len(row) - 1), 0, -1):
            row[d] += x * row[d - 1]
    return row[k]


# -- structural checks ----------------------------------------------------------


def bottom_rows_check(content: Content) -> bool:
    """Rows 1 and 2 of a weight-distributed diagram have equal marginals.

    Exact polynomial identity; requires distinct parts and no part equal
    to 1, so both rows carry the full content.
    """
    if not content.has_distinct_nonzero_parts() or (
        content.s >= 1 and content.multiplicities[1]
    ):
        raise ValueError("check applies to distinct-part contents without part 1")
    if content.s < 2:
        return True
    row1 = {}
    row2 = {}
    n = content.n
    for d in iter_diagrams(content):
        w = diagram_weight(d, content)
        poly = XPoly.monomial(n, w.x_exponents, w.t_weight)
        for acc, cfg in ((row1, d.row_config(1)), (row2, d.row_config(2))):
            acc[cfg] = acc[cfg] + poly if cfg in acc else poly
    return row1 == row2


def extra_row_check(content: Content) -> bool:
    """Conditional bottom-row law given row 2 equals the single-bell law.

    For contents with one vacancy, no species 1 and distinct parts: fixing
    row 2 to a word eta and the bottom vacancy to site j, the matching
    distribution of row 1 coincides with the bell-at-j outcome distribution
    of the ring dynamics started from eta.
    """
    from .chain import bell_outcomes

    if content.multiplicities[0] != 1 or (content.s >= 1 and content.multiplicities[1]):
        raise ValueError("check needs exactly one vacancy and no species 1")
    if not content.has_distinct_nonzero_parts():
        raise ValueError("check needs distinct parts")
    n = content.n
    for eta in enumerate_states(content):
        for j in range(1, n + 1):
            cols = tuple(c for c in range(1, n + 1) if c != j)
            matched = {}
            for cfg, w in row_matchings(eta, cols, 1, content):
                matched[cfg] = matched[cfg] + w if cfg in matched else w
            bells = dict(bell_outcomes(eta, j))
            if matched != bells:
                return False
    return True


def predicted_denominator_factor(content: Content) -> IntPoly:
    """The t-factorial product that clears all stationary-weight denominators.

    Product over species r of [a_r]_t! / [m_r]_t!, where a_r counts particles
    of species r or stronger: the partial sums of the multiplicities taken
    from the strongest species down.
    """
    clearing = IntPoly(1)
    for r in range(1, content.s + 1):
        clearing = clearing * t_factorial(content.a(r)).divexact(
            t_factorial(content.multiplicities[r])
        )
    return clearing


def denominator_check(content: Content) -> bool:
    """Every weight polynomial times the predicted factor is polynomial in t."""
    factor = RatFunc(predicted_denominator_factor(content))
    for poly in asep_family(content).values():
        for coeff in poly.terms.values():
            if (coeff * factor).den.degree > 0:
                return False
    return True
