"""The inhomogeneous multispecies t-PushTASEP as an exact Markov chain.

Sites 1..n sit on a ring (clockwise = increasing site index, wrapping at n).
A configuration is a word of species values; species 0 is a vacancy, larger
species are stronger.  Site j carries an exponential bell of rate 1/x_j.
When the bell rings at an occupied site, the particle there becomes active
and displaces a weaker particle: if m particles in the system are weaker
(vacancies included), it picks the k-th weaker one clockwise with probability
t^(k-1) / [m]_t.  A displaced particle becomes active in turn, so a single
bell triggers a cascade of displacements that ends at a vacancy, and the bell
site itself is vacant once the dust settles.

This module enumerates the state space, expands single-bell cascades into
exact outcome distributions, assembles the rational generator matrix, and
solves for the stationary distribution by fraction-free elimination.  It is
the ground-truth oracle against which the combinatorial formulas elsewhere in
the package are checked.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .ratfunc import RatFunc, Rational, t_analogue

DEFAULT_MAX_STATES = 20_000


class StateSpaceLimitError(RuntimeError):
    """State count exceeds the configured bound for exact solves."""


@dataclass(frozen=True)
class Content:
    """Species multiplicities (m_0, ..., m_s); m_i particles of species i.

    The partition with these multiplicities is the conserved content of the
    chain.  Chain dynamics additionally require at least one vacancy
    (m_0 >= 1); purely polynomial constructions do not, so that is checked at
    the dynamics entry points rather than here.
    """

    multiplicities: tuple

    def __post_init__(self):
        m = tuple(int(v) for v in self.multiplicities)
        object.__setattr__(self, "multiplicities", m)
        if not m or any(v < 0 for v in m):
            raise ValueError(f"invalid multiplicities {m}")
        if len(m) > 1 and m[-1] == 0:
            raise ValueError("largest species must have positive multiplicity")
        if sum(m) == 0:
            raise ValueError("empty system")

    @staticmethod
    def from_word(word) -> "Content":
        """Content of a configuration word (any permutation of the partition)."""
        word = tuple(int(v) for v in word)
        if not word or any(v < 0 for v in word):
            raise ValueError(f"invalid configuration {word}")
        m = [0] * (max(word) + 1)
        for v in word:
            m[v] += 1
        return Content(tuple(m))

    @property
    def n(self) -> int:
        return sum(self.multiplicities)

    @property
    def s(self) -> int:
        """Largest species present."""
        return len(self.multiplicities) - 1

    @property
    def m0(self) -> int:
        return self.multiplicities[0]

    def a(self, r: int) -> int:
        """Number of particles of species r or stronger."""
        if r > self.s:
            return 0
        return sum(self.multiplicities[max(r, 0):])

    def partition(self) -> tuple:
        """The content as a weakly decreasing word of length n."""
        out = []
        for species in range(self.s, -1, -1):
            out.extend([species] * self.multiplicities[species])
        return tuple(out)

    def conjugate(self) -> tuple:
        """Column lengths of the partition diagram (used as an e-index)."""
        lam = self.partition()
        return tuple(
            sum(1 for v in lam if v >= c) for c in range(1, self.s + 1)
        )

    def state_count(self) -> int:
        from math import factorial

        count = factorial(self.n)
        for m in self.multiplicities:
            count //= factorial(m)
        return count

    def has_distinct_nonzero_parts(self) -> bool:
        return all(m <= 1 for m in self.multiplicities[1:])

    def diagram_enumerable(self) -> bool:
        """Ball arrays enumerate this content directly: distinct nonzero
        parts, or a single species (one unlabelled-matching row)."""
        return self.s <= 1 or self.has_distinct_nonzero_parts()

    def require_vacancy(self):
        if self.m0 < 1:
            raise ValueError("chain dynamics require at least one vacancy (m_0 >= 1)")


@dataclass(frozen=True)
class SystemParams:
    """Site rate parameters x_1..x_n (positive rationals) and t >= 0."""

    x: tuple
    t: Fraction

    def __post_init__(self):
        xs = tuple(Fraction(v) for v in self.x)
        object.__setattr__(self, "x", xs)
        object.__setattr__(self, "t", Fraction(self.t))
        if any(v <= 0 for v in xs):
            raise ValueError("all site parameters x_j must be positive")
        if self.t < 0:
            raise ValueError("t must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.x)

    def to_json_dict(self):
        return {"x": [str(v) for v in self.x], "t": str(self.t)}


def enumerate_states(content: Content):
    """All distinct permutations of the content word, lexicographically decreasing."""
    n = content.n
    counts = list(content.multiplicities)
    out = []
    word = []

    def rec():
        if len(word) == n:
            out.append(tuple(word))
            return
        for v in range(len(counts) - 1, -1, -1):
            if counts[v]:
                counts[v] -= 1
                word.append(v)
                rec()
                word.pop()
                counts[v] += 1

    rec()
    return out


def config_label(eta) -> str:
    """Digit-string label when all species are single digits, else dash separated."""
    if max(eta) <= 9:
        return "".join(str(v) for v in eta)
    return "-".join(str(v) for v in eta)


# -- cascades ---------------------------------------------------------------


def cascades(eta, j):
    """All displacement cascades triggered by a bell at site j in state eta.

    Yields (moves, choices): moves is a tuple of (src, dst, species) in cascade
    order (sites 1-based); choices records the (k, m) selection behind each
    move, so the cascade probability is prod t^(k-1)/[m]_t.  A bell at a
    vacancy yields the single empty cascade.

    Every active particle scans the sites of strictly weaker particles in the
    original state: a cascade only ever relocates particles of strictly
    decreasing species, so the weaker sites it consults are still untouched.
    An equal-species particle is never displaced.
    """
    eta = tuple(eta)
    n = len(eta)
    if not 1 <= j <= n:
        raise IndexError(f"site {j} out of range 1..{n}")
    if eta[j - 1] == 0:
        yield (), ()
        return

    def weaker_sites(pos, species):
        sites = []
        for d in range(1, n):
            q = (pos - 1 + d) % n + 1
            if eta[q - 1] < species:
                sites.append(q)
        return sites

    def rec(pos, species, moves, choices):
        sites = weaker_sites(pos, species)
        m = len(sites)
        for k, target in enumerate(sites, start=1):
            nm = moves + ((pos, target, species),)
            nc = choices + ((k, m),)
            if eta[target - 1] == 0:
                yield nm, nc
            else:
                yield from rec(target, eta[target - 1], nm, nc)

    yield from rec(j, eta[j - 1], (), ())


def apply_moves(eta, moves):
    """Configuration after a cascade: every mover lands, the bell site empties."""
    out = list(eta)
    for _, dst, species in moves:
        out[dst - 1] = species
    if moves:
        out[moves[0][0] - 1] = 0
    return tuple(out)


def cascade_probability(choices) -> RatFunc:
    """prod over the cascade of t^(k-1) / [m]_t, as an element of Q(t)."""
    shift = sum(k - 1 for k, _ in choices)
    den = 1
    for _, m in choices:
        den = t_analogue(m) * den
    return RatFunc(t_analogue(1).shift(shift), den)


def cascade_probability_at(choices, t_val: Fraction) -> Fraction:
    total = Fraction(1)
    for k, m in choices:
        total *= t_val ** (k - 1) / t_analogue(m).eval(t_val)
    return total


def bell_outcomes(eta, j, content: Content | None = None):
    """Outcome distribution of a bell at site j: list of (state, probability).

    Probabilities are exact rational functions of t and sum to 1.  A bell at
    a vacancy returns [(eta, 1)].
    """
    eta = tuple(eta)
    if content is not None and Content.from_word(eta) != content:
        raise ValueError(f"configuration {eta} does not have the given content")
    acc = {}
    for moves, choices in cascades(eta, j):
        target = apply_moves(eta, moves)
        p = cascade_probability(choices)
        acc[target] = acc[target] + p if target in acc else p
    return sorted(acc.items(), key=lambda kv: kv[0], reverse=True)


def bell_outcomes_at(eta, j, t_val: Fraction):
    """Same distribution with probabilities evaluated at a rational t."""
    eta = tuple(eta)
    acc = {}
    for moves, choices in cascades(eta, j):
        target = apply_moves(eta, moves)
        p = cascade_probability_at(choices, t_val)
        acc[target] = acc.get(target, Fraction(0)) + p
    return acc


# -- generator and stationary solve ------------------------------------------


@dataclass(frozen=True)
class TransitionTable:
    """Exact generator matrix in the fixed enumerate_states order."""

    content: Content
    params: SystemParams
    states: tuple
    matrix: tuple  # tuple of tuples of Fraction; rows sum to zero

    def index(self, eta) -> int:
        return self.states.index(tuple(eta))

    def rate(self, src, dst) -> Fraction:
        return self.matrix[self.index(src)][self.index(dst)]


def generator(content: Content, params: SystemParams) -> TransitionTable:
    """Generator Q: off-diagonal (eta, eta') entries sum bell rates, rows sum to 0."""
    content.require_vacancy()
    if params.n != content.n:
        raise ValueError("params length does not match content size")
    states = enumerate_states(content)
    index = {eta: i for i, eta in enumerate(states)}
    size = len(states)
    rows = [[Fraction(0)] * size for _ in range(size)]
    for i, eta in enumerate(states):
        for j in range(1, content.n + 1):
            if eta[j - 1] == 0:
                continue
            rate_j = 1 / params.x[j - 1]
            for target, prob in bell_outcomes_at(eta, j, params.t).items():
                r = rate_j * prob
                rows[i][index[target]] += r
                rows[i][i] -= r
    return TransitionTable(
        content, params, tuple(states), tuple(tuple(row) for row in rows)
    )


def _bareiss_solve(matrix, rhs):
    """Solve A x = b exactly by fraction-free (Bareiss) elimination.

    Rows are scaled to integers first; the elimination keeps every intermediate
    entry an integer (a minor of the scaled matrix), avoiding rational blowup.
    Returns a list of Fractions, or raises ValueError when A is singular.
    """
    size = len(matrix)
    aug = []
    for row, b in zip(matrix, rhs):
        scale = 1
        for entry in row + [b]:
            scale = scale * entry.denominator // _gcd(scale, entry.denominator)
        ints = [int(v * scale) for v in row] + [int(b * scale)]
        shrink = 0
        for v in ints:
            shrink = _gcd(shrink, abs(v))
            if shrink == 1:
                break
        if shrink > 1:
            ints = [v // shrink for v in ints]
        aug.append(ints)

    prev = 1
    for k in range(size):
        pivot = next((r for r in range(k, size) if aug[r][k]), None)
        if pivot is None:
            raise ValueError("singular linear system")
        if pivot != k:
            aug[k], aug[pivot] = aug[pivot], aug[k]
        pk = aug[k][k]
        for i in range(k + 1, size):
            row_i, row_k = aug[i], aug[k]
            factor = row_i[k]
            for j in range(k + 1, size + 1):
                row_i[j] = (pk * row_i[j] - factor * row_k[j]) // prev
            row_i[k] = 0
        prev = pk

    xs = [Fraction(0)] * size
    for i in range(size - 1, -1, -1):
        acc = Fraction(aug[i][size])
        for j in range(i + 1, size):
            acc -= aug[i][j] * xs[j]
        xs[i] = acc / aug[i][i]
    return xs


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class StationaryVector:
    """Exact stationary probabilities, indexed in enumerate_states order."""

    content: Content
    states: tuple
    probabilities: dict  # state tuple -> Fraction

    def __post_init__(self):
        total = sum(self.probabilities.values())
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, not 1")

    def __getitem__(self, eta) -> Fraction:
        return self.probabilities[tuple(eta)]

    def items(self):
        return [(eta, self.probabilities[eta]) for eta in self.states]

    def to_csv(self) -> str:
        lines = ["configuration,probability"]
        for eta, p in self.items():
            lines.append(f"{config_label(eta)},{p}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self):
        return {
            "content": list(self.content.multiplicities),
            "states": [list(eta) for eta in self.states],
            "probabilities": {config_label(eta): str(p) for eta, p in self.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def stationary_oracle(
    content: Content, params: SystemParams, max_states: int = DEFAULT_MAX_STATES
) -> StationaryVector:
    """Unique probability vector with pi Q = 0, by exact linear solve.

    Replaces one (dependent) balance equation with normalisation, solves the
    resulting nonsingular system fraction-free, then certifies the answer:
    every balance equation holds exactly and every entry is positive.
    """
    count = content.state_count()
    if count > max_states:
        raise StateSpaceLimitError(
            f"{count} states exceeds the bound {max_states}; raise max_states to force"
        )
    table = generator(content, params)
    size = len(table.states)
    # Equations: columns of Q (transposed), with the last one replaced by sum = 1.
    rows = [[table.matrix[i][j] for i in range(size)] for j in range(size - 1)]
    rows.append([Fraction(1)] * size)
    rhs = [Fraction(0)] * (size - 1) + [Fraction(1)]
    pi = _bareiss_solve(rows, rhs)

    for j in range(size):
        balance = sum(pi[i] * table.matrix[i][j] for i in range(size))
        if balance != 0:
            raise RuntimeError("stationary solve failed certification (pi Q != 0)")
    if any(p <= 0 for p in pi):
        raise RuntimeError("stationary solve produced a non-positive probability")

    probs = {eta: pi[i] for i, eta in enumerate(table.states)}
    return StationaryVector(content, table.states, probs)


# -- recolouring projections ---------------------------------------------------


class OrderMap:
    """A weakly order-preserving species relabelling.

    Built from a dict of exceptional values; anything not listed maps to
    itself.  Weak monotonicity on the relevant range is checked up front.
    Projections of chain dynamics additionally need the map to fix 0
    (vacancies stay vacancies); pass require_zero_fixed for that.
    """

    def __init__(self, mapping: dict, domain_max: int | None = None,
                 require_zero_fixed: bool = False):
        self.mapping = {int(k): int(v) for k, v in mapping.items()}
        if require_zero_fixed and self.mapping.get(0, 0) != 0:
            raise ValueError("species map must fix 0 to project chain dynamics")
        top = max([domain_max or 0, *self.mapping.keys(), 0])
        values = [self(v) for v in range(top + 1)]
        if any(v < 0 for v in values):
            raise ValueError("species values must stay nonnegative")
        if any(a > b for a, b in zip(values, values[1:])):
            raise ValueError(f"species map {self.mapping} is not weakly order-preserving")

    def fixes_zero(self) -> bool:
        return self.mapping.get(0, 0) == 0

    def __call__(self, species: int) -> int:
        return self.mapping.get(species, species)


def project_config(phi: OrderMap, eta) -> tuple:
    """Componentwise application of a weakly order-preserving relabelling."""
    return tuple(phi(v) for v in eta)


def projection_check(content: Content, phi: OrderMap, params: SystemParams) -> bool:
    """Stationary law commutes with recolouring: pushforward of pi equals pi of the image."""
    if not phi.fixes_zero():
        raise ValueError("chain projections need phi(0) = 0")
    pi = stationary_oracle(content, params)
    image_content = Content.from_word(project_config(phi, content.partition()))
    pi_image = stationary_oracle(image_content, params)
    pushed = {}
    for eta, p in pi.probabilities.items():
        target = project_config(phi, eta)
        pushed[target] = pushed.get(target, Fraction(0)) + p
    return pushed == pi_image.probabilities


def interval_merge_maps(content: Content):
    """All species maps that merge adjacent value blocks of the content.

    Every weakly order-preserving relabelling of the content's values acts by
    merging consecutive runs of values; the canonical representative sends the
    i-th block to i (block containing 0 goes to 0).
    """
    values = sorted({v for v in content.partition()})
    maps = []

    def rec(idx, blocks):
        if idx == len(values):
            mapping = {}
            for target, block in enumerate(blocks):
                for v in block:
                    mapping[v] = target
            maps.append(OrderMap(mapping, domain_max=values[-1]))
            return
        if blocks:
            rec(idx + 1, blocks[:-1] + [blocks[-1] + [values[idx]]])
        rec(idx + 1, blocks + [[values[idx]]])

    rec(0, [])
    return maps


def averaged_kernel_check(content: Content, params: SystemParams) -> bool:
    """The bell-averaged jump kernel fixes the stationary distribution.

    The kernel averages the single-bell outcome distributions with weights
    proportional to the bell rates 1/x_j; its stationary law coincides with
    the continuous-time chain's.
    """
    pi = stationary_oracle(content, params)
    inv = [1 / v for v in params.x]
    total = sum(inv)
    after = {eta: Fraction(0) for eta in pi.states}
    for eta, p in pi.probabilities.items():
        for j in range(1, content.n + 1):
            weight = inv[j - 1] / total
            for target, prob in bell_outcomes_at(eta, j, params.t).items():
                after[target] += p * weight * prob
    return after == pi.probabilities
