"""Shared test utilities: deterministic parameters, random algebra elements,
and a solve cache so oracle-heavy suites reuse exact stationary vectors."""

import random
from fractions import Fraction

from tpushtasep import Content, SystemParams, stationary_oracle
from tpushtasep.cli import all_contents
from tpushtasep.ratfunc import IntPoly, RatFunc
from tpushtasep.xpoly import XPoly

__all__ = [
    "all_contents",
    "seeded_params",
    "shared_params",
    "rand_ratfunc",
    "rand_xpoly",
    "oracle_cached",
]


def seeded_params(content, seed, t=Fraction(1, 3)):
    rng = random.Random(f"{seed}:{content.multiplicities}")
    xs = tuple(Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(content.n))
    return SystemParams(xs, t)


def shared_params(n, seed, t=Fraction(1, 3)):
    """One parameter vector per (n, seed), so solve caching kicks in."""
    rng = random.Random(f"{seed}:{n}")
    xs = tuple(Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(n))
    return SystemParams(xs, t)


_ORACLE_CACHE = {}


def oracle_cached(content, params):
    key = (content, params.x, params.t)
    if key not in _ORACLE_CACHE:
        _ORACLE_CACHE[key] = stationary_oracle(content, params)
    return _ORACLE_CACHE[key]


def rand_ratfunc(rng, max_deg=2):
    num = IntPoly(tuple(rng.randint(-4, 4) for _ in range(max_deg + 1)))
    den = IntPoly((1, rng.randint(0, 2), rng.randint(0, 1)))
    return RatFunc(num, den)


def rand_xpoly(rng, n, nterms=4, max_exp=2):
    terms = {}
    for _ in range(nterms):
        exps = tuple(rng.randint(0, max_exp) for _ in range(n))
        c = rand_ratfunc(rng)
        terms[exps] = terms.get(exps, RatFunc(0)) + c
    return XPoly(n, {e: c for e, c in terms.items() if not c.is_zero()})
