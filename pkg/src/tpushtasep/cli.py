"""Command-line interface: exact computation, verification suites, simulation.

Subcommands:

  stationary    exact stationary distribution (oracle, diagrams, or both)
  verify        run a named identity suite; nonzero exit on any failure
  observables   densities and currents, formula and oracle
  simulate      seeded Monte Carlo run with exact comparisons

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource
bound exceeded.  Flags may also be supplied through a JSON file via
--config; explicit flags win.  Every output document embeds the resolved
configuration and the library version.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .chain import (
    Content,
    StateSpaceLimitError,
    SystemParams,
    averaged_kernel_check,
    interval_merge_maps,
    projection_check,
    stationary_oracle,
)
from .diagrams import (
    asep_family,
    bottom_rows_check,
    denominator_check,
    extra_row_check,
    stationary_from_diagrams,
)
from .hecke import pair_symmetry_check, verify_kz_family
from .montecarlo import run as mc_run
from .observables import (
    CurrentSpec,
    current_oracle,
    current_single_species,
    density,
    elementary_identity_check,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


class UsageError(ValueError):
    pass


def _parse_fraction_list(text):
    return tuple(Fraction(v.strip()) for v in text.split(","))


def _parse_int_list(text):
    return tuple(int(v.strip()) for v in text.split(","))


def resolve_content(args) -> Content:
    if getattr(args, "content", None):
        return Content(_parse_int_list(args.content))
    if getattr(args, "lam", None):
        return Content.from_word(_parse_int_list(args.lam))
    raise UsageError("provide --content m0,m1,...,ms or --lambda l1,...,ln")


def resolve_params(args, content: Content) -> SystemParams:
    if not getattr(args, "x", None):
        raise UsageError("provide --x p/q,p/q,...")
    xs = _parse_fraction_list(args.x)
    if len(xs) != content.n:
        raise UsageError(f"expected {content.n} rate parameters, got {len(xs)}")
    t = Fraction(args.t) if getattr(args, "t", None) else Fraction(0)
    return SystemParams(xs, t)


def _merge_config_file(args):
    if not getattr(args, "config", None):
        return
    with open(args.config) as fh:
        stored = json.load(fh)
    for key, value in stored.items():
        attr = "lam" if key == "lambda" else key.replace("-", "_")
        if getattr(args, attr, None) in (None, False):
            setattr(args, attr, value)


def _resolved_config(args, keys):
    out = {}
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            out["lambda" if key == "lam" else key] = value
    return out


def _emit(document, args):
    if getattr(args, "fmt", "json") == "csv" and "csv" in document:
        header = "".join(
            f"# {key} = {json.dumps(value, sort_keys=True)}\n"
            for key, value in document.items()
            if key != "csv"
        )
        text = header + document["csv"]
    else:
        document = {k: v for k, v in document.items() if k != "csv"}
        text = json.dumps(document, sort_keys=True, indent=2) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands -------------------------------------------------------------


def cmd_stationary(args) -> int:
    content = resolve_content(args)
    params = resolve_params(args, content)
    content.require_vacancy()
    document = {
        "version": __version__,
        "command": "stationary",
        "config": _resolved_config(
            args, ["content", "lam", "x", "t", "method", "max_states"]
        ),
    }
    results = {}
    if args.method in ("oracle", "both"):
        results["oracle"] = stationary_oracle(content, params, max_states=args.max_states)
    if args.method in ("diagrams", "both"):
        results["diagrams"] = stationary_from_diagrams(content, params)
    exit_code = EXIT_OK
    if args.method == "both":
        equal = results["oracle"].probabilities == results["diagrams"].probabilities
        document["verdict"] = "EQUAL" if equal else "UNEQUAL"
        if not equal:
            exit_code = EXIT_VERIFY_FAILED
    primary = results.get("oracle") or results["diagrams"]
    document["stationary"] = primary.to_json_dict()
    document["csv"] = primary.to_csv()
    _emit(document, args)
    return exit_code


def _seeded_params(content: Content, seed: int, t=Fraction(1, 3)) -> SystemParams:
    rng = random.Random(f"{seed}:{content.multiplicities}")
    xs = tuple(
        Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(content.n)
    )
    return SystemParams(xs, t)


def all_contents(n: int):
    """Every multiplicity pattern (m_0,...,m_s), all positive, with m_0 >= 1.

    Patterns with an absent intermediate species behave as recolourings of a
    standardised pattern, so the positive patterns cover all distinct
    dynamics of a given size.
    """
    out = []

    def rec(remaining, acc):
        if remaining == 0:
            if acc:
                out.append(Content(tuple(acc)))
            return
        for part in range(1, remaining + 1):
            rec(remaining - part, acc + [part])

    rec(n, [])
    return out


def _suite_qkz(args):
    instances = []
    for n in range(1, args.max_n + 1):
        for content in all_contents(n):
            family = asep_family(content)
            report = verify_kz_family(family, content)
            sym_failures = pair_symmetry_check(family, content)
            instances.append(
                {
                    "instance": f"kz content={content.multiplicities}",
                    "pass": report.passed and not sym_failures,
                }
            )
    return instances


def _suite_lemma72(args):
    instances = []
    for n in range(2, args.max_n + 1):
        for m0 in range(1, n):
            for h in range(m0):
                instances.append(
                    {
                        "instance": f"e-identity n={n} m0={m0} h={h}",
                        "pass": elementary_identity_check(n, m0, h),
                    }
                )
    return instances


def _suite_symmetry(args):
    from .observables import symmetry_check

    instances = []
    for n in range(2, args.max_n + 1):
        for content in all_contents(n):
            params = _seeded_params(content, args.seed)
            for k in range(1, n):
                report = symmetry_check(content, params, k)
                instances.append(
                    {
                        "instance": f"symmetry content={content.multiplicities} k={k}",
                        "pass": all(ok for _, ok in report),
                    }
                )
    return instances


def _suite_projection(args):
    instances = []
    for n in range(2, args.max_n + 1):
        for content in all_contents(n):
            params = _seeded_params(content, args.seed)
            for phi in interval_merge_maps(content):
                instances.append(
                    {
                        "instance": (
                            f"projection content={content.multiplicities} "
                            f"map={sorted(phi.mapping.items())}"
                        ),
                        "pass": projection_check(content, phi, params),
                    }
                )
    return instances


def _iter_bottom_row_contents(max_n, max_s):
    """Distinct-part contents with no part 1, n <= max_n, largest part <= max_s."""
    for n in range(2, max_n + 1):
        for m0 in range(1, n):
            parts_needed = n - m0
            pool = list(range(2, max_s + 1))
            from itertools import combinations

            for chosen in combinations(pool, parts_needed):
                multi = [0] * (max(chosen) + 1)
                multi[0] = m0
                for v in chosen:
                    multi[v] = 1
                yield Content(tuple(multi))


def _suite_bottom_rows(args):
    instances = []
    if getattr(args, "lam", None) or getattr(args, "content", None):
        contents = [resolve_content(args)]
    else:
        contents = list(_iter_bottom_row_contents(args.max_n, 4))
    for content in contents:
        instances.append(
            {
                "instance": f"row-marginals content={content.multiplicities}",
                "pass": bottom_rows_check(content),
            }
        )
        if content.multiplicities[0] == 1:
            instances.append(
                {
                    "instance": f"row-transition content={content.multiplicities}",
                    "pass": extra_row_check(content),
                }
            )
        params = _seeded_params(content, args.seed)
        instances.append(
            {
                "instance": f"kernel-fixed-point content={content.multiplicities}",
                "pass": averaged_kernel_check(content, params),
            }
        )
    return instances


def _suite_denominator(args):
    instances = []
    for n in range(1, args.max_n + 1):
        for content in all_contents(n):
            instances.append(
                {
                    "instance": f"denominator content={content.multiplicities}",
                    "pass": denominator_check(content),
                }
            )
    return instances


SUITES = {
    "qkz": (_suite_qkz, 4),
    "lemma72": (_suite_lemma72, 8),
    "symmetry": (_suite_symmetry, 4),
    "projection": (_suite_projection, 4),
    "bottom-rows": (_suite_bottom_rows, 4),
    "denominator": (_suite_denominator, 4),
}


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)}")
    runner, default_n = SUITES[args.suite]
    if args.max_n is None:
        args.max_n = default_n
    instances = runner(args)
    failed = [inst for inst in instances if not inst["pass"]]
    document = {
        "version": __version__,
        "command": "verify",
        "config": _resolved_config(args, ["suite", "max_n", "seed", "content", "lam"]),
        "instances": instances,
        "total": len(instances),
        "failed": len(failed),
    }
    _emit(document, args)
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def cmd_observables(args) -> int:
    content = resolve_content(args)
    params = resolve_params(args, content)
    content.require_vacancy()
    document = {
        "version": __version__,
        "command": "observables",
        "config": _resolved_config(args, ["content", "lam", "x", "t", "which", "species"]),
    }
    exit_code = EXIT_OK
    if args.which == "density":
        values = {}
        for r in range(1, content.s + 1):
            values[str(r)] = str(density(content, r, params))
        document["density"] = values
    elif args.which == "current":
        if content.s != 1:
            raise UsageError("closed-form current requires a single species")
        m0, m1 = content.multiplicities[0], content.multiplicities[1]
        formula = current_single_species(m0, m1, params)
        oracle = current_oracle(content, CurrentSpec(1), params)
        document["current"] = {
            "formula": str(formula),
            "oracle": str(oracle),
            "agree": formula == oracle,
        }
        if formula != oracle:
            exit_code = EXIT_VERIFY_FAILED
    elif args.which == "current-oracle":
        species = args.species or 1
        if not 1 <= species <= content.s:
            raise UsageError(f"species {species} out of range 1..{content.s}")
        value = current_oracle(content, CurrentSpec(species), params)
        document["current_oracle"] = {"species": species, "value": str(value)}
    else:
        raise UsageError(f"unknown observable {args.which!r}")
    _emit(document, args)
    return exit_code


def cmd_simulate(args) -> int:
    content = resolve_content(args)
    params = resolve_params(args, content)
    if args.events is not None and args.time is not None:
        raise UsageError("give either --events or --time, not both")
    if args.events is not None:
        horizon = ("events", args.events)
    elif args.time is not None:
        horizon = ("time", args.time)
    else:
        raise UsageError("give a horizon: --events N or --time T")
    report = mc_run(content, params, horizon, args.seed)
    document = {
        "version": __version__,
        "command": "simulate",
        "config": _resolved_config(
            args, ["content", "lam", "x", "t", "seed", "events", "time"]
        ),
        "report": report.to_json_dict(),
    }
    _emit(document, args)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tpushtasep",
        description="Exact and simulated stationary structure of the "
        "inhomogeneous multispecies t-PushTASEP on a ring.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--content", help="multiplicities m0,m1,...,ms")
        p.add_argument("--lambda", dest="lam", help="content word l1,...,ln")
        p.add_argument("--x", help="rate parameters p/q,p/q,...")
        p.add_argument("--t", help="deformation parameter p/q")
        p.add_argument("--config", help="JSON file of defaults; flags override")
        p.add_argument("--format", dest="fmt", choices=["csv", "json"], default="json")
        p.add_argument("--out", help="output path (default: stdout)")

    p = sub.add_parser("stationary", help="exact stationary distribution")
    common(p)
    p.add_argument("--method", choices=["oracle", "diagrams", "both"], default="both")
    p.add_argument("--max-states", dest="max_states", type=int, default=20000)
    p.set_defaults(handler=cmd_stationary)

    p = sub.add_parser("verify", help="run an identity suite")
    p.add_argument("suite", choices=sorted(SUITES))
    common(p)
    p.add_argument("--max-n", dest="max_n", type=int, default=None)
    p.add_argument("--seed", type=int, default=20240531)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("observables", help="densities and currents")
    common(p)
    p.add_argument("--which", choices=["density", "current", "current-oracle"],
                   required=True)
    p.add_argument("--species", type=int)
    p.set_defaults(handler=cmd_observables)

    p = sub.add_parser("simulate", help="seeded Monte Carlo run")
    common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--events", type=int)
    p.add_argument("--time", type=float)
    p.set_defaults(handler=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config_file(args)
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StateSpaceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
