"""Command-line front end.

    apgroups census --p 7 --d 6 --r 2
    apgroups weil --p 101 --d 20 --r 2
    apgroups gt-params --r 2
    apgroups --manifest runs.json

Exit status: 0 success, 1 usage or domain error, 2 a verified inequality failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Callable

import numpy as np

from . import ap_census, characters, construction, pseudorandom
from .emit import RunManifest, append_log, to_csv, to_json
from .errors import DomainError, NumericDriftError, ResourceError
from .field_core import build_context, primes_between, subgroup

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


class Outcome:
    """What a subcommand hands back: payload, verdict, optional CSV header."""

    def __init__(self, result: Any, ok: bool = True, header: tuple[str, ...] | None = None):
        self.result = result
        self.ok = ok
        self.header = header


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise DomainError(f"{args.command} needs {', '.join(missing)}")


def _prime_list(args) -> list[int]:
    if args.p is not None:
        return [args.p]
    _need(args, "pmin", "pmax")
    return primes_between(args.pmin, args.pmax)


def cmd_census(args) -> Outcome:
    window = ap_census.parse_window(args.window)
    method = {
        "normalized": ap_census.count_normalized,
        "characters": ap_census.count_via_characters,
    }
    if args.p is not None and args.d is not None:
        G = subgroup(build_context(args.p), args.d)
        if args.method == "brute":
            total = ap_census.count_brute(G, args.r)
            res = ap_census.CensusResult(args.p, args.d, args.r, total // args.d + 1, total // args.d, total)
        else:
            res = method[args.method](G, args.r)
        report = ap_census.proposition2_check(G, args.r, res)
        out = res.to_dict()
        out["prop2_pass"] = report.passed
        return Outcome(out, report.passed, ap_census.CENSUS_CSV_HEADER)
    rows = ap_census.census_sweep(_prime_list(args), args.r, window, threads=args.threads)
    ok = all(ap_census.proposition2_check(None, r.r, r).passed for r in rows) if rows else True
    return Outcome(rows, ok, ap_census.CENSUS_CSV_HEADER)


def cmd_weil(args) -> Outcome:
    _need(args, "p", "d")
    G = subgroup(build_context(args.p), args.d)
    rep = characters.verify_weil(G, args.r, cap=args.cap, seed=args.seed)
    return Outcome(rep, rep.passed)


def cmd_linforms(args) -> Outcome:
    _need(args, "p", "d")
    G = subgroup(build_context(args.p), args.d)
    rng = np.random.default_rng(args.seed)
    system = pseudorandom.random_system(args.m, args.t, rng, L_bound=args.lbound, p=args.p)
    if args.r is not None:
        system.check_against(args.r)
    res = pseudorandom.linear_forms_expectation(G, system, mode=args.mode, samples=args.samples, seed=args.seed)
    bound = pseudorandom.linear_forms_bound(args.p, args.d, system.m)
    ok = res.deviation <= bound + 4 * res.std_error
    out = {
        "p": args.p,
        "d": args.d,
        "m": system.m,
        "t": system.t,
        "L": [list(row) for row in system.L],
        "b": list(system.b),
        "mode": res.mode,
        "value": res.value,
        "std_error": res.std_error,
        "deviation": res.deviation,
        "bound": bound,
        "pass": ok,
    }
    return Outcome(out, ok)


def cmd_corr(args) -> Outcome:
    _need(args, "p", "d", "shifts")
    G = subgroup(build_context(args.p), args.d)
    shifts = [int(h) for h in args.shifts.split(",") if h.strip()]
    res = pseudorandom.correlation_expectation(G, shifts)
    out = {
        "p": args.p,
        "d": args.d,
        "shifts": shifts,
        "value": res.value,
        "coincidence_profile": list(res.coincidence_profile),
        "distinct_shifts": res.distinct_shifts,
    }
    return Outcome(out)


def cmd_subset_exp(args) -> Outcome:
    _need(args, "p", "d")
    G = subgroup(build_context(args.p), args.d)
    stats = pseudorandom.subset_ap_experiment(
        G, args.delta, args.r, strategy=args.strategy, trials=args.trials, seed=args.seed
    )
    return Outcome(stats)


def cmd_ord_scan(args) -> Outcome:
    _need(args, "p")
    res = construction.min_ord_scan(build_context(args.p), args.r)
    return Outcome(res)


def cmd_prime_density(args) -> Outcome:
    _need(args, "tmax")
    return Outcome(construction.prime_density(args.tmax, args.eta))


def cmd_construct(args) -> Outcome:
    cfg = construction.ConstructionConfig(r=args.r, u=args.u, r0=args.r0)
    cert = construction.bad_prime_certificate(cfg, prime_budget=args.prime_budget)
    ok = cert.all_nonzero and (cfg.r < 2 or cert.max_height <= cert.height_bound)
    return Outcome(cert, ok)


def cmd_mult_indep(args) -> Outcome:
    res = construction.mult_independent_subset(args.z, args.r)
    out = {
        "z": res.z,
        "r": res.r,
        "subset": list(res.subset),
        "values": list(res.values),
        "rank": res.rank,
        "excluded": list(res.excluded),
    }
    return Outcome(out)


def cmd_apfree_search(args) -> Outcome:
    window = ap_census.parse_window(args.window)
    rows = construction.apfree_search(_prime_list(args), args.r, window, threads=args.threads)
    return Outcome(rows, True, construction.APFREE_CSV_HEADER)


def cmd_gt_params(args) -> Outcome:
    return Outcome(pseudorandom.gt_parameters(args.r))


COMMANDS: dict[str, Callable[[argparse.Namespace], Outcome]] = {
    "census": cmd_census,
    "weil": cmd_weil,
    "linforms": cmd_linforms,
    "corr": cmd_corr,
    "subset-exp": cmd_subset_exp,
    "ord-scan": cmd_ord_scan,
    "prime-density": cmd_prime_density,
    "construct": cmd_construct,
    "mult-indep": cmd_mult_indep,
    "apfree-search": cmd_apfree_search,
    "gt-params": cmd_gt_params,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--log", metavar="PATH")

    parser = _Parser(prog="apgroups", description="Progressions in multiplicative subgroups of F_p.")
    parser.add_argument("--manifest", metavar="PATH", help="JSON list of parameter maps, each with a 'command' key")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("census", "count progressions in subgroups")
    p.add_argument("--p", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--pmin", type=int)
    p.add_argument("--pmax", type=int)
    p.add_argument("--window", metavar="EXPR")
    p.add_argument("--method", choices=("normalized", "brute", "characters"), default="normalized")

    p = add("weil", "check character sums against |I| sqrt(p)")
    p.add_argument("--p", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--cap", type=int, default=10_000)

    p = add("linforms", "linear-forms average of nu for a random system")
    p.add_argument("--p", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--lbound", type=int, default=3)
    p.add_argument("--mode", choices=("exhaustive", "montecarlo"), default="exhaustive")
    p.add_argument("--samples", type=int, default=100_000)

    p = add("corr", "correlation average of nu over shifts")
    p.add_argument("--p", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--shifts", metavar="H1,H2,...")

    p = add("subset-exp", "progressions inside dense subsets of G")
    p.add_argument("--p", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--strategy", choices=pseudorandom.STRATEGIES, default="uniform")
    p.add_argument("--trials", type=int, default=100)

    p = add("ord-scan", "smallest order of <1+t, ..., 1+rt>")
    p.add_argument("--p", type=int)
    p.add_argument("--r", type=int, default=2)

    p = add("prime-density", "primes p <= T with a prime divisor of p-1 in a window")
    p.add_argument("--tmax", type=int)
    p.add_argument("--eta", type=float, default=0.2)

    p = add("construct", "relation polynomials and their resultant certificate")
    p.add_argument("--r", type=int, default=4)
    p.add_argument("--r0", type=int)
    p.add_argument("--u", type=int, default=2)
    p.add_argument("--prime-budget", type=int, default=10_000)

    p = add("mult-indep", "multiplicatively independent subset of {1 + s z}")
    p.add_argument("--z", default="1")
    p.add_argument("--r", type=int, default=5)

    p = add("apfree-search", "largest AP-free subgroup per prime")
    p.add_argument("--p", type=int)
    p.add_argument("--pmin", type=int)
    p.add_argument("--pmax", type=int)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--window", metavar="EXPR")

    p = add("gt-params", "kappa, m0 and the subgroup exponent for r")
    p.add_argument("--r", type=int, default=2)
    return parser


def _render(outcome: Outcome, fmt: str) -> str:
    res = outcome.result
    if fmt == "csv":
        if outcome.header is None:
            raise DomainError("csv output is only available for tabular results")
        rows = res if isinstance(res, list) else [res]
        return to_csv(rows, outcome.header).rstrip("\n")
    if isinstance(res, list):
        return "\n".join(to_json(row) for row in res)
    return to_json(res)


def _params(args) -> dict:
    skip = {"command", "manifest", "log", "format", "threads", "seed"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def run_one(args, out=None) -> int:
    if not args.command:
        raise UsageError("a subcommand is required")
    outcome = COMMANDS[args.command](args)
    print(_render(outcome, args.format), file=out or sys.stdout)
    if args.log:
        manifest = RunManifest.create(args.command, _params(args), args.seed)
        try:
            append_log(args.log, manifest, outcome.result)
        except OSError as exc:
            raise DomainError(f"cannot write log {args.log}: {exc}") from exc
    return EXIT_OK if outcome.ok else EXIT_VERIFY


def _manifest_argv(entry: dict) -> list[str]:
    entry = dict(entry)
    command = entry.pop("command", None)
    if not command:
        raise UsageError("every manifest entry needs a 'command'")
    argv = [command]
    for key, val in entry.items():
        argv += [f"--{key.replace('_', '-')}", str(val)]
    return argv


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.manifest:
            with open(args.manifest, encoding="utf-8") as fh:
                entries = json.load(fh)
            if not isinstance(entries, list):
                raise UsageError("manifest must be a JSON list")
            status = EXIT_OK
            for entry in entries:
                sub = parser.parse_args(_manifest_argv(entry))
                status = max(status, run_one(sub))
            return status
        return run_one(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ResourceError, NumericDriftError, OSError, ValueError) as exc:
        print(f"apgroups: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        # a broken invariant inside a computation (e.g. a zero resultant)
        print(f"apgroups: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
