"""Command-line front end.

Subcommands: ``eval`` (density / CDF / atoms on a grid), ``moments``,
``simulate`` (Monte Carlo summary) and ``verify`` (check suites).
Exit codes: 0 success, 1 a check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from .laws import LawSelector, resolve
from .paths import ProcessParams

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
_DIRECTIONS = {"plus": 1, "minus": -1}


class UsageError(Exception):
    pass


# --- argument helpers ----------------------------------------------------------

def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def parse_grid(text: str) -> np.ndarray:
    """``a:b:n`` -> n equally spaced points from a to b inclusive."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must look like a:b:n, got {text!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"grid must look like a:b:n, got {text!r}")
    if n < 1 or not (math.isfinite(a) and math.isfinite(b)) or b < a:
        raise UsageError(f"grid needs finite a <= b and n >= 1, got {text!r}")
    return np.linspace(a, b, n)


def _add_regime(p: argparse.ArgumentParser, quantity_default: str = "max"):
    p.add_argument("--quantity", choices=("position", "max"), default=quantity_default)
    p.add_argument("--v0", choices=tuple(_DIRECTIONS), default=None,
                   help="initial direction; required for the maximum")
    p.add_argument("--parity", choices=("even", "odd"), default=None)


def _add_params(p: argparse.ArgumentParser):
    p.add_argument("--lambda", dest="lam", type=float, default=1.0, help="reversal rate")
    p.add_argument("--c", type=float, default=1.0, help="speed")
    p.add_argument("--t", type=float, default=1.0, help="horizon")


def _selector(args, n=None) -> LawSelector:
    v0 = _DIRECTIONS.get(args.v0) if args.v0 else None
    try:
        return LawSelector(args.quantity, v0=v0, n=n, parity=args.parity)
    except ValueError as e:
        raise UsageError(str(e))


def _params(args) -> ProcessParams:
    try:
        params = ProcessParams(args.lam, args.c)
    except ValueError as e:
        raise UsageError(str(e))
    if not (math.isfinite(args.t) and args.t > 0):
        raise UsageError("--t must be finite and > 0")
    return params


def _echo(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


def _check_finite(values):
    for v in values:
        if isinstance(v, float) and not math.isfinite(v):
            raise ArithmeticError(f"non-finite value {v!r} in output")


def _emit_json(payload: dict, out):
    json.dump(payload, out, indent=2, allow_nan=False)
    out.write("\n")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _emit_csv(header, rows, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])


# --- commands ------------------------------------------------------------------

def cmd_eval(args, out) -> int:
    sel = _selector(args, args.n)
    params = _params(args)
    law = resolve(sel, params, args.t)
    var = "beta" if sel.quantity == "max" else "x"

    if args.grid is not None:
        points = parse_grid(args.grid)
    elif args.point is not None:
        points = np.array([args.point])
    else:
        points = None

    if points is not None and law.is_atomic:
        locs = ", ".join(f"{a.location:g} (mass {a.mass:g})" for a in law.atoms)
        raise UsageError(f"the law of {sel.quantity} for {sel.describe()} is purely atomic "
                         f"(atoms at {locs}); it has no density. Omit --grid/--beta/--x to list atoms.")

    rows = []
    if points is not None:
        dens = np.atleast_1d(np.asarray(law.density(points), dtype=float))
        cdf = np.atleast_1d(np.asarray(law.cdf(points), dtype=float))
        rows = [(float(p), float(d), float(f)) for p, d, f in zip(points, dens, cdf)]
    atoms = [(float(a.location), float(a.mass)) for a in law.atoms]
    _check_finite([v for r in rows for v in r] + [v for a in atoms for v in a])

    if args.format == "json":
        _emit_json({"schema_version": SCHEMA_VERSION, "command": "eval", "params": _echo(args),
                    "rows": [{var: p, "density": d, "cdf": f} for p, d, f in rows],
                    "atoms": [{"location": x, "mass": m} for x, m in atoms]}, out)
    else:
        table = [(p, d, f, None, None) for p, d, f in rows] + [(None, None, None, x, m) for x, m in atoms]
        _emit_csv([var, "density", "cdf", "atom_loc", "atom_mass"], table, out)
    return EXIT_OK


def cmd_moments(args, out) -> int:
    params = _params(args)
    ns = args.n if args.n is not None else [None]
    rows = []
    for n in ns:
        sel = _selector(args, n)
        law = resolve(sel, params, args.t)
        method = "closed_form" if law.closed_form_moments else "quadrature"
        for m in args.m:
            if m < 1:
                raise UsageError("moment orders must be >= 1")
            rows.append((n, m, float(law.moment(m)), method))
    _check_finite([r[2] for r in rows])
    if args.format == "json":
        _emit_json({"schema_version": SCHEMA_VERSION, "command": "moments", "params": _echo(args),
                    "rows": [{"n": n, "m": m, "moment": v, "method": meth} for n, m, v, meth in rows]}, out)
    else:
        _emit_csv(["n", "m", "moment", "method"], rows, out)
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    from .verification.montecarlo import mc_verify

    sel = _selector(args, args.n)
    params = _params(args)
    if args.samples < 1000:
        raise UsageError("--samples must be at least 1000")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    s = mc_verify(sel, params, args.t, args.samples, args.seed, workers=args.workers, alpha=args.alpha)
    if args.format == "json":
        d = s.to_dict()
        if not math.isfinite(d["ks_critical"]):
            d["ks_critical"] = None
        _emit_json({"schema_version": SCHEMA_VERSION, "command": "simulate", "params": _echo(args),
                    "summary": d}, out)
    else:
        rows = [("ks", "", s.ks_statistic, s.ks_critical, "")]
        rows += [("atom", a.location, a.empirical, a.expected, a.z) for a in s.atom_freqs]
        rows += [("moment", m.order, m.empirical, m.expected, m.std_error) for m in s.moments]
        _emit_csv(["kind", "key", "empirical", "expected", "score"], rows, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from .verification import checks

    params = _params(args)
    names = checks.SUITES if args.suite == "all" else (args.suite,)
    results = []
    for name in names:
        kw = {}
        if name == "recurrence" and (args.n is not None or args.beta is not None):
            n = args.n if args.n is not None else 3
            beta = args.beta if args.beta is not None else 0.5 * args.c * args.t
            if n < 2 or not 0 < beta < args.c * args.t:
                raise UsageError("recurrence needs --n >= 2 and 0 < --beta < c t")
            kw = dict(ns=(n,), fractions=(beta / (args.c * args.t),), c=args.c, t=args.t)
        elif name == "mc":
            kw = dict(n_samples=args.samples, seed=args.seed, workers=args.workers,
                      params=params, t=args.t)
        elif name == "order_stats":
            kw = dict(n_samples=min(args.samples, 100_000), seed=args.seed)
        results += [(name, r) for r in checks.run_suite(name, **kw)]
    ok = all(r.passed for _, r in results)
    if args.format == "json":
        _emit_json({"schema_version": SCHEMA_VERSION, "command": "verify", "params": _echo(args),
                    "passed": ok,
                    "rows": [{"suite": s, "check": r.name, "observed": r.observed,
                              "tolerance": r.tolerance, "passed": r.passed} for s, r in results]}, out)
    else:
        for s, r in results:
            out.write(f"{s:>13} {r.line()}\n")
        n_fail = sum(not r.passed for _, r in results)
        out.write(f"{len(results) - n_fail}/{len(results)} checks passed\n")
    return EXIT_OK if ok else EXIT_FAIL


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="telegraph-max",
                                     description="Laws of the running maximum of the telegraph process.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="density, strict CDF P{X < x} and atoms")
    _add_regime(p)
    p.add_argument("--n", type=int, default=None, help="exact number of reversals (omit: unconditional)")
    _add_params(p)
    where = p.add_mutually_exclusive_group()
    where.add_argument("--grid", default=None, help="a:b:n, n points from a to b inclusive")
    where.add_argument("--beta", "--x", dest="point", type=float, default=None, help="single point")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("moments", help="moments E[X^m]")
    _add_regime(p)
    p.add_argument("--n", type=_int_list, default=None, help="comma-separated counts (omit: unconditional)")
    p.add_argument("--m", type=_int_list, default=[1], help="comma-separated orders")
    _add_params(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("simulate", help="Monte Carlo summary against the exact law")
    _add_regime(p)
    p.add_argument("--n", type=int, default=None)
    _add_params(p)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=("all",) + _suite_names(), required=True)
    p.add_argument("--n", type=int, default=None, help="count for the recurrence suite")
    p.add_argument("--beta", type=float, default=None, help="level for the recurrence suite")
    _add_params(p)
    p.add_argument("--samples", type=int, default=1_000_000, help="paths per Monte Carlo regime")
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)
    return parser


def _suite_names() -> tuple:
    from .verification.checks import SUITES
    return SUITES


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, out)
    except UsageError as e:
        print(f"telegraph-max: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"telegraph-max: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
