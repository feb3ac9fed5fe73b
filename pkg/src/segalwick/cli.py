"""Command-line interface.

Exit codes: 0 identity holds / success, 1 identity fails, 2 bad input,
3 insufficient moments.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import io
from .algebra import DimensionError, LinearMap, Polynomial, multi_indices, multi_indices_upto, random_linear_map
from .moments import DiscreteMeasure, InsufficientMomentsError
from .segal import segal_polynomial, verify_generating_identity
from .stochastic import (
    WienerGrid,
    builtin_function,
    load_function,
    verify_grid_wick_identity,
    wick_pair_riemann,
)
from .transform import NotPartialTraceError, transition_row, verify_recurrence, verify_transformation
from .wick import RandomVector, verify_robustness, wick_multinomial_check, wick_polynomial

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_MOMENTS = 0, 1, 2, 3
GRID_IDENTITY_MAX_L = 6


class UsageError(ValueError):
    pass


def _load_json(path: str, what: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"{what}: cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what}: {path} is not valid JSON ({exc.msg})") from None


def _parse_index(text: str, what: str) -> tuple[int, ...]:
    try:
        raw = json.loads(text) if text.strip().startswith("[") else [int(v) for v in text.split(",") if v.strip()]
        if isinstance(raw, int):
            raw = [raw]
        idx = tuple(int(v) for v in raw)
    except (ValueError, TypeError):
        raise UsageError(f"{what}: expected comma-separated nonnegative ints, got {text!r}") from None
    if any(v < 0 for v in idx):
        raise UsageError(f"{what}: entries must be nonnegative")
    return idx


def _parse_rationals(text: str, what: str) -> list[Fraction]:
    try:
        raw = json.loads(text) if text.strip().startswith("[") else text.split(",")
        return [Fraction(str(v).strip()) for v in raw]
    except (ValueError, TypeError, ZeroDivisionError):
        raise UsageError(f"{what}: expected comma-separated rationals, got {text!r}") from None


def _emit(args, payload, text: str) -> None:
    if args.format == "json":
        print(io.dumps(payload))
    else:
        print(text)


def _measure(args, required=True):
    if args.measure is None:
        if required:
            raise UsageError("--measure is required")
        return None
    return io.measure_from_json(_load_json(args.measure, "--measure"))


def _map(args, rows: int | None, cols: int, rng: random.Random) -> LinearMap:
    if args.map is not None:
        return io.linear_map_from_json(_load_json(args.map, "--map"))
    return random_linear_map(rng, rows if rows is not None else cols, cols)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_segal(args) -> int:
    mu = _measure(args)
    beta = _parse_index(args.beta, "--beta")
    if len(beta) != mu.dim:
        raise UsageError(f"--beta: expected {mu.dim} entries for this measure, got {len(beta)}")
    p = segal_polynomial(mu, beta)
    _emit(args, io.polynomial_to_json(p), p.pretty())
    return EXIT_OK


def cmd_wick(args) -> int:
    mu = _measure(args)
    p = io.polynomial_from_json(_load_json(args.poly, "--poly"))
    X = RandomVector(mu)
    if args.map is None:
        result = wick_polynomial(X, p).value
        _emit(args, {"value": io.polynomial_to_json(result)}, result.pretty())
        return EXIT_OK
    T = io.linear_map_from_json(_load_json(args.map, "--map"))
    if T.cols != mu.dim or T.rows != p.nvars:
        raise UsageError(f"--map: shape {T.rows}x{T.cols} does not fit a measure on R^{mu.dim} "
                         f"and a polynomial in {p.nvars} variables")
    result = wick_polynomial(X.transformed(T), p).value
    report = verify_robustness(X, T, p)
    _emit(args, {"value": io.polynomial_to_json(result), "robustness": report.to_dict()},
          f"{result.pretty()}\nrobustness: {'holds' if report.holds else 'FAILS'}")
    return EXIT_OK if report.holds else EXIT_FAIL


def cmd_transform(args) -> int:
    T = io.linear_map_from_json(_load_json(args.map, "--map"))
    if args.alpha is not None:
        alphas = [_parse_index(args.alpha, "--alpha")]
        if len(alphas[0]) != T.rows:
            raise UsageError(f"--alpha: expected {T.rows} entries")
    else:
        alphas = list(multi_indices_upto(T.rows, args.order))
    rows = [transition_row(T, a) for a in alphas]
    payload = {
        "map": io.linear_map_to_json(T),
        "rows": [{"alpha": list(r.alpha),
                  "entries": [{"beta": list(b), **io.rational_to_json(v)} for b, v in sorted(r.entries.items())]}
                 for r in rows],
    }
    lines = []
    for r in rows:
        for b, v in sorted(r.entries.items()):
            lines.append((str(list(r.alpha)), str(list(b)), str(v)))
    w = [max([len(h)] + [len(line[k]) for line in lines]) for k, h in enumerate(("alpha", "beta", "A"))]
    text = [f"{'alpha':<{w[0]}}  {'beta':<{w[1]}}  {'A':>{w[2]}}"]
    text += [f"{a:<{w[0]}}  {b:<{w[1]}}  {v:>{w[2]}}" for a, b, v in lines]
    _emit(args, payload, "\n".join(text))
    return EXIT_OK


def _verify_reports(args, rng):
    what = args.what
    if what == "recurrence":
        mu = None
        if args.map is not None:
            T = _map(args, None, 0, rng)
        else:
            T = random_linear_map(rng, args.rows or 2, args.cols or 2)
        if args.alpha is not None:
            if args.beta is None or args.ell is None:
                raise UsageError("--alpha needs --beta and --ell for the recurrence check")
            return [verify_recurrence(T, _parse_index(args.alpha, "--alpha"),
                                      _parse_index(args.beta, "--beta"), args.ell)], T
        reports = []
        for k in range(1, args.order + 1):
            for alpha in multi_indices(T.rows, k):
                for beta in multi_indices(T.cols, k - 1):
                    for ell in range(T.cols):
                        reports.append(verify_recurrence(T, alpha, beta, ell))
        return reports, T

    mu = _measure(args, required=what in ("multinomial", "robustness"))
    if mu is None:
        n = args.cols or 2
        mu = DiscreteMeasure.dirac([0] * n)

    if what == "multinomial":
        X = RandomVector(mu)
        c = _parse_rationals(args.c, "--c") if args.c else [Fraction(1)] * mu.dim
        ks = [args.k] if args.k is not None else range(args.order + 1)
        return [wick_multinomial_check(X, c, k) for k in ks], None

    T = _map(args, args.rows, mu.dim, rng)
    if T.cols != mu.dim:
        raise UsageError(f"--map: {T.cols} columns but the measure lives on R^{mu.dim}")
    if what == "transform":
        if args.alpha is not None:
            alphas = [_parse_index(args.alpha, "--alpha")]
        else:
            alphas = list(multi_indices_upto(T.rows, args.order))
        return [verify_transformation(mu, T, a) for a in alphas], T
    if what == "generating":
        return [verify_generating_identity(mu, T, args.order)], T
    if what == "robustness":
        if args.poly is not None:
            p = io.polynomial_from_json(_load_json(args.poly, "--poly"))
        else:
            p = Polynomial(T.rows, {e: Fraction(rng.randint(-3, 3), rng.choice((1, 2)))
                                    for e in multi_indices_upto(T.rows, min(args.order, 3))})
        if p.nvars != T.rows:
            raise UsageError(f"--poly: {p.nvars} variables but the map has {T.rows} rows")
        return [verify_robustness(RandomVector(mu), T, p)], T
    raise UsageError(f"unknown check {what!r}")


def cmd_verify(args) -> int:
    rng = random.Random(args.seed)
    reports, T = _verify_reports(args, rng)
    holds = all(r.holds for r in reports)
    payload = {"check": args.what, "holds": holds, "seed": args.seed, "count": len(reports),
               "reports": [r.to_dict() for r in reports]}
    if T is not None:
        payload["map"] = io.linear_map_to_json(T)
    failed = [r for r in reports if not r.holds]
    text = f"{args.what}: {'PASS' if holds else 'FAIL'} ({len(reports) - len(failed)}/{len(reports)} checks)"
    if failed:
        exp, lhs, rhs = failed[0].mismatch
        text += f"\nfirst mismatch at {list(exp)}: lhs {lhs}, rhs {rhs} ({failed[0].params})"
    _emit(args, payload, text)
    return EXIT_OK if holds else EXIT_FAIL


def _function(spec: str, b):
    if os.path.exists(spec) or spec.endswith(".csv"):
        return load_function(spec)
    return builtin_function(spec, b)


def cmd_demo_wiener(args) -> int:
    b = Fraction(args.b)
    if b <= 0:
        raise UsageError("--b must be positive")
    if args.l < 1:
        raise UsageError("--l must be at least 1")
    f1, f2 = _function(args.f1, b), _function(args.f2, b)
    grid = WienerGrid(b, args.l)
    res = wick_pair_riemann(grid, f1, f2, args.lref)
    id_l = min(args.l, GRID_IDENTITY_MAX_L)
    identity = verify_grid_wick_identity(WienerGrid(b, id_l), [f1, f2])
    payload = {**res.to_dict(), "identityVerified": identity.holds, "identityL": id_l,
               "f1": f1.name, "f2": f2.name}
    text = "\n".join(f"{k}: {payload[k]}" for k in sorted(payload))
    _emit(args, payload, text)
    return EXIT_OK if identity.holds else EXIT_FAIL


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS,
                        help="output format (default text)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for random maps (default 0)")

    parser = argparse.ArgumentParser(prog="segalwick", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segal", parents=[common], help="print the Segal polynomial p_beta of a measure")
    p.add_argument("--measure", required=True, help="measure JSON file")
    p.add_argument("--beta", required=True, help="multi-index, e.g. 2,1")
    p.set_defaults(func=cmd_segal)

    p = sub.add_parser("wick", parents=[common], help="Wick-order a polynomial of a random vector")
    p.add_argument("--measure", required=True, help="law of the base vector X (JSON)")
    p.add_argument("--poly", required=True, help="polynomial JSON")
    p.add_argument("--map", help="optional linear map T; the polynomial is then in Y = T X")
    p.set_defaults(func=cmd_wick)

    p = sub.add_parser("transform", parents=[common], help="print transition coefficients A_{alpha,beta}")
    p.add_argument("--map", required=True, help="linear map JSON")
    p.add_argument("--alpha", help="single multi-index; default all |alpha| <= --order")
    p.add_argument("--order", type=int, default=3)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", parents=[common], help="check an exact identity; exit 0 iff it holds")
    p.add_argument("what", choices=("transform", "recurrence", "multinomial", "robustness", "generating"))
    p.add_argument("--measure", help="measure JSON (default: Dirac at 0 where allowed)")
    p.add_argument("--map", help="linear map JSON (default: random rational map from --seed)")
    p.add_argument("--poly", help="polynomial JSON for robustness (default: random from --seed)")
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--ell", type=int, help="column index (0-based) for the recurrence")
    p.add_argument("--c", help="weights for the multinomial check")
    p.add_argument("--k", type=int, help="single order for the multinomial check")
    p.add_argument("--order", type=int, default=3, help="maximal order swept (default 3)")
    p.add_argument("--rows", type=int, help="rows of a random map")
    p.add_argument("--cols", type=int, help="columns of a random map when no measure is given")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo-wiener", parents=[common], help="Riemann-sum covariance and grid Wick identity")
    p.add_argument("--b", default="1", help="support bound (rational)")
    p.add_argument("--l", type=int, default=8, help="grid count")
    p.add_argument("--f1", default="one", help="one, tent, hat, zero or a CSV file")
    p.add_argument("--f2", default="one")
    p.add_argument("--lref", type=int, help="reference resolution (default max(64 l, 4096))")
    p.set_defaults(func=cmd_demo_wiener)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "format"):
        args.format = "text"
    if not hasattr(args, "seed"):
        args.seed = 0
    try:
        return args.func(args)
    except InsufficientMomentsError as exc:
        print(f"error: insufficient moments: {exc}", file=sys.stderr)
        return EXIT_MOMENTS
    except (UsageError, io.FormatError, DimensionError, NotPartialTraceError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
