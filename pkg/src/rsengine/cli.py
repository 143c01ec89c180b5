"""Command-line entry point: ``rsengine {coeffs,verify,sw,siegel-trend}``.

Exit codes: 0 success, 1 verification failure, 2 usage or validation error,
3 insufficient data.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from pathlib import Path

from . import arith
from .automorphic import AutomorphicRep, analytic_conductor, delta, gl1, read_satake_file, trivial
from .characters import DirichletCharacter, character, characters_mod
from .errors import DomainError, EngineError, InsufficientDataError
from .prime_counting import sw_experiment
from .rankin_selberg import RSPair, euler_product, log_conductor_Q, rs_stream, twisted_pair
from .verify import SUITES, VerifyConfig, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --- parsing helpers ----------------------------------------------------


def parse_character(text: str) -> DirichletCharacter:
    """``q:index`` into the sorted list of characters mod q."""
    try:
        q, idx = (int(v) for v in text.split(":"))
    except ValueError as exc:
        raise DomainError(f"bad character {text!r}; expected q:index") from exc
    if q < 1:
        raise DomainError(f"bad character {text!r}: modulus must be positive")
    return character(q, idx)


def parse_object(token: str, limit: int) -> AutomorphicRep:
    """``trivial``, ``delta``, ``chi:<q>:<index>`` or a Satake table file."""
    token = token.strip()
    if token == "trivial":
        return trivial()
    if token == "delta":
        return delta(max(limit, 2))
    if token.startswith("chi:"):
        return gl1(parse_character(token[4:]))
    path = Path(token)
    if path.is_file():
        return read_satake_file(path)
    raise DomainError(f"unknown object {token!r}; use trivial, delta, chi:<q>:<index> or a file path")


def parse_pair(text: str, limit: int) -> tuple[AutomorphicRep, AutomorphicRep]:
    parts = text.split(",")
    if len(parts) != 2:
        raise DomainError(f"--pair needs two comma-separated objects, got {text!r}")
    return parse_object(parts[0], limit), parse_object(parts[1], limit)


def parse_float_list(text: str) -> list[float]:
    if not text.strip():
        return []
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise DomainError(f"bad number list {text!r}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fmt(v: float) -> str:
    return repr(float(v))


# --- commands -----------------------------------------------------------


def cmd_coeffs(args) -> int:
    if args.limit < 1:
        raise DomainError("--limit must be >= 1")
    left, right = parse_pair(args.pair, args.limit)
    pair = RSPair(left, right)
    chi = parse_character(args.twist_chi) if args.twist_chi else None
    if chi is not None or args.twist_t:
        pair = twisted_pair(pair, chi.primitive() if chi else None, args.twist_t)
    stream = rs_stream(pair, args.limit)
    if args.format == "json":
        rows = [[n, float(stream.lam[n].real), float(stream.lam[n].imag),
                 float(stream.biglam[n].real), float(stream.biglam[n].imag)] for n in range(1, args.limit + 1)]
        _emit(json.dumps({"pair": stream.label, "columns": ["n", "re_lambda", "im_lambda", "re_Lambda", "im_Lambda"],
                          "rows": rows}) + "\n", args.out)
    else:
        buf = io.StringIO()
        stream.to_csv(buf)
        _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    only = [s.strip() for s in args.only.split(",")] if args.only else None
    for name in only or []:
        if name not in SUITES:
            raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if args.limit < 10:
        raise DomainError("--limit must be >= 10")
    left, right = parse_pair(args.pair, args.limit)
    chi = parse_character(args.twist_chi or "5:1")
    cfg = VerifyConfig(left, right, chi, args.limit, args.tol)
    results = run_suites(cfg, only)
    report = {
        "pair": f"{left.name} x {right.name}",
        "chi": chi.label(),
        "limit": args.limit,
        "passed": all(r.passed for r in results),
        "checks": [r.as_dict() for r in results],
    }
    _emit(json.dumps(report, indent=2, default=float) + "\n", args.out)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_sw(args) -> int:
    if args.q < 1:
        raise DomainError("--q must be >= 1")
    xs = parse_float_list(args.x)
    if not xs or any(x < 2 for x in xs):
        raise DomainError("--x needs a list of values >= 2")
    left, right = parse_pair(args.pair, int(max(xs)))
    pair = RSPair(left, right)
    if args.twist_chi or args.twist_t:
        chi = parse_character(args.twist_chi) if args.twist_chi else None
        pair = twisted_pair(pair, chi.primitive() if chi else None, args.twist_t)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        exp = sw_experiment(pair, xs, args.q, args.A)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.format == "json":
        _emit(exp.to_json() + "\n", args.out)
    else:
        _emit(exp.to_csv(), args.out)
        summary = json.dumps(exp.summary(), indent=2) + "\n"
        if args.summary:
            Path(args.summary).write_text(summary)
        elif args.out:
            Path(args.out).with_suffix(".json").write_text(summary)
        else:
            sys.stderr.write(summary)
    return EXIT_OK


def quadratic_characters(conductor: int) -> list[DirichletCharacter]:
    """Primitive real nonprincipal characters of the given conductor."""
    return [c for c in characters_mod(conductor) if c.order == 2 and c.is_primitive]


SIEGEL_COLUMNS = ["chi", "conductor", "parity", "analytic_conductor", "sigma", "abs_L", "log_Q"]


def cmd_siegel_trend(args) -> int:
    if args.conductors is not None:
        conductors = [int(c) for c in parse_float_list(args.conductors)]
    else:
        conductors = list(range(3, args.max_conductor + 1))
    if any(c < 1 for c in conductors):
        raise DomainError("conductors must be positive")
    if args.x0 < 1:
        raise DomainError("--x0 must be >= 1")
    left, right = parse_pair(args.pair, args.limit)
    base = RSPair(left, right)
    rows = []
    for cond in conductors:
        for chi in quadratic_characters(cond):
            cchi = analytic_conductor(gl1(chi))
            sigma = 1 + 1 / math.log(cchi * args.x0)
            value = euler_product(twisted_pair(base, chi), sigma, args.limit)
            rows.append([chi.label(), chi.conductor, chi.parity, cchi, sigma, abs(value),
                         log_conductor_Q(left, right, chi)])
    if args.format == "json":
        _emit(json.dumps({"columns": SIEGEL_COLUMNS, "rows": rows, "demo": True,
                          "note": "convergent-side proxy at sigma = 1 + 1/log(C(chi) x0)"}) + "\n", args.out)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SIEGEL_COLUMNS)
        for r in rows:
            w.writerow([r[0], r[1], r[2]] + [_fmt(v) for v in r[3:]])
        _emit(buf.getvalue(), args.out)
    return EXIT_OK


# --- argument parser ----------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--threads", type=int, default=1, help="worker threads for prime sieving")
    common.add_argument("--tol", type=float, default=1e-9, help="tolerance for inequality checks")

    parser = _Parser(prog="rsengine", description="Rankin-Selberg coefficient and prime-sum experiments")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("coeffs", parents=[common], help="export lambda and Lambda coefficients")
    p.add_argument("--pair", required=True)
    p.add_argument("--twist-chi")
    p.add_argument("--twist-t", type=float, default=0.0)
    p.add_argument("--limit", type=int, default=1000)
    p.set_defaults(func=cmd_coeffs, default_format="csv")

    p = sub.add_parser("verify", parents=[common], help="run the invariant suites")
    p.add_argument("--pair", default="delta,delta")
    p.add_argument("--twist-chi", help="character used for D(s) and twisted checks (default 5:1)")
    p.add_argument("--limit", type=int, default=10**4)
    p.add_argument("--only", help=f"comma-separated subset of: {', '.join(SUITES)}")
    p.set_defaults(func=cmd_verify, default_format="json")

    p = sub.add_parser("sw", parents=[common], help="Siegel-Walfisz error table")
    p.add_argument("--pair", default="delta,delta")
    p.add_argument("--twist-chi")
    p.add_argument("--twist-t", type=float, default=0.0)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--x", required=True, help="comma-separated x values, e.g. 1e4,1e5,1e6")
    p.add_argument("--A", type=float, default=1.0)
    p.add_argument("--summary", help="path for the JSON summary (csv format only)")
    p.set_defaults(func=cmd_sw, default_format="csv")

    p = sub.add_parser("siegel-trend", parents=[common], help="demo: |L| near 1 for quadratic twists")
    p.add_argument("--pair", default="delta,delta")
    p.add_argument("--conductors", help="comma-separated conductors (default: 3..--max-conductor)")
    p.add_argument("--max-conductor", type=int, default=300)
    p.add_argument("--x0", type=float, default=10.0)
    p.add_argument("--limit", type=int, default=10**4, help="Euler product prime limit")
    p.set_defaults(func=cmd_siegel_trend, default_format="csv")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.format = args.format or args.default_format
        if args.threads < 1:
            raise DomainError("--threads must be >= 1")
        arith.set_threads(args.threads)
        return args.func(args)
    except (UsageError, DomainError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InsufficientDataError as exc:
        print(f"insufficient data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
