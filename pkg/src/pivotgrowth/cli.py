"""Command-line front end.

Exit codes: 0 success / verified, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .bounds import DEFAULT_PRECISION, bound_report, table4
from .constructions import (
    binary_embed,
    sylvester_hadamard,
    wilkinson_pp_matrix,
)
from .elimination import PivotStrategy, eliminate
from .errors import ParseError, PivotGrowthError, RejectedNotBetter
from .floatsim import FloatFormat, float_vs_exact_report
from .rational import RationalMatrix, format_fraction
from .repair import cp_repair, rook_repair
from .search import SearchConfig, multistart_search
from .store import (
    Ledger,
    canonical_json,
    format_report_rows,
    report_table,
    verify_certificate,
    write_certificate,
)


def _usage_error(message: str) -> SystemExit:
    print(f"error: {message}", file=sys.stderr)
    return SystemExit(2)


def _strategy(name: str) -> PivotStrategy:
    try:
        return PivotStrategy.parse(name)
    except ValueError as exc:
        raise _usage_error(str(exc)) from exc


def _load_matrix(path) -> RationalMatrix:
    return RationalMatrix.from_json(Path(path).read_text())


def _emit(doc, out=None):
    text = canonical_json(doc) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_search(args) -> int:
    config = SearchConfig(
        n=args.n,
        strategy=_strategy(args.strategy),
        restarts=args.restarts,
        seed=args.seed,
        jobs=args.jobs,
    )
    best, cert = multistart_search(
        config, progress=lambda msg: print(msg, file=sys.stderr)
    )
    if args.out:
        write_certificate(cert, args.out)
    else:
        _emit(cert.to_json_dict())
    if args.ledger:
        try:
            delta = Ledger(args.ledger).update(cert)
            print(f"ledger updated: {delta}", file=sys.stderr)
        except RejectedNotBetter as exc:
            print(f"ledger unchanged: {exc}", file=sys.stderr)
    print(f"certified growth {format_fraction(cert.growth)} "
          f"(~{float(cert.growth):.9g})", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    failed = 0
    for path in args.paths:
        report = verify_certificate(path)
        _emit(dict(report.to_json_dict(), path=str(path)))
        if not report.passed:
            failed += 1
    return 1 if failed else 0


def cmd_repair(args) -> int:
    matrix = _load_matrix(args.input)
    strategy = _strategy(args.strategy)
    repair = cp_repair if strategy is PivotStrategy.COMPLETE else rook_repair
    cert = repair(matrix, {"kind": "imported"})
    if args.out:
        write_certificate(cert, args.out)
    else:
        _emit(cert.to_json_dict())
    print(f"certified growth {format_fraction(cert.growth)}", file=sys.stderr)
    return 0


def cmd_bounds(args) -> int:
    if args.what == "table4":
        data = table4()
        _emit({str(t): models for t, models in data.items()})
        print(f"{'g model':>10} | " + " | ".join(f"t={t:>3}" for t in data),
              file=sys.stderr)
        for name in next(iter(data.values())):
            row = " | ".join(str(data[t][name]) for t in data)
            print(f"{name:>10} | {row}", file=sys.stderr)
        return 0
    if args.n is None:
        raise _usage_error("bounds requires --n")
    strategy = _strategy(args.strategy)
    table = None
    if args.ledger:
        table = Ledger(args.ledger).lower_bound_table(
            strategy, include_reported=args.include_reported
        )
    report = bound_report(args.n, strategy, table, args.precision)
    _emit(report.to_json_dict())
    doc = report.to_json_dict()
    for key in ("wilkinson_upper", "foster_upper", "best_known_lower",
                "extrapolated_lower"):
        value = doc[key]
        shown = "-" if value is None else f"{float(Fraction(value)):.6g}"
        print(f"{key:>20}: {shown}", file=sys.stderr)
    return 0


def cmd_construct(args) -> int:
    if args.kind == "hadamard":
        matrix = sylvester_hadamard(args.k)
    elif args.kind == "wilkinson":
        matrix = wilkinson_pp_matrix(args.n)
    elif args.kind == "embed":
        return cmd_embed(args)
    else:
        raise _usage_error(f"unknown construction {args.kind!r}")
    _emit(matrix.to_json_dict(), args.out)
    print(f"growth {format_fraction(eliminate(matrix).growth)}",
          file=sys.stderr)
    return 0


def cmd_embed(args) -> int:
    if not args.input:
        raise _usage_error("embed requires --input")
    matrix = _load_matrix(args.input)
    B, plan = binary_embed(matrix)
    _emit(B.to_json_dict(), args.out)
    print(f"embedded n={plan.n} into m={plan.m} "
          f"({plan.steps} steps to the trailing block)", file=sys.stderr)
    return 0


def cmd_floatsim(args) -> int:
    if args.what == "table4":
        return cmd_bounds(argparse.Namespace(what="table4"))
    if not args.input:
        raise _usage_error("floatsim compare requires --input")
    matrix = _load_matrix(args.input)
    fmt = FloatFormat(args.beta, args.t)
    report = float_vs_exact_report(
        matrix, fmt, _strategy(args.strategy),
        C=None if args.C is None else Fraction(args.C),
    )
    _emit(report.to_json_dict())
    return 0


def cmd_table(args) -> int:
    ledger = Ledger(args.ledger)
    n_range = None
    if args.min is not None or args.max is not None:
        n_range = (args.min or 1, args.max if args.max is not None else 10 ** 9)
    rows = report_table(ledger, n_range)
    sys.stdout.write(format_report_rows(rows))
    if args.json:
        Path(args.json).write_text(canonical_json(rows) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pivotgrowth",
        description="Growth-factor toolkit: exact elimination, certified "
                    "search, bounds, constructions, float simulation.",
    )
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker count (results are worker-independent)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--precision", type=int, default=DEFAULT_PRECISION,
                        help="bits for high-precision bound evaluation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="multistart growth search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--strategy", default="cp")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--out", help="certificate output path")
    p.add_argument("--ledger", help="ledger directory to update")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="re-verify certificates from scratch")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("repair", help="exact repair of a near-pivoted matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--strategy", default="cp")
    p.add_argument("--out")
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("bounds", help="bound report or the mantissa table")
    p.add_argument("what", nargs="?", choices=["table4"])
    p.add_argument("--n", type=int)
    p.add_argument("--strategy", default="cp")
    p.add_argument("--ledger")
    p.add_argument("--include-reported", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("construct", help="named matrix constructions")
    p.add_argument("kind", choices=["hadamard", "wilkinson", "embed"])
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--input", help="matrix JSON (embed)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("embed", help="binary {0,1} embedding of a CP matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("floatsim", help="rounded-model elimination report")
    p.add_argument("what", nargs="?", choices=["compare", "table4"])
    p.add_argument("--input")
    p.add_argument("--beta", type=int, default=2)
    p.add_argument("--t", type=int, default=53)
    p.add_argument("--strategy", default="none")
    p.add_argument("--C")
    p.set_defaults(func=cmd_floatsim)

    p = sub.add_parser("table", help="best-known lower bound table")
    p.add_argument("--ledger", required=True)
    p.add_argument("--min", type=int)
    p.add_argument("--max", type=int)
    p.add_argument("--json", help="also write machine-readable rows here")
    p.set_defaults(func=cmd_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PivotGrowthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
