#!/usr/bin/env python3
"""
EAF Engine - Command Center
===========================

Front door for constant search, oracle verification, date conversion and
benchmarking.

Commands:
    python -m src.backend.cli find-div 1461 --k 32          # fast division constants
    python -m src.backend.cli find-eaf 5 461 153 --k 16     # fast EAF constants
    python -m src.backend.cli find-rem 60 --k 32            # fast remainder constants
    python -m src.backend.cli verify 5 461 153 --alpha-p 2141 --beta-p 197913 --k 16 --n 734
    python -m src.backend.cli to-rata 2000-03-01
    python -m src.backend.cli from-rata 11017
    python -m src.backend.cli bench --direction both

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.

All divisions are Euclidean (0 <= remainder < |divisor|), so results for
negative operands differ from truncating hardware division.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from typing import Optional, Sequence

from .bench.harness import DEFAULT_ALGORITHMS, Direction, format_reports, run_bench
from .calendar_engine.gregorian import CalendarConfig, format_date, from_rata_die, parse_date, to_rata_die
from .config import BENCH_COUNT, BENCH_RUNS, BENCH_SEED, LOG_DATEFMT, LOG_FORMAT, LOG_LEVEL, SAMPLE_COUNT
from .eaf_engine.eaf_core import Eaf
from .eaf_engine.fast_search import (
    FastEaf,
    best_fast_eaf,
    fast_division,
    fast_eaf_down,
    fast_eaf_exact,
    fast_eaf_from_constants,
    fast_eaf_up,
    fast_remainder,
    find_min_k,
    remainder_for_bitwidth,
)
from .eaf_engine.verification import VerificationMode, refine_counterexample, verify_fast_eaf
from .errors import DomainError, EafError, ErrorCodes

logger = logging.getLogger("EAF.CLI")


# =============================================================================
# Helpers
# =============================================================================

_DECIMAL = re.compile(r"[+-]?[0-9]+")


def decimal(text: str) -> int:
    """argparse type: signed decimal integers only."""
    if not _DECIMAL.fullmatch(text):
        raise argparse.ArgumentTypeError(f"expected a decimal integer, got {text!r}")
    return int(text)


def emit(args: argparse.Namespace, payload: dict, lines: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


def _fast_eaf_lines(f: Eaf, c: FastEaf) -> list[str]:
    return [
        f"f(r)     = {f}",
        f"fast(r)  = ({c.alpha_p}*r {'-' if c.beta_p < 0 else '+'} {abs(c.beta_p)}) >> {c.k}",
        f"rounding = {c.rounding.value}",
        f"epsilon  = {c.epsilon}",
        f"N        = {c.n_bound}",
    ]


# =============================================================================
# Commands
# =============================================================================

def cmd_find_div(args: argparse.Namespace) -> int:
    """Constants for n/delta."""
    if args.min_n is not None:
        k, constants = find_min_k(Eaf(1, 0, args.delta), args.min_n, k_max=args.k_max)
        logger.info(f"smallest k with N >= {args.min_n}: {k}")
    else:
        constants = fast_division(args.delta, args.k)

    if isinstance(constants, FastEaf):
        emit(args, constants.to_dict(), _fast_eaf_lines(Eaf(1, 0, args.delta), constants))
        return ErrorCodes.SUCCESS

    emit(
        args,
        constants.to_dict(),
        [
            f"n/{constants.delta} = {constants.alpha_p}*n >> {constants.k}",
            f"epsilon = {constants.epsilon}",
            f"N       = {constants.n_bound}",
        ],
    )
    return ErrorCodes.SUCCESS


_SEARCHES = {
    "up": fast_eaf_up,
    "down": fast_eaf_down,
    "exact": fast_eaf_exact,
}


def cmd_find_eaf(args: argparse.Namespace) -> int:
    """Constants for (alpha*r + beta)/delta."""
    f = Eaf(args.alpha, args.beta, args.delta)
    if args.rounding == "best":
        constants = best_fast_eaf(f, args.k, heuristic=args.heuristic)
    else:
        constants = _SEARCHES[args.rounding](f, args.k)
    emit(args, constants.to_dict(), _fast_eaf_lines(f, constants))
    return ErrorCodes.SUCCESS


def cmd_find_rem(args: argparse.Namespace) -> int:
    """Constants for n%delta."""
    if args.bits is not None:
        constants = remainder_for_bitwidth(args.delta, args.bits, args.l_max)
    elif args.k is not None:
        constants = fast_remainder(args.delta, args.k)
    else:
        raise DomainError("find-rem needs --k or --bits")
    emit(
        args,
        constants.to_dict(),
        [
            f"n%{constants.delta} = {constants.delta}*({constants.alpha_p}*n % 2^{constants.k}) >> {constants.k}",
            f"epsilon = {constants.epsilon}",
            f"M       = {constants.m_bound}",
        ],
    )
    return ErrorCodes.SUCCESS


def _verify_target(args: argparse.Namespace) -> tuple[Eaf, FastEaf]:
    if args.division:
        if len(args.eaf) != 1:
            raise DomainError("--division takes a single DELTA")
        f = Eaf(1, 0, args.eaf[0])
    elif len(args.eaf) == 3:
        f = Eaf(*args.eaf)
    else:
        raise DomainError("expected ALPHA BETA DELTA (or DELTA with --division)")

    if args.constants is not None:
        try:
            candidate = FastEaf.from_dict(json.loads(args.constants))
        except (ValueError, KeyError, TypeError) as err:
            raise DomainError(f"unreadable --constants: {err}") from err
        # Re-derive rounding and epsilon for this f rather than trusting the payload.
        return f, fast_eaf_from_constants(f, candidate.alpha_p, candidate.beta_p, candidate.k, candidate.n_bound)

    if args.k is None:
        raise DomainError("verify needs --k (with --alpha-p) or --constants")
    if args.alpha_p is None:
        if not args.division:
            raise DomainError("--alpha-p is required unless --division is given")
        derived = fast_division(f.delta, args.k).to_fast_eaf()
        n_bound = derived.n_bound if args.n is None else args.n
        return f, fast_eaf_from_constants(f, derived.alpha_p, 0, args.k, n_bound)
    if args.n is None:
        raise DomainError("--n is required with --alpha-p")
    return f, fast_eaf_from_constants(f, args.alpha_p, args.beta_p, args.k, args.n)


def cmd_verify(args: argparse.Namespace) -> int:
    """Check a fast form against its EAF on [0, N)."""
    f, candidate = _verify_target(args)
    mode = None
    if args.exhaustive:
        mode = VerificationMode.EXHAUSTIVE
    elif args.samples is not None:
        mode = VerificationMode.SAMPLED

    logger.info(f"verifying {f} against ({candidate.alpha_p}*r + {candidate.beta_p}) >> {candidate.k} on [0, {candidate.n_bound})")
    report = verify_fast_eaf(
        f,
        candidate,
        mode=mode,
        samples=args.samples or SAMPLE_COUNT,
        seed=args.seed,
        progress=not args.json,
    )
    report = refine_counterexample(f, candidate, report, progress=not args.json)

    lines = [f"{report.status.value.upper()} ({report.mode.value}, {report.checked} checked, N={report.bound})"]
    if not report.passed:
        lines.append(f"counterexample r={report.counterexample}: f(r)={report.expected}, fast(r)={report.actual}")
    emit(args, report.to_dict(), lines)
    return ErrorCodes.SUCCESS if report.passed else ErrorCodes.VERIFICATION_FAILED


def cmd_to_rata(args: argparse.Namespace) -> int:
    cfg = CalendarConfig.default()
    d = parse_date(args.date)
    r = to_rata_die(cfg, d)
    emit(args, {"date": format_date(d), "rata_die": r}, [str(r)])
    return ErrorCodes.SUCCESS


def cmd_from_rata(args: argparse.Namespace) -> int:
    cfg = CalendarConfig.default()
    d = from_rata_die(cfg, args.rata)
    emit(args, {"rata_die": args.rata, "date": format_date(d), **d.to_dict()}, [format_date(d)])
    return ErrorCodes.SUCCESS


_DIRECTIONS = {
    "to": [Direction.TO_RATA],
    "from": [Direction.FROM_RATA],
    "both": [Direction.TO_RATA, Direction.FROM_RATA],
}


def cmd_bench(args: argparse.Namespace) -> int:
    """Time the calendar kernels."""
    logger.info("=" * 60)
    logger.info(f"BENCH: {args.count} inputs, seed {args.seed}, {args.runs} runs")
    logger.info("=" * 60)

    reports = []
    for direction in _DIRECTIONS[args.direction]:
        reports.extend(
            run_bench(
                direction,
                algorithms=args.algorithms,
                repetitions=args.runs,
                count=args.count,
                seed=args.seed,
                progress=not args.csv,
            )
        )
    print(format_reports(reports, csv=args.csv), end="" if args.csv else "\n")
    return ErrorCodes.SUCCESS


# =============================================================================
# Parser
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eaf",
        description="EAF Engine - fast integer division constants and Gregorian rata die",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    # Division by 1461 valid on all 32-bit inputs
    eaf find-div 1461 --min-n 4294967296

    # Month-of-year constants, both directions compared
    eaf find-eaf 5 461 153 --k 16 --rounding best --json

    # Remainder by 60 for every 16-bit input
    eaf find-rem 60 --bits 16

    # One past the published bound fails at r = 734
    eaf verify 5 461 153 --alpha-p 2141 --beta-p 197913 --k 16 --n 735

    # Division constants checked by the oracle
    eaf verify 1461 --division --k 32

    # Dates
    eaf to-rata -- -0044-03-15
    eaf from-rata 11017

    # Benchmark as CSV
    eaf bench --direction from --csv
        """,
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")

    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    # find-div
    div_parser = subparsers.add_parser("find-div", help="Constants for division by a constant")
    div_parser.add_argument("delta", type=decimal, help="Divisor")
    div_group = div_parser.add_mutually_exclusive_group(required=True)
    div_group.add_argument("--k", type=decimal, help="Shift exponent")
    div_group.add_argument("--min-n", type=decimal, help="Smallest k valid on at least [0, MIN_N)")
    div_parser.add_argument("--k-max", type=decimal, default=63, help="Largest k tried with --min-n")
    div_parser.add_argument("--json", action="store_true", help="JSON output")
    div_parser.set_defaults(func=cmd_find_div)

    # find-eaf
    eaf_parser = subparsers.add_parser("find-eaf", help="Constants for (alpha*r + beta)/delta")
    eaf_parser.add_argument("alpha", type=decimal)
    eaf_parser.add_argument("beta", type=decimal)
    eaf_parser.add_argument("delta", type=decimal)
    eaf_parser.add_argument("--k", type=decimal, required=True, help="Shift exponent")
    eaf_parser.add_argument("--rounding", choices=["up", "down", "exact", "best"], default="best")
    eaf_parser.add_argument("--heuristic", action="store_true", help="With best: pick the smaller epsilon")
    eaf_parser.add_argument("--json", action="store_true", help="JSON output")
    eaf_parser.set_defaults(func=cmd_find_eaf)

    # find-rem
    rem_parser = subparsers.add_parser("find-rem", help="Constants for remainder by a constant")
    rem_parser.add_argument("delta", type=decimal, help="Divisor")
    rem_group = rem_parser.add_mutually_exclusive_group(required=True)
    rem_group.add_argument("--k", type=decimal, help="Shift exponent")
    rem_group.add_argument("--bits", type=decimal, help="Cover every W-bit input")
    rem_parser.add_argument("--l-max", type=decimal, default=32, help="Largest extra shift tried with --bits")
    rem_parser.add_argument("--json", action="store_true", help="JSON output")
    rem_parser.set_defaults(func=cmd_find_rem)

    # verify
    verify_parser = subparsers.add_parser("verify", help="Check constants against the exact EAF")
    verify_parser.add_argument("eaf", type=decimal, nargs="+", metavar="INT", help="ALPHA BETA DELTA, or DELTA with --division")
    verify_parser.add_argument("--division", action="store_true", help="alpha=1, beta=0")
    verify_parser.add_argument("--alpha-p", type=decimal, help="Multiplier")
    verify_parser.add_argument("--beta-p", type=decimal, default=0, help="Additive constant")
    verify_parser.add_argument("--k", type=decimal, help="Shift exponent")
    verify_parser.add_argument("--n", type=decimal, help="Claimed bound N")
    verify_parser.add_argument("--constants", help="FastEaf JSON as printed by find-eaf --json")
    verify_mode = verify_parser.add_mutually_exclusive_group()
    verify_mode.add_argument("--exhaustive", action="store_true", help="Check every r in [0, N)")
    verify_mode.add_argument("--samples", type=decimal, help="Check this many uniform points")
    verify_parser.add_argument("--seed", type=decimal, default=0)
    verify_parser.add_argument("--json", action="store_true", help="JSON output")
    verify_parser.set_defaults(func=cmd_verify)

    # to-rata / from-rata
    to_parser = subparsers.add_parser("to-rata", help="Date to rata die")
    to_parser.add_argument("date", help="[+-]YYYY-MM-DD")
    to_parser.add_argument("--json", action="store_true", help="JSON output")
    to_parser.set_defaults(func=cmd_to_rata)

    from_parser = subparsers.add_parser("from-rata", help="Rata die to date")
    from_parser.add_argument("rata", type=decimal, help="Days since the epoch")
    from_parser.add_argument("--json", action="store_true", help="JSON output")
    from_parser.set_defaults(func=cmd_from_rata)

    # bench
    bench_parser = subparsers.add_parser("bench", help="Time the calendar kernels")
    bench_parser.add_argument("--direction", choices=list(_DIRECTIONS), default="both")
    bench_parser.add_argument("--count", type=decimal, default=BENCH_COUNT)
    bench_parser.add_argument("--seed", type=decimal, default=BENCH_SEED)
    bench_parser.add_argument("--runs", type=decimal, default=BENCH_RUNS)
    bench_parser.add_argument("--algorithms", nargs="+", default=list(DEFAULT_ALGORITHMS))
    bench_parser.add_argument("--csv", action="store_true", help="CSV output")
    bench_parser.set_defaults(func=cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else ErrorCodes.USAGE_ERROR

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else LOG_LEVEL,
        format=LOG_FORMAT,
        datefmt=LOG_DATEFMT,
    )

    if not args.command:
        parser.print_help()
        return ErrorCodes.SUCCESS

    try:
        return args.func(args)
    except EafError as err:
        print(f"error: {err.message}", file=sys.stderr)
        return err.code
    except Exception:
        logger.exception(f"{args.command} failed unexpectedly")
        return ErrorCodes.INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
