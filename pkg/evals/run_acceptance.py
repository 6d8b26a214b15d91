#!/usr/bin/env python3
"""
EAF Engine - Acceptance Report Card
===================================

Runs the acceptance checks as tiers and prints a report card.

Tiers:
1. CONSTANTS    - published division, remainder and EAF constants reproduced exactly
2. ORACLE       - every published bound holds, and fails one past it
3. CALENDAR     - +-400-year round trip, succession, leap cycle, day-counting oracle
4. PROPERTIES   - inverse identities and the periodicity lemma on random EAFs
5. CERTIFICATES - residual certificates for the year, month and time-of-day forms
6. PERFORMANCE  - fast kernels against the division and table baselines

Usage:
    python evals/run_acceptance.py                      # Run every tier
    python evals/run_acceptance.py --tier calendar      # Run one tier
    python evals/run_acceptance.py --skip-performance   # No timing
    python evals/run_acceptance.py --verbose            # Per-check lines
"""

import argparse
import json
import logging
import random
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

# Project root on the path so `src.backend` resolves
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.backend.bench.harness import Direction, run_bench
from src.backend.bench.rng import SplitMix64
from src.backend.calendar_engine.gregorian import (
    LEAP_CYCLE_DAYS,
    CalendarConfig,
    Date,
    from_rata_die,
    month_length,
    next_day,
    to_rata_die,
)
from src.backend.calendar_engine.oracle import oracle_from_rata_die, oracle_rata_die
from src.backend.config import LOG_DATEFMT, LOG_FORMAT, ORACLE_CHUNK
from src.backend.eaf_engine.eaf_core import (
    Eaf,
    evaluate,
    lemma_quotient_identity,
    minimal_right_inverse,
    residual,
)
from src.backend.eaf_engine.fast_search import (
    FastEaf,
    certify_residual,
    fast_division,
    fast_eaf_down,
    fast_eaf_up,
    fast_remainder,
)
from src.backend.eaf_engine.verification import (
    confirm_tightness,
    verify_division,
    verify_fast_eaf,
    verify_remainder,
)

logger = logging.getLogger("EAF.Acceptance")

# ============================================================================
# CONFIGURATION
# ============================================================================

EVALS_DIR = Path(__file__).parent
RESULTS_DIR = EVALS_DIR / "results"

TIERS = ["constants", "oracle", "calendar", "properties", "certificates", "performance"]

SPEED_FACTOR = 1.3

# ============================================================================
# DATA CLASSES
# ============================================================================

class EvalStatus(Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    ERROR = "ERROR"


@dataclass
class EvalResult:
    """Result of a single acceptance check."""
    eval_id: str
    tier: str
    status: EvalStatus
    expected: Any
    actual: Any
    execution_time_ms: float
    error_message: Optional[str] = None


@dataclass
class TierSummary:
    tier: str
    total: int
    passed: int
    failed: int
    errors: int
    score: float


@dataclass
class ReportCard:
    timestamp: str
    overall_score: float
    tier_summaries: Dict[str, TierSummary]
    results: List[EvalResult]
    execution_time_seconds: float
    failures: List[str] = field(default_factory=list)


# A check returns (expected, actual); it passes when they are equal.
Check = Callable[[], Tuple[Any, Any]]


# ============================================================================
# CONSTANTS TIER
# ============================================================================

MONTH = Eaf(153, -457, 5)
MONTH_INVERSE = Eaf(5, 461, 153)
YEAR = Eaf(1, 0, 1461)

TIME_BOUNDS = {3600: (2257199, 2255761), 60: (97612919, 97612894), 10: (1073741829, 1073741824)}


def _fast_triple(c: FastEaf) -> Tuple[int, int, int]:
    return c.alpha_p, c.beta_p, c.n_bound


def constants_checks() -> Dict[str, Check]:
    checks: Dict[str, Check] = {
        "div-1461-k32": lambda: (
            (2939745, 149, 28825529),
            (lambda c: (c.alpha_p, c.epsilon, c.n_bound))(fast_division(1461, 32)),
        ),
        "div-1461-k39": lambda: (
            (376287347, 79, 6958934390),
            (lambda c: (c.alpha_p, c.epsilon, c.n_bound))(fast_division(1461, 39)),
        ),
        "month-up-k5": lambda: ((980, -2928, 12), _fast_triple(fast_eaf_up(MONTH, 5))),
        "month-down-k5": lambda: ((979, -2919, 34), _fast_triple(fast_eaf_down(MONTH, 5))),
        "month-inverse-down-k16": lambda: ((2141, 197913, 734), _fast_triple(fast_eaf_down(MONTH_INVERSE, 16))),
    }
    for delta, (n_bound, m_bound) in TIME_BOUNDS.items():
        checks[f"div-{delta}-k32"] = lambda d=delta, n=n_bound: (n, fast_division(d, 32).n_bound)
        checks[f"rem-{delta}-k32"] = lambda d=delta, m=m_bound: (m, fast_remainder(d, 32).m_bound)
    return checks


# ============================================================================
# ORACLE TIER
# ============================================================================

def _eaf_tight(f: Eaf, c: FastEaf) -> Check:
    return lambda: ((True, True), (verify_fast_eaf(f, c).passed, confirm_tightness(f, c)))


def _division_tight(delta: int, k: int) -> Check:
    def check():
        c = fast_division(delta, k)
        return (True, True), (verify_division(c).passed, c.n_bound // delta != c.divide(c.n_bound))
    return check


def _remainder_tight(delta: int, k: int) -> Check:
    def check():
        c = fast_remainder(delta, k)
        return (True, True), (verify_remainder(c).passed, c.m_bound % delta != c.remainder(c.m_bound))
    return check


def oracle_checks() -> Dict[str, Check]:
    checks: Dict[str, Check] = {
        "month-up-k5": _eaf_tight(MONTH, fast_eaf_up(MONTH, 5)),
        "month-down-k5": _eaf_tight(MONTH, fast_eaf_down(MONTH, 5)),
        "month-inverse-down-k16": _eaf_tight(MONTH_INVERSE, fast_eaf_down(MONTH_INVERSE, 16)),
        "div-1461-k32": _division_tight(1461, 32),
        "div-1461-k39": _division_tight(1461, 39),
    }
    for delta in TIME_BOUNDS:
        checks[f"div-{delta}-k32"] = _division_tight(delta, 32)
        checks[f"rem-{delta}-k32"] = _remainder_tight(delta, 32)
    return checks


# ============================================================================
# CALENDAR TIER
# ============================================================================

def _round_trip() -> Tuple[Any, Any]:
    cfg = CalendarConfig.default()
    bad = []
    previous = None
    for r in tqdm(range(-LEAP_CYCLE_DAYS, LEAP_CYCLE_DAYS), desc="round trip", unit="day", leave=False):
        d = from_rata_die(cfg, r)
        if to_rata_die(cfg, d) != r or (previous is not None and next_day(previous) != d):
            bad.append(r)
        elif to_rata_die(cfg, Date(d.year + 400, d.month, d.day)) != r + LEAP_CYCLE_DAYS:
            bad.append(r)
        previous = d
    return [], bad[:10]


def _uniform_date(rng: SplitMix64, cfg: CalendarConfig) -> Date:
    year = rng.uniform(cfg.year_min, cfg.year_max + 1)
    month = rng.uniform(1, 13)
    return Date(year, month, rng.uniform(1, month_length(year, month) + 1))


def _oracle_equivalence(samples: int = 100_000) -> Tuple[Any, Any]:
    cfg = CalendarConfig.default()
    rng = SplitMix64(2024)
    bad = []
    for _ in tqdm(range(samples), desc="oracle dates", unit="date", leave=False):
        d = _uniform_date(rng, cfg)
        r = oracle_rata_die(cfg, d)
        if to_rata_die(cfg, d) != r or oracle_from_rata_die(cfg, r) != d or from_rata_die(cfg, r) != d:
            bad.append(str(d))
    return [], bad[:10]


def calendar_checks() -> Dict[str, Check]:
    return {
        "round-trip-800-years": _round_trip,
        "oracle-equivalence": _oracle_equivalence,
    }


# ============================================================================
# PROPERTIES TIER
# ============================================================================

def _inverse_identities(triples: int = 1000, seed: int = 7) -> Tuple[Any, Any]:
    rng = random.Random(seed)
    bad = []
    for _ in tqdm(range(triples), desc="inverse identities", unit="eaf", leave=False):
        delta = rng.randint(1, 500)
        f = Eaf(rng.randint(1, delta), rng.randint(-10 * delta, 10 * delta), delta)
        g = minimal_right_inverse(f)

        for r in range(-10 * delta, 10 * delta + 1):
            q = evaluate(f, r)
            lo = evaluate(g, q)
            ok = (
                evaluate(f, lo) == q
                and evaluate(f, lo - 1) == q - 1
                and lo <= r < evaluate(g, q + 1)
                and residual(f, r) // f.alpha == r - lo
                and lemma_quotient_identity(f, r)
            )
            if not ok:
                bad.append((f.alpha, f.beta, f.delta, r))
                break
    return [], bad[:10]


def properties_checks() -> Dict[str, Check]:
    return {"inverse-identities-and-periodicity": _inverse_identities}


# ============================================================================
# CERTIFICATES TIER
# ============================================================================

def _residual_agrees(f: Eaf, c: FastEaf, lo: int, hi: int) -> bool:
    mask = (1 << c.k) - 1
    for start in range(lo, hi, ORACLE_CHUNK):
        r = np.arange(start, min(start + ORACLE_CHUNK, hi), dtype=np.int64)
        exact = (f.alpha * r + f.beta) % f.delta // f.alpha
        fast = ((c.alpha_p * r + c.beta_p) & mask) // c.alpha_p
        if not np.array_equal(exact, fast):
            return False
    return True


def _certificate(f: Eaf, c: FastEaf, lo: int, hi: int) -> Check:
    def check():
        cert = certify_residual(f, c, lo, hi)
        return True, _residual_agrees(cert.f, cert.f_fast, cert.lo, cert.hi)
    return check


def certificates_checks() -> Dict[str, Check]:
    year = fast_division(1461, 32).to_fast_eaf()
    month = fast_eaf_down(MONTH_INVERSE, 16)
    checks = {
        "residual-year": _certificate(YEAR, year, 0, year.n_bound),
        "residual-month": _certificate(MONTH_INVERSE, month, 0, month.n_bound),
    }
    for delta in TIME_BOUNDS:
        c = fast_division(delta, 32).to_fast_eaf()
        checks[f"residual-time-{delta}"] = _certificate(Eaf(1, 0, delta), c, 0, c.n_bound)
    return checks


# ============================================================================
# PERFORMANCE TIER
# ============================================================================

def _speedup(direction: Direction, baseline: str) -> Check:
    def check():
        reports = {r.algorithm: r for r in run_bench(direction, ["fast", baseline])}
        ratio = reports[baseline].adjusted_ns / max(reports["fast"].adjusted_ns, 1e-9)
        logger.info(f"{direction.value}: fast is {ratio:.2f}x {baseline}")
        return True, ratio >= SPEED_FACTOR
    return check


def performance_checks() -> Dict[str, Check]:
    return {
        "to-rata-vs-division": _speedup(Direction.TO_RATA, "division-baseline"),
        "from-rata-vs-division": _speedup(Direction.FROM_RATA, "division-baseline"),
        "from-rata-vs-table": _speedup(Direction.FROM_RATA, "table-baseline"),
    }


TIER_CHECKS: Dict[str, Callable[[], Dict[str, Check]]] = {
    "constants": constants_checks,
    "oracle": oracle_checks,
    "calendar": calendar_checks,
    "properties": properties_checks,
    "certificates": certificates_checks,
    "performance": performance_checks,
}


# ============================================================================
# RUNNER
# ============================================================================

def run_check(tier: str, eval_id: str, check: Check) -> EvalResult:
    start_time = time.time()
    try:
        expected, actual = check()
        status = EvalStatus.PASS if expected == actual else EvalStatus.FAIL
        return EvalResult(eval_id, tier, status, expected, actual, (time.time() - start_time) * 1000)
    except Exception as e:
        return EvalResult(
            eval_id, tier, EvalStatus.ERROR, None, None, (time.time() - start_time) * 1000, error_message=str(e)
        )


def run_acceptance(tier_filter: Optional[str] = None, skip_performance: bool = False,
                   verbose: bool = False) -> ReportCard:
    start_time = time.time()
    results: List[EvalResult] = []

    tiers = [t for t in TIERS if (tier_filter is None or t == tier_filter)]
    if skip_performance and "performance" in tiers:
        tiers.remove("performance")

    print("=" * 80)
    print("EAF ENGINE - ACCEPTANCE")
    print("=" * 80)
    print(f"Tiers: {', '.join(tiers)}")
    print()

    for tier in tiers:
        for eval_id, check in TIER_CHECKS[tier]().items():
            result = run_check(tier, eval_id, check)
            results.append(result)
            if verbose:
                status_icon = "✅" if result.status == EvalStatus.PASS else "❌"
                print(f"  {status_icon} {tier}/{eval_id}: {result.status.value} "
                      f"({result.execution_time_ms:.0f} ms)")

    summaries = {}
    for tier in tiers:
        tier_results = [r for r in results if r.tier == tier]
        passed = sum(1 for r in tier_results if r.status == EvalStatus.PASS)
        failed = sum(1 for r in tier_results if r.status == EvalStatus.FAIL)
        errors = sum(1 for r in tier_results if r.status == EvalStatus.ERROR)
        summaries[tier] = TierSummary(tier, len(tier_results), passed, failed, errors,
                                      passed / len(tier_results) if tier_results else 0.0)

    overall = sum(1 for r in results if r.status == EvalStatus.PASS) / len(results) if results else 0.0
    report = ReportCard(
        timestamp=datetime.now().isoformat(),
        overall_score=overall,
        tier_summaries=summaries,
        results=results,
        execution_time_seconds=time.time() - start_time,
        failures=[
            f"{r.tier}/{r.eval_id}: expected {r.expected}, got {r.actual}"
            if r.status == EvalStatus.FAIL else f"{r.tier}/{r.eval_id}: {r.error_message}"
            for r in results if r.status != EvalStatus.PASS
        ],
    )
    save_results(report)
    return report


def save_results(report: ReportCard) -> Path:
    RESULTS_DIR.mkdir(exist_ok=True)
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    output_file = RESULTS_DIR / f"acceptance_{timestamp}.json"

    report_dict = {
        "timestamp": report.timestamp,
        "overall_score": report.overall_score,
        "tier_summaries": {k: asdict(v) for k, v in report.tier_summaries.items()},
        "results": [{**asdict(r), "status": r.status.value} for r in report.results],
        "failures": report.failures,
        "execution_time_seconds": report.execution_time_seconds,
    }
    with open(output_file, "w") as f:
        json.dump(report_dict, f, indent=2, default=str)

    print(f"\nResults saved to: {output_file}")
    return output_file


def print_report_card(report: ReportCard):
    print("\n" + "=" * 80)
    print("ACCEPTANCE REPORT CARD")
    print("=" * 80)
    print(f"\nTimestamp: {report.timestamp}")
    print(f"Execution Time: {report.execution_time_seconds:.2f}s")

    print("\n" + "─" * 80)
    print("TIER BREAKDOWN")
    print("─" * 80)
    for tier_name, summary in report.tier_summaries.items():
        status = "✅" if summary.passed == summary.total else "❌"
        print(f"\n{tier_name.upper()} {status}")
        print(f"   Passed: {summary.passed}/{summary.total} | "
              f"Failed: {summary.failed} | Errors: {summary.errors}")

    if report.failures:
        print("\n" + "─" * 80)
        print("🚨 FAILURES")
        print("─" * 80)
        for failure in report.failures:
            print(f"   ❌ {failure}")

    print("\n" + "═" * 80)
    total_passed = sum(s.passed for s in report.tier_summaries.values())
    total_tests = sum(s.total for s in report.tier_summaries.values())
    print("✅ ACCEPTANCE PASSED" if not report.failures else "❌ ACCEPTANCE FAILED")
    print(f"\nTotal: {total_passed}/{total_tests} checks passed")
    print("=" * 80)


# ============================================================================
# MAIN
# ============================================================================

def main() -> int:
    parser = argparse.ArgumentParser(description="EAF Engine acceptance report card")
    parser.add_argument("--tier", choices=TIERS, help="Run only the specified tier")
    parser.add_argument("--skip-performance", action="store_true", help="Skip timing checks")
    parser.add_argument("--verbose", "-v", action="store_true", help="Show per-check output")
    args = parser.parse_args()

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format=LOG_FORMAT,
        datefmt=LOG_DATEFMT,
    )

    report = run_acceptance(tier_filter=args.tier, skip_performance=args.skip_performance,
                            verbose=args.verbose)
    print_report_card(report)
    return 0 if not report.failures else 1


if __name__ == "__main__":
    sys.exit(main())
