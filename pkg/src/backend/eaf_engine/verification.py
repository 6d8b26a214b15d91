"""
EAF Engine - Verification
=========================

Checks a fast form against the exact EAF it replaces. Scans run over numpy
int64 chunks whenever every intermediate provably fits; otherwise they fall
back to exact Python integers.

Bounds up to EXHAUSTIVE_LIMIT are scanned exhaustively, larger ones are
sampled uniformly (plus both endpoints).
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Optional

import numpy as np
from tqdm import tqdm

from ..config import EXHAUSTIVE_LIMIT, ORACLE_CHUNK, SAMPLE_COUNT, SEARCH_CAP
from .eaf_core import Eaf, euclidean_divmod
from .fast_search import DivConstants, FastEaf, RemConstants

logger = logging.getLogger("EAF.Verification")

INT64_LIMIT = 1 << 63


class VerificationStatus(Enum):
    PASS = "pass"
    FAIL = "fail"


class VerificationMode(Enum):
    EXHAUSTIVE = "exhaustive"
    SAMPLED = "sampled"


@dataclass
class VerificationReport:
    status: VerificationStatus
    mode: VerificationMode
    checked: int
    bound: int
    counterexample: Optional[int] = None
    expected: Optional[int] = None
    actual: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.status == VerificationStatus.PASS

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "mode": self.mode.value,
            "checked": self.checked,
            "bound": self.bound,
            "counterexample": self.counterexample,
            "expected": self.expected,
            "actual": self.actual,
        }


# =============================================================================
# Oracles
# =============================================================================

@dataclass(frozen=True)
class _Oracle:
    """Exact and fast evaluation of one form, scalar and vectorised."""
    exact: Callable[[int], int]
    fast: Callable[[int], int]
    exact_vec: Callable[[np.ndarray], np.ndarray]
    fast_vec: Callable[[np.ndarray], np.ndarray]
    # True if every intermediate for inputs in [0, stop) fits int64
    int64_safe: Callable[[int], bool]


def _eaf_oracle(f: Eaf, candidate: FastEaf) -> _Oracle:
    def safe(stop: int) -> bool:
        return (
            f.delta > 0
            and abs(f.alpha) * stop + abs(f.beta) < INT64_LIMIT
            and abs(candidate.alpha_p) * stop + abs(candidate.beta_p) < INT64_LIMIT
        )

    return _Oracle(
        exact=lambda r: euclidean_divmod(f.alpha * r + f.beta, f.delta).quotient,
        fast=candidate.evaluate,
        exact_vec=lambda r: (f.alpha * r + f.beta) // f.delta,
        fast_vec=lambda r: (candidate.alpha_p * r + candidate.beta_p) >> candidate.k,
        int64_safe=safe,
    )


def _division_oracle(constants: DivConstants) -> _Oracle:
    return _Oracle(
        exact=lambda n: n // constants.delta,
        fast=constants.divide,
        exact_vec=lambda n: n // constants.delta,
        fast_vec=lambda n: (constants.alpha_p * n) >> constants.k,
        int64_safe=lambda stop: constants.alpha_p * stop < INT64_LIMIT,
    )


def _remainder_oracle(constants: RemConstants) -> _Oracle:
    mask = (1 << constants.k) - 1

    def safe(stop: int) -> bool:
        return (
            constants.alpha_p * stop < INT64_LIMIT
            and constants.delta << constants.k < INT64_LIMIT
        )

    return _Oracle(
        exact=lambda n: n % constants.delta,
        fast=constants.remainder,
        exact_vec=lambda n: n % constants.delta,
        fast_vec=lambda n: (constants.delta * ((constants.alpha_p * n) & mask)) >> constants.k,
        int64_safe=safe,
    )


# =============================================================================
# Scanning
# =============================================================================

def _first_mismatch(oracle: _Oracle, start: int, stop: int, progress: bool = False) -> Optional[int]:
    if stop <= start:
        return None

    with tqdm(total=stop - start, desc="oracle", unit="r", disable=not progress) as bar:
        lo = start
        while lo < stop:
            hi = min(lo + ORACLE_CHUNK, stop)
            if oracle.int64_safe(hi):
                r = np.arange(lo, hi, dtype=np.int64)
                bad = np.flatnonzero(oracle.exact_vec(r) != oracle.fast_vec(r))
                if bad.size:
                    return lo + int(bad[0])
            else:
                for r in range(lo, hi):
                    if oracle.exact(r) != oracle.fast(r):
                        return r
            bar.update(hi - lo)
            lo = hi
    return None


def _sample_points(bound: int, samples: int, seed: int) -> list[int]:
    rng = random.Random(seed)
    edges = {0, 1, bound - 2, bound - 1}
    points = {p for p in edges if 0 <= p < bound} | {rng.randrange(bound) for _ in range(samples)}
    return sorted(points)


def _first_sampled_mismatch(oracle: _Oracle, points: list[int]) -> Optional[int]:
    if oracle.int64_safe(points[-1] + 1):
        r = np.asarray(points, dtype=np.int64)
        bad = np.flatnonzero(oracle.exact_vec(r) != oracle.fast_vec(r))
        return points[int(bad[0])] if bad.size else None
    for r in points:
        if oracle.exact(r) != oracle.fast(r):
            return r
    return None


def _verify(
    oracle: _Oracle,
    bound: int,
    mode: Optional[VerificationMode],
    samples: int,
    seed: int,
    progress: bool,
    label: str,
    scan: Optional[int] = None,
) -> VerificationReport:
    # mismatches below `bound` all show up below `scan`
    scan = bound if scan is None else min(scan, bound)
    if mode is None:
        mode = VerificationMode.EXHAUSTIVE if scan <= EXHAUSTIVE_LIMIT else VerificationMode.SAMPLED

    if scan <= 0:
        return VerificationReport(VerificationStatus.PASS, mode, 0, bound)

    if mode == VerificationMode.EXHAUSTIVE:
        checked = scan
        bad = _first_mismatch(oracle, 0, scan, progress)
    else:
        points = _sample_points(scan, samples, seed)
        checked = len(points)
        bad = _first_sampled_mismatch(oracle, points)

    if bad is None:
        logger.debug(f"{label}: agrees on [0, {bound}) ({mode.value}, {checked} checked)")
        return VerificationReport(VerificationStatus.PASS, mode, checked, bound)

    logger.info(f"{label}: counterexample r={bad} below N={bound}")
    return VerificationReport(
        VerificationStatus.FAIL,
        mode,
        checked,
        bound,
        counterexample=bad,
        expected=oracle.exact(bad),
        actual=oracle.fast(bad),
    )


# =============================================================================
# Public API
# =============================================================================

def _period(f: Eaf, candidate: FastEaf) -> Optional[int]:
    """delta if both sides advance by alpha whenever r advances by delta."""
    if f.delta > 0 and candidate.alpha_p * f.delta == f.alpha << candidate.k:
        return f.delta
    return None


def verify_fast_eaf(
    f: Eaf,
    candidate: FastEaf,
    mode: Optional[VerificationMode] = None,
    samples: int = SAMPLE_COUNT,
    seed: int = 0,
    progress: bool = False,
) -> VerificationReport:
    """Check f(r) == candidate(r) for r in [0, candidate.n_bound)."""
    return _verify(
        _eaf_oracle(f, candidate),
        candidate.n_bound,
        mode,
        samples,
        seed,
        progress,
        f"fast form of {f}",
        scan=_period(f, candidate),
    )


def verify_division(
    constants: DivConstants,
    mode: Optional[VerificationMode] = None,
    samples: int = SAMPLE_COUNT,
    seed: int = 0,
    progress: bool = False,
) -> VerificationReport:
    return _verify(
        _division_oracle(constants),
        constants.n_bound,
        mode,
        samples,
        seed,
        progress,
        f"division by {constants.delta}",
    )


def verify_remainder(
    constants: RemConstants,
    mode: Optional[VerificationMode] = None,
    samples: int = SAMPLE_COUNT,
    seed: int = 0,
    progress: bool = False,
) -> VerificationReport:
    return _verify(
        _remainder_oracle(constants),
        constants.m_bound,
        mode,
        samples,
        seed,
        progress,
        f"remainder by {constants.delta}",
    )


def oracle_max_n(f: Eaf, candidate: FastEaf, cap: int, progress: bool = False) -> int:
    """Smallest r >= 0 with f(r) != candidate(r), or `cap` if none is found below it."""
    period = _period(f, candidate)
    stop = cap if period is None else min(cap, period)
    bad = _first_mismatch(_eaf_oracle(f, candidate), 0, stop, progress)
    return cap if bad is None else bad


def refine_counterexample(
    f: Eaf, candidate: FastEaf, report: VerificationReport, progress: bool = False
) -> VerificationReport:
    """Replace a sampled counterexample by the smallest one."""
    if report.passed or report.mode == VerificationMode.EXHAUSTIVE:
        return report
    first = oracle_max_n(f, candidate, cap=report.counterexample, progress=progress)
    if first == report.counterexample:
        return report
    logger.info(f"fast form of {f}: first counterexample r={first}")
    return replace(
        report,
        counterexample=first,
        expected=euclidean_divmod(f.alpha * first + f.beta, f.delta).quotient,
        actual=candidate.evaluate(first),
    )


def confirm_tightness(f: Eaf, candidate: FastEaf, samples: int = SAMPLE_COUNT, seed: int = 0) -> bool:
    """True if the form agrees with f below its bound N and fails at N."""
    n = candidate.n_bound
    if n >= SEARCH_CAP:
        return False
    below = verify_fast_eaf(f, candidate, samples=samples, seed=seed)
    if not below.passed:
        logger.warning(f"{f}: reported bound {n} but the form already fails at {below.counterexample}")
        return False
    if euclidean_divmod(f.alpha * n + f.beta, f.delta).quotient == candidate.evaluate(n):
        logger.warning(f"{f}: reported bound {n} is not tight, the form still agrees at {n}")
        return False
    return True
