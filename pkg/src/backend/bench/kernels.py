"""
Bench - Vectorised Calendar Kernels
===================================

Each registered algorithm is a (to_rata, from_rata) pair over numpy arrays:

    to_rata(cfg, year, month, day) -> rata
    from_rata(cfg, rata) -> (year, month, day)

fast               multiply-shift pipeline, unsigned 64-bit
division-baseline  the same pipeline with plain divisions
table-baseline     cumulative month table forward; year correction loop and
                   linear month search inverse
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from ..calendar_engine.gregorian import (
    CENTURY,
    JAN_FEB_THRESHOLD,
    LEAP_CYCLE_DAYS,
    CalendarConfig,
    Date,
)
from ..calendar_engine.oracle import oracle_rata_die
from ..eaf_engine.eaf_core import Eaf
from ..eaf_engine.fast_search import find_min_k
from ..errors import BenchError

Triple = tuple[np.ndarray, np.ndarray, np.ndarray]

# r3 = (n3 % 2^16)/2141 with n3 % 2^16 < 2^16
_, DAY_DIVISION = find_min_k(Eaf(1, 0, 2141), 1 << 16)
# q1 = n1/146097 for n1 = 4*r0 + 3 < 2^32, with alpha_p*n1 < 2^64
_, CENTURY_DIVISION = find_min_k(Eaf(1, 0, LEAP_CYCLE_DAYS), 1 << 32)
# (u2 % 2^32)/2939745 == n2 % 1461, with u2 % 2^32 < 2^32
_, YEAR_RESIDUAL = find_min_k(Eaf(1, 0, 2939745), 1 << 32)

_MASK16 = (1 << 16) - 1
_MASK32 = (1 << 32) - 1


@lru_cache(maxsize=8)
def _check_fast_window(cfg: CalendarConfig) -> None:
    top = 4 * (cfg.rata_max + cfg.epoch_offset) + 3
    if top >= CENTURY_DIVISION.n_bound:
        raise BenchError(
            f"fast kernel needs 4*(r + offset) + 3 < {CENTURY_DIVISION.n_bound}, "
            f"window reaches {top}"
        )


# =============================================================================
# Fast
# =============================================================================

def fast_to_rata(cfg: CalendarConfig, year: np.ndarray, month: np.ndarray, day: np.ndarray) -> np.ndarray:
    jan_feb = month <= 2

    y0 = (year - cfg.z2).astype(np.uint64)
    y0 -= jan_feb
    m0 = month.astype(np.uint64)
    m0 += jan_feb * np.uint64(12)

    # (979*m0 - 2919)/32
    m0 *= np.uint64(979)
    m0 -= np.uint64(2919)
    m0 >>= np.uint64(5)

    # 1461*y0/4 - y0/100 + y0/400
    q1 = y0 * np.uint64(CENTURY.alpha_p)
    q1 >>= np.uint64(CENTURY.k)
    r0 = y0 * np.uint64(1461)
    r0 >>= np.uint64(2)
    r0 -= q1
    q1 >>= np.uint64(2)
    r0 += q1

    r0 += m0
    r0 += day.astype(np.uint64)
    rata = r0.view(np.int64)
    rata -= cfg.epoch_offset + 1
    return rata


def fast_from_rata(cfg: CalendarConfig, rata: np.ndarray) -> Triple:
    _check_fast_window(cfg)
    n1 = (rata + cfg.epoch_offset).view(np.uint64)
    n1 <<= np.uint64(2)
    n1 |= np.uint64(3)

    q1 = n1 * np.uint64(CENTURY_DIVISION.alpha_p)
    q1 >>= np.uint64(CENTURY_DIVISION.k)

    # n2 = 4*((n1 % 146097)/4) + 3
    u2 = q1 * np.uint64(LEAP_CYCLE_DAYS)
    np.subtract(n1, u2, out=u2)
    u2 |= np.uint64(3)

    u2 *= np.uint64(2939745)
    q2 = u2 >> np.uint64(32)
    u2 &= np.uint64(_MASK32)
    u2 *= np.uint64(YEAR_RESIDUAL.alpha_p)
    u2 >>= np.uint64(YEAR_RESIDUAL.k + 2)
    r2 = u2

    jan_feb = r2 >= JAN_FEB_THRESHOLD

    n3 = r2 * np.uint64(2141)
    n3 += np.uint64(197913)
    q3 = n3 >> np.uint64(16)
    n3 &= np.uint64(_MASK16)
    n3 *= np.uint64(DAY_DIVISION.alpha_p)
    n3 >>= np.uint64(DAY_DIVISION.k)
    n3 += np.uint64(1)

    q1 *= np.uint64(100)
    q1 += q2
    q1 += jan_feb
    year = q1.view(np.int64)
    year += cfg.z2
    q3 -= jan_feb * np.uint64(12)
    return year, q3.view(np.int64), n3.view(np.int64)


# =============================================================================
# Division Baseline
# =============================================================================

def division_to_rata(cfg: CalendarConfig, year: np.ndarray, month: np.ndarray, day: np.ndarray) -> np.ndarray:
    jan_feb = (month <= 2).astype(np.int64)
    y0 = year - cfg.z2 - jan_feb
    m0 = month + 12 * jan_feb
    r0 = 365 * y0 + y0 // 4 - y0 // 100 + y0 // 400 + (153 * m0 - 457) // 5 + day - 1
    return r0 - cfg.epoch_offset


def division_from_rata(cfg: CalendarConfig, rata: np.ndarray) -> Triple:
    r0 = rata + cfg.epoch_offset

    q1, rem1 = np.divmod(4 * r0 + 3, LEAP_CYCLE_DAYS)
    q2, rem2 = np.divmod(4 * (rem1 // 4) + 3, 1461)
    q3, rem3 = np.divmod(5 * (rem2 // 4) + 461, 153)

    jan_feb = (q3 >= 13).astype(np.int64)
    year = 100 * q1 + q2 + jan_feb + cfg.z2
    return year, q3 - 12 * jan_feb, rem3 // 5 + 1


# =============================================================================
# Table Baseline
# =============================================================================

DAYS_BEFORE_MONTH = np.array(
    [
        [0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334],
        [0, 31, 60, 91, 121, 152, 182, 213, 244, 274, 305, 335],
    ],
    dtype=np.int64,
)


def _leap(year: np.ndarray) -> np.ndarray:
    return ((year % 4 == 0) & (year % 100 != 0)) | (year % 400 == 0)


def _leaps_through(year: np.ndarray) -> np.ndarray:
    return year // 4 - year // 100 + year // 400


@lru_cache(maxsize=8)
def _unix_anchor(cfg: CalendarConfig) -> int:
    return oracle_rata_die(cfg, Date(1970, 1, 1))


def table_to_rata(cfg: CalendarConfig, year: np.ndarray, month: np.ndarray, day: np.ndarray) -> np.ndarray:
    leap = _leap(year).astype(np.int64)
    since_1970 = 365 * (year - 1970) + _leaps_through(year - 1) - _leaps_through(np.int64(1969))
    return since_1970 + DAYS_BEFORE_MONTH[leap, month - 1] + day - 1 + _unix_anchor(cfg)


def table_from_rata(cfg: CalendarConfig, rata: np.ndarray) -> Triple:
    days = rata - _unix_anchor(cfg)
    year = np.full_like(days, 1970)

    # Guess a year from 365-day years, then correct by the leap days in between.
    while True:
        pending = (days < 0) | (days >= 365 + _leap(year))
        if not pending.any():
            break
        guess = year + days // 365
        shift = (guess - year) * 365 + _leaps_through(guess - 1) - _leaps_through(year - 1)
        days = np.where(pending, days - shift, days)
        year = np.where(pending, guess, year)

    table = DAYS_BEFORE_MONTH[_leap(year).astype(np.int64)]
    month = (table <= days[:, None]).sum(axis=1)
    day = days - table[np.arange(days.size), month - 1] + 1
    return year, month.astype(np.int64), day


# =============================================================================
# Scan and Registry
# =============================================================================

def scan_to_rata(cfg: CalendarConfig, year: np.ndarray, month: np.ndarray, day: np.ndarray) -> np.ndarray:
    return year + month + day


def scan_from_rata(cfg: CalendarConfig, rata: np.ndarray) -> Triple:
    return rata, rata, rata


@dataclass(frozen=True)
class Algorithm:
    name: str
    to_rata: Callable[..., np.ndarray]
    from_rata: Callable[..., Triple]


SCAN = Algorithm("scan", scan_to_rata, scan_from_rata)

ALGORITHMS: dict[str, Algorithm] = {
    "fast": Algorithm("fast", fast_to_rata, fast_from_rata),
    "division-baseline": Algorithm("division-baseline", division_to_rata, division_from_rata),
    "table-baseline": Algorithm("table-baseline", table_to_rata, table_from_rata),
}


def get_algorithm(name: str) -> Algorithm:
    if name not in ALGORITHMS:
        raise BenchError(f"unknown algorithm {name!r}; registered: {', '.join(ALGORITHMS)}")
    return ALGORITHMS[name]
