"""
Calendar Engine - Day Counting Oracle
=====================================

Independent reference for the rata die pipeline. Days are counted from the era
start (z2, 3, 1) by summing year and month lengths, then the epoch offset is
subtracted. Nothing here uses the multiply-shift constants.
"""

from __future__ import annotations

import bisect
import logging
import threading

from ..config import ORACLE_MAX_SPAN_DAYS
from ..errors import DomainError
from .gregorian import CalendarConfig, Date, RataDie, is_leap, month_length

logger = logging.getLogger("Calendar.Oracle")

# Calendar months in computational order, March first.
_COMP_MONTHS = ((0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (0, 8), (0, 9), (0, 10), (0, 11), (0, 12), (1, 1), (1, 2))


class _MarchStarts:
    """starts[i] = days from (z2, 3, 1) to (z2 + i, 3, 1), grown on demand."""

    def __init__(self, z2: int):
        self.z2 = z2
        self.starts = [0]
        self._lock = threading.Lock()

    def _length(self, i: int) -> int:
        return 366 if is_leap(self.z2 + i + 1) else 365

    def upto_year(self, index: int) -> list[int]:
        with self._lock:
            while len(self.starts) <= index:
                self.starts.append(self.starts[-1] + self._length(len(self.starts) - 1))
        return self.starts

    def covering_day(self, day: int) -> list[int]:
        with self._lock:
            while self.starts[-1] <= day:
                self.starts.append(self.starts[-1] + self._length(len(self.starts) - 1))
        return self.starts


_TABLES: dict[int, _MarchStarts] = {}
_TABLES_LOCK = threading.Lock()


def _table(z2: int) -> _MarchStarts:
    with _TABLES_LOCK:
        if z2 not in _TABLES:
            logger.debug(f"building year table for z2={z2}")
            _TABLES[z2] = _MarchStarts(z2)
        return _TABLES[z2]


def _max_index(cfg: CalendarConfig) -> int:
    return (cfg.epoch_offset + ORACLE_MAX_SPAN_DAYS) // 365 + 1


def _check_span(r: int) -> None:
    if abs(r) > ORACLE_MAX_SPAN_DAYS:
        raise DomainError(f"oracle reach is {ORACLE_MAX_SPAN_DAYS} days from the epoch, got {r}")


def oracle_rata_die(cfg: CalendarConfig, d: Date) -> RataDie:
    """Count days from the era start to d, month by month."""
    comp_year = d.year - (d.month <= 2)
    index = comp_year - cfg.z2
    if index < 0:
        raise DomainError(f"{d} precedes the era start {cfg.z2}-03-01")
    if index > _max_index(cfg):
        raise DomainError(f"{d} is beyond the oracle reach of {ORACLE_MAX_SPAN_DAYS} days")

    days = _table(cfg.z2).upto_year(index)[index]
    for year_step, month in _COMP_MONTHS:
        if (comp_year + year_step, month) == (d.year, d.month):
            break
        days += month_length(comp_year + year_step, month)
    r = days + d.day - 1 - cfg.epoch_offset
    _check_span(r)
    return RataDie(r)


def oracle_from_rata_die(cfg: CalendarConfig, r: int) -> Date:
    """Walk years then months until r days past the epoch are used up."""
    _check_span(r)
    day = r + cfg.epoch_offset
    if day < 0:
        raise DomainError(f"rata die {r} precedes the era start {cfg.z2}-03-01")

    starts = _table(cfg.z2).covering_day(day)
    index = bisect.bisect_right(starts, day) - 1
    comp_year = cfg.z2 + index
    remaining = day - starts[index]

    for year_step, month in _COMP_MONTHS:
        length = month_length(comp_year + year_step, month)
        if remaining < length:
            return Date(comp_year + year_step, month, remaining + 1)
        remaining -= length
    raise AssertionError(f"day {day} not covered by computational year {comp_year}")
