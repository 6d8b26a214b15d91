"""
Calendar Engine - Proleptic Gregorian Rata Die
==============================================

Conversions between Gregorian dates and rata die (signed day counts from a
configurable epoch), routed through the computational calendar: years start on
March 1st, months run 3..14 and days are zero-based, so February is last and
the month lengths repeat with a 153-day period over five months.

Forward:  date -> era shift by z2 -> computational date -> y_c + m_c + d_c - offset
Inverse:  r0 = r + offset -> century / year / month cascade -> date -> year + z2

The hot paths use only multiply-shift constants whose validity intervals cover
the supported domain. The plain-division pipelines are kept alongside as
oracles and as the division baseline of the benchmark.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import NamedTuple, NewType, Union

from ..config import (
    CALENDAR_EPOCH,
    CALENDAR_YEAR_MAX,
    CALENDAR_YEAR_MIN,
    CALENDAR_Z2,
    RATA_COMP_LIMIT,
)
from ..eaf_engine.eaf_core import check_width
from ..eaf_engine.fast_search import fast_division, fast_remainder
from ..errors import DateParseError, DomainError

logger = logging.getLogger("Calendar.Gregorian")

RataDie = NewType("RataDie", int)

MONTH_LENGTHS = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)

# Days in one 400-year leap cycle.
LEAP_CYCLE_DAYS = 146097

# m_c(13): a computational day r2 at or past it falls in January or February.
JAN_FEB_THRESHOLD = 306

# y0/100 for y0 well beyond any supported computational year.
CENTURY = fast_division(100, 32)

# Time of day: quotients and remainders by 3600 and 60 on [0, 86400).
_HOURS = fast_division(3600, 32)
_HOUR_REM = fast_remainder(3600, 32)
_MINUTES = fast_division(60, 32)
_MINUTE_REM = fast_remainder(60, 32)

_MASK32 = (1 << 32) - 1
_MASK16 = (1 << 16) - 1


# =============================================================================
# Leap Years and Months
# =============================================================================

def is_leap(year: int) -> bool:
    return year % 4 == 0 and year % 100 != 0 or year % 400 == 0


def month_length(year: int, month: int) -> int:
    if not 1 <= month <= 12:
        raise DomainError(f"month must lie in [1, 12], got {month}")
    if month == 2 and is_leap(year):
        return 29
    return MONTH_LENGTHS[month - 1]


def month_count(m0: int) -> int:
    """Days from March 1st to the first day of computational month m0."""
    if not 3 <= m0 <= 14:
        raise DomainError(f"computational month must lie in [3, 14], got {m0}")
    return (979 * m0 - 2919) >> 5


# =============================================================================
# Data Classes
# =============================================================================

@dataclass(frozen=True, order=True)
class Date:
    year: int
    month: int
    day: int

    def __post_init__(self):
        length = month_length(self.year, self.month)
        if not 1 <= self.day <= length:
            raise DomainError(
                f"day must lie in [1, {length}] for {self.year}-{self.month:02d}, got {self.day}"
            )

    def __str__(self) -> str:
        return format_date(self)

    def to_dict(self) -> dict:
        return {"year": self.year, "month": self.month, "day": self.day}


@dataclass(frozen=True)
class CompDate:
    y0: int
    m0: int
    d0: int

    def __post_init__(self):
        if self.y0 < 0:
            raise DomainError(f"computational year must be non-negative, got {self.y0}")
        if not 3 <= self.m0 <= 14:
            raise DomainError(f"computational month must lie in [3, 14], got {self.m0}")
        # Months 13 and 14 are January and February of the following year.
        length = month_length(self.y0 + (self.m0 >= 13), self.m0 - 12 * (self.m0 >= 13))
        if not 0 <= self.d0 < length:
            raise DomainError(f"computational day must lie in [0, {length}), got {self.d0}")


class TimeOfDay(NamedTuple):
    hours: int
    minutes: int
    seconds: int


@dataclass(frozen=True)
class CalendarConfig:
    """
    Era shift z2 and epoch offset (days from (z2, 3, 1) to the epoch).
    Dates outside [year_min, year_max] are rejected.
    """

    z2: int
    epoch_offset: int
    year_min: int = CALENDAR_YEAR_MIN
    year_max: int = CALENDAR_YEAR_MAX

    def __post_init__(self):
        if self.z2 % 400 != 0:
            raise DomainError(f"z2 must be a multiple of 400, got {self.z2}")
        if self.epoch_offset < 0:
            raise DomainError(f"epoch offset must be non-negative, got {self.epoch_offset}")
        if self.year_min > self.year_max:
            raise DomainError(f"empty year range [{self.year_min}, {self.year_max}]")
        if self.year_min - 1 - self.z2 < 0:
            raise DomainError(
                f"year {self.year_min} precedes the era start {self.z2 + 1} for z2={self.z2}"
            )

    @classmethod
    def with_epoch(
        cls,
        epoch: Union[Date, str],
        z2: int = CALENDAR_Z2,
        year_min: int = CALENDAR_YEAR_MIN,
        year_max: int = CALENDAR_YEAR_MAX,
    ) -> CalendarConfig:
        if isinstance(epoch, str):
            epoch = parse_date(epoch)
        if z2 % 400 != 0:
            raise DomainError(f"z2 must be a multiple of 400, got {z2}")
        offset = rata_die_comp(to_computational(Date(epoch.year - z2, epoch.month, epoch.day)))
        logger.debug(f"epoch {epoch} with z2={z2}: offset {offset}")
        return cls(z2, offset, year_min, year_max)

    @classmethod
    def default(cls) -> CalendarConfig:
        return default_config()

    @cached_property
    def rata_min(self) -> int:
        return to_rata_die(self, Date(self.year_min, 1, 1))

    @cached_property
    def rata_max(self) -> int:
        """Exclusive."""
        return to_rata_die(self, Date(self.year_max, 12, 31)) + 1

    def to_dict(self) -> dict:
        return {
            "z2": self.z2,
            "epoch_offset": self.epoch_offset,
            "year_min": self.year_min,
            "year_max": self.year_max,
        }


@lru_cache(maxsize=1)
def default_config() -> CalendarConfig:
    return CalendarConfig.with_epoch(CALENDAR_EPOCH, CALENDAR_Z2, CALENDAR_YEAR_MIN, CALENDAR_YEAR_MAX)


# =============================================================================
# Computational Calendar
# =============================================================================

def to_computational(d: Date) -> CompDate:
    jan_feb = d.month <= 2
    return CompDate(d.year - jan_feb, d.month + 12 * jan_feb, d.day - 1)


def from_computational(c: CompDate) -> Date:
    jan_feb = c.m0 >= 13
    return Date(c.y0 + jan_feb, c.m0 - 12 * jan_feb, c.d0 + 1)


def rata_die_comp(c: CompDate) -> int:
    """Days from (0, 3, 0) to c, using multiply-shift forms only."""
    if c.y0 >= CENTURY.n_bound:
        raise DomainError(f"computational year {c.y0} beyond the century form bound {CENTURY.n_bound}")
    q1 = CENTURY.divide(c.y0)
    y_c = check_width((1461 * c.y0) >> 2, what="1461*y0/4") - q1 + (q1 >> 2)
    return y_c + month_count(c.m0) + c.d0


def _inverse_cascade(r0: int) -> tuple[int, int, int, bool]:
    if not 0 <= r0 < RATA_COMP_LIMIT:
        raise DomainError(f"computational rata die must lie in [0, {RATA_COMP_LIMIT}), got {r0}")

    # Century
    n1 = 4 * r0 + 3
    q1, rem1 = divmod(n1, LEAP_CYCLE_DAYS)
    r1 = rem1 >> 2

    # Year of the century
    n2 = 4 * r1 + 3
    u2 = 2939745 * n2
    q2 = u2 >> 32
    r2 = (u2 & _MASK32) // 2939745 >> 2

    # Month and day
    n3 = 2141 * r2 + 197913
    q3 = n3 >> 16
    r3 = (n3 & _MASK16) // 2141

    return 100 * q1 + q2, q3, r3, r2 >= JAN_FEB_THRESHOLD


def inv_rata_die_comp(r0: int) -> CompDate:
    y0, m0, d0, _ = _inverse_cascade(r0)
    return CompDate(y0, m0, d0)


def rata_die_comp_plain(c: CompDate) -> int:
    y0 = c.y0
    return 365 * y0 + y0 // 4 - y0 // 100 + y0 // 400 + (153 * c.m0 - 457) // 5 + c.d0


def inv_rata_die_comp_plain(r0: int) -> CompDate:
    if not 0 <= r0 < RATA_COMP_LIMIT:
        raise DomainError(f"computational rata die must lie in [0, {RATA_COMP_LIMIT}), got {r0}")
    n1 = 4 * r0 + 3
    q1, rem1 = divmod(n1, LEAP_CYCLE_DAYS)
    n2 = 4 * (rem1 // 4) + 3
    q2, rem2 = divmod(n2, 1461)
    n3 = 5 * (rem2 // 4) + 461
    q3, rem3 = divmod(n3, 153)
    return CompDate(100 * q1 + q2, q3, rem3 // 5)


# =============================================================================
# Rata Die
# =============================================================================

def to_rata_die(cfg: CalendarConfig, d: Date) -> RataDie:
    if not cfg.year_min <= d.year <= cfg.year_max:
        raise DomainError(
            f"year {d.year} outside the supported range [{cfg.year_min}, {cfg.year_max}]",
            data=d.to_dict(),
        )
    shifted = Date(d.year - cfg.z2, d.month, d.day)
    return RataDie(rata_die_comp(to_computational(shifted)) - cfg.epoch_offset)


def from_rata_die(cfg: CalendarConfig, r: int) -> Date:
    if not cfg.rata_min <= r < cfg.rata_max:
        raise DomainError(f"rata die {r} outside the supported range [{cfg.rata_min}, {cfg.rata_max})")
    y0, m0, d0, jan_feb = _inverse_cascade(r + cfg.epoch_offset)
    return Date(y0 + jan_feb + cfg.z2, m0 - 12 * jan_feb, d0 + 1)


def next_day(d: Date) -> Date:
    if d.day < month_length(d.year, d.month):
        return Date(d.year, d.month, d.day + 1)
    if d.month < 12:
        return Date(d.year, d.month + 1, 1)
    return Date(d.year + 1, 1, 1)


def previous_day(d: Date) -> Date:
    if d.day > 1:
        return Date(d.year, d.month, d.day - 1)
    if d.month > 1:
        return Date(d.year, d.month - 1, month_length(d.year, d.month - 1))
    return Date(d.year - 1, 12, 31)


# =============================================================================
# Text Format
# =============================================================================

_DATE_PATTERN = re.compile(r"([+-]?)([0-9]{4,})-([0-9]{2})-([0-9]{2})")


def parse_date(text: str) -> Date:
    """ISO 8601 calendar date with optional sign and a year of four or more digits."""
    match = _DATE_PATTERN.fullmatch(text.strip())
    if match is None:
        raise DateParseError(f"expected [+-]YYYY-MM-DD, got {text!r}")
    sign, year, month, day = match.groups()
    try:
        return Date(-int(year) if sign == "-" else int(year), int(month), int(day))
    except DomainError as err:
        raise DateParseError(f"invalid date {text!r}: {err.message}") from err


def format_date(d: Date) -> str:
    sign = "-" if d.year < 0 else ""
    return f"{sign}{abs(d.year):04d}-{d.month:02d}-{d.day:02d}"


# =============================================================================
# Time of Day
# =============================================================================

def seconds_to_hms(n: int) -> TimeOfDay:
    if not 0 <= n < 86400:
        raise DomainError(f"seconds of day must lie in [0, 86400), got {n}")
    within_hour = _HOUR_REM.remainder(n)
    return TimeOfDay(_HOURS.divide(n), _MINUTES.divide(within_hour), _MINUTE_REM.remainder(within_hour))
