"""
Bench - Reproducible Inputs
===========================

SplitMix64 stream and the uniform benchmark inputs drawn from it:
dates in [1570-01-01, 2370-01-01) and rata die in [-146097, 146097).

Update constants (any implementation with these reproduces the same stream):
    state += 0x9E3779B97F4A7C15
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z ^= z >> 31
Uniform integers in [lo, hi) are lo + (z * (hi - lo)) >> 64.
"""

from __future__ import annotations

from typing import Optional

from ..calendar_engine.gregorian import CalendarConfig, Date, LEAP_CYCLE_DAYS
from ..calendar_engine.oracle import oracle_from_rata_die, oracle_rata_die
from ..errors import DomainError

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB

DATE_RANGE = (Date(1570, 1, 1), Date(2370, 1, 1))
RATA_RANGE = (-LEAP_CYCLE_DAYS, LEAP_CYCLE_DAYS)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        return z ^ (z >> 31)

    def uniform(self, lo: int, hi: int) -> int:
        span = hi - lo
        if span <= 0:
            raise DomainError(f"empty range [{lo}, {hi})")
        return lo + ((self.next() * span) >> 64)


def _require_count(count: int) -> None:
    if count < 0:
        raise DomainError(f"count must be non-negative, got {count}")


def gen_rata(seed: int, count: int) -> list[int]:
    _require_count(count)
    rng = SplitMix64(seed)
    lo, hi = RATA_RANGE
    return [rng.uniform(lo, hi) for _ in range(count)]


def gen_dates(seed: int, count: int, cfg: Optional[CalendarConfig] = None) -> list[Date]:
    """Uniform dates, drawn as uniform day numbers and converted by the oracle."""
    _require_count(count)
    cfg = cfg or CalendarConfig.default()
    lo, hi = (oracle_rata_die(cfg, d) for d in DATE_RANGE)
    rng = SplitMix64(seed)
    return [oracle_from_rata_die(cfg, rng.uniform(lo, hi)) for _ in range(count)]
