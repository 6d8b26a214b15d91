"""
EAF Engine - Configuration
==========================

Module-level defaults, each overridable through an environment variable.
Nothing here reads configuration files.
"""

import os


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw, 10)
    except ValueError:
        raise ValueError(f"{name} must be a decimal integer, got {raw!r}") from None


# =============================================================================
# Calendar
# =============================================================================

# Era shift z2; must be a multiple of 400.
CALENDAR_Z2 = _env_int("EAF_CALENDAR_Z2", -32800)
CALENDAR_EPOCH = os.environ.get("EAF_CALENDAR_EPOCH", "1970-01-01")
CALENDAR_YEAR_MIN = _env_int("EAF_CALENDAR_YEAR_MIN", -32767)
CALENDAR_YEAR_MAX = _env_int("EAF_CALENDAR_YEAR_MAX", 32767)

# inv_rata_die_comp domain: n1 = 4*r0 + 3 must keep unsigned 32-bit semantics.
RATA_COMP_LIMIT = 1 << 31

# Day-by-day oracle reach, in days from 1970-01-01. Wide enough for the default
# year window (-32767-01-01 lies 12 687 000 days before the Unix epoch).
ORACLE_MAX_SPAN_DAYS = _env_int("EAF_ORACLE_MAX_SPAN", 13_000_000)

# =============================================================================
# Fast constant search
# =============================================================================

CORE_WIDTH_BITS = 64
SEARCH_WIDTH_BITS = 128
MAX_SHIFT = 63
# Validity bound reported for forms that are exact on every input.
SEARCH_CAP = 1 << 64

EXHAUSTIVE_LIMIT = 1_000_000
SAMPLE_COUNT = 100_000
ORACLE_CHUNK = 1 << 20

# =============================================================================
# Benchmark
# =============================================================================

BENCH_COUNT = _env_int("EAF_BENCH_COUNT", 16384)
BENCH_SEED = _env_int("EAF_BENCH_SEED", 1)
BENCH_RUNS = _env_int("EAF_BENCH_RUNS", 9)
BENCH_MIN_LOOP_NS = _env_int("EAF_BENCH_MIN_LOOP_NS", 10_000_000)

# =============================================================================
# Logging
# =============================================================================

LOG_LEVEL = os.environ.get("EAF_LOG_LEVEL", "INFO").upper()
LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(message)s"
LOG_DATEFMT = "%H:%M:%S"
