"""
Bench - Timing Harness
======================

Times every registered calendar algorithm on one shared input array:

1. Generate uniform inputs from a fixed seed
2. Gate: all algorithms must agree output-for-output
3. Calibrate loop counts so each measured loop runs at least BENCH_MIN_LOOP_NS
4. Median of `repetitions` runs, minus the scan-only loop
5. Relative figures against the first algorithm

Only one timing run may be active per process.
"""

from __future__ import annotations

import logging
import statistics
import threading
import time
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..calendar_engine.gregorian import CalendarConfig
from ..config import BENCH_COUNT, BENCH_MIN_LOOP_NS, BENCH_RUNS, BENCH_SEED
from ..errors import BenchError
from .kernels import SCAN, Algorithm, get_algorithm
from .rng import gen_dates, gen_rata

logger = logging.getLogger("Bench.Harness")

DEFAULT_ALGORITHMS = ("fast", "division-baseline", "table-baseline")
CSV_COLUMNS = ["algorithm", "direction", "total_ns", "scan_ns", "adjusted_ns", "relative"]

_RUN_LOCK = threading.Lock()

# Results of every timed call end up here so no loop is provably dead.
_sink = 0


class Direction(Enum):
    TO_RATA = "to_rata"
    FROM_RATA = "from_rata"


@dataclass
class BenchReport:
    algorithm: str
    direction: Direction
    total_ns: float
    scan_ns: float
    adjusted_ns: float
    relative: float

    def to_dict(self) -> dict:
        data = asdict(self)
        data["direction"] = self.direction.value
        return data


# =============================================================================
# Inputs and Correctness Gate
# =============================================================================

def prepare_inputs(direction: Direction, cfg: CalendarConfig, count: int, seed: int) -> tuple[np.ndarray, ...]:
    if direction == Direction.TO_RATA:
        dates = gen_dates(seed, count, cfg)
        return (
            np.fromiter((d.year for d in dates), dtype=np.int64, count=count),
            np.fromiter((d.month for d in dates), dtype=np.int64, count=count),
            np.fromiter((d.day for d in dates), dtype=np.int64, count=count),
        )
    return (np.asarray(gen_rata(seed, count), dtype=np.int64),)


def _call(algorithm: Algorithm, direction: Direction, cfg: CalendarConfig, inputs: tuple[np.ndarray, ...]):
    if direction == Direction.TO_RATA:
        return algorithm.to_rata(cfg, *inputs)
    return algorithm.from_rata(cfg, *inputs)


def _as_tuple(result) -> tuple[np.ndarray, ...]:
    return result if isinstance(result, tuple) else (result,)


def check_agreement(
    direction: Direction, algorithms: Sequence[Algorithm], cfg: CalendarConfig, inputs: tuple[np.ndarray, ...]
) -> None:
    reference = algorithms[0]
    expected = _as_tuple(_call(reference, direction, cfg, inputs))
    for algorithm in algorithms[1:]:
        actual = _as_tuple(_call(algorithm, direction, cfg, inputs))
        for want, got in zip(expected, actual):
            bad = np.flatnonzero(np.asarray(want) != np.asarray(got))
            if bad.size:
                i = int(bad[0])
                raise BenchError(
                    f"{algorithm.name} disagrees with {reference.name} on input #{i} "
                    f"({', '.join(str(int(x[i])) for x in inputs)})",
                    data={"algorithm": algorithm.name, "index": i},
                )


# =============================================================================
# Timing
# =============================================================================

def _loop_ns(algorithm: Algorithm, direction: Direction, cfg: CalendarConfig, inputs, loops: int) -> int:
    global _sink
    start = time.perf_counter_ns()
    for _ in range(loops):
        result = _as_tuple(_call(algorithm, direction, cfg, inputs))
    elapsed = time.perf_counter_ns() - start
    _sink ^= int(result[0][-1])
    return elapsed


def _calibrate(algorithm: Algorithm, direction: Direction, cfg: CalendarConfig, inputs, min_loop_ns: int) -> int:
    loops = 1
    while _loop_ns(algorithm, direction, cfg, inputs, loops) < min_loop_ns:
        loops *= 2
    return loops


def _median_call_ns(algorithm, direction, cfg, inputs, repetitions: int, min_loop_ns: int) -> float:
    loops = _calibrate(algorithm, direction, cfg, inputs, min_loop_ns)
    runs = [_loop_ns(algorithm, direction, cfg, inputs, loops) / loops for _ in range(repetitions)]
    return statistics.median(runs)


def run_bench(
    direction: Direction,
    algorithms: Optional[Sequence[str]] = None,
    repetitions: int = BENCH_RUNS,
    count: int = BENCH_COUNT,
    seed: int = BENCH_SEED,
    cfg: Optional[CalendarConfig] = None,
    min_loop_ns: int = BENCH_MIN_LOOP_NS,
    progress: bool = False,
) -> list[BenchReport]:
    """Time `algorithms` in one direction; the first one is the reference for `relative`."""
    if repetitions <= 0:
        raise BenchError(f"repetitions must be positive, got {repetitions}")
    if count <= 0:
        raise BenchError(f"count must be positive, got {count}")
    resolved = [get_algorithm(name) for name in (algorithms or DEFAULT_ALGORITHMS)]
    if not resolved:
        raise BenchError("no algorithms to time")

    if not _RUN_LOCK.acquire(blocking=False):
        raise BenchError("another timing run is in progress")
    try:
        cfg = cfg or CalendarConfig.default()
        inputs = prepare_inputs(direction, cfg, count, seed)
        check_agreement(direction, resolved, cfg, inputs)
        logger.info(f"{direction.value}: {len(resolved)} algorithm(s) agree on {count} inputs")

        scan_ns = _median_call_ns(SCAN, direction, cfg, inputs, repetitions, min_loop_ns)
        totals = {}
        for algorithm in tqdm(resolved, desc=direction.value, unit="alg", disable=not progress):
            totals[algorithm.name] = _median_call_ns(algorithm, direction, cfg, inputs, repetitions, min_loop_ns)
            logger.debug(f"{algorithm.name}: {totals[algorithm.name]:.0f} ns per call")
    finally:
        _RUN_LOCK.release()

    reports = []
    reference_ns = None
    for algorithm in resolved:
        total = totals[algorithm.name]
        scan = min(scan_ns, total)
        adjusted = total - scan
        if reference_ns is None:
            reference_ns = adjusted
            relative = 1.0
        else:
            relative = adjusted / reference_ns if reference_ns > 0 else float("nan")
        reports.append(BenchReport(algorithm.name, direction, total, scan, adjusted, relative))
    return reports


def format_reports(reports: Sequence[BenchReport], csv: bool = False) -> str:
    frame = pd.DataFrame([r.to_dict() for r in reports], columns=CSV_COLUMNS)
    if csv:
        return frame.to_csv(index=False)
    return frame.to_string(index=False, float_format=lambda x: f"{x:,.2f}")
