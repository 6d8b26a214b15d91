import numpy as np
import pytest

from src.backend.bench import harness
from src.backend.bench.harness import (
    CSV_COLUMNS,
    BenchReport,
    Direction,
    check_agreement,
    format_reports,
    prepare_inputs,
    run_bench,
)
from src.backend.bench.kernels import (
    ALGORITHMS,
    CENTURY_DIVISION,
    YEAR_RESIDUAL,
    Algorithm,
    get_algorithm,
)
from src.backend.bench.rng import DATE_RANGE, RATA_RANGE, SplitMix64, gen_dates, gen_rata
from src.backend.calendar_engine.gregorian import default_config, from_rata_die, to_rata_die
from src.backend.errors import BenchError, DomainError


@pytest.fixture
def cfg():
    return default_config()


# =============================================================================
# Inputs
# =============================================================================

def test_splitmix_reference_output():
    assert SplitMix64(0).next() == 0xE220A8397B1DCDAF


def test_streams_are_deterministic():
    assert gen_rata(7, 100) == gen_rata(7, 100)
    assert gen_rata(7, 100) != gen_rata(8, 100)
    assert gen_dates(3, 50) == gen_dates(3, 50)


def test_inputs_stay_in_range():
    lo, hi = RATA_RANGE
    assert all(lo <= r < hi for r in gen_rata(1, 5000))
    first, last = DATE_RANGE
    assert all(first <= d < last for d in gen_dates(1, 2000))


def test_counts():
    assert gen_rata(1, 0) == []
    assert gen_dates(1, 0) == []
    with pytest.raises(DomainError):
        gen_rata(1, -1)
    with pytest.raises(DomainError):
        SplitMix64(1).uniform(5, 5)


# =============================================================================
# Kernels
# =============================================================================

@pytest.mark.parametrize("name", sorted(ALGORITHMS))
def test_kernels_match_scalar_pipeline(cfg, name):
    algorithm = get_algorithm(name)
    rata = np.asarray(gen_rata(11, 3000), dtype=np.int64)
    year, month, day = algorithm.from_rata(cfg, rata)
    for i, r in enumerate(rata.tolist()):
        d = from_rata_die(cfg, r)
        assert (int(year[i]), int(month[i]), int(day[i])) == (d.year, d.month, d.day)

    dates = gen_dates(11, 3000, cfg)
    inputs = prepare_inputs(Direction.TO_RATA, cfg, 3000, 11)
    out = algorithm.to_rata(cfg, *inputs)
    assert [int(x) for x in out] == [to_rata_die(cfg, d) for d in dates]


@pytest.mark.parametrize("name", ["fast", "division-baseline"])
def test_kernels_cover_the_whole_year_window(cfg, name):
    algorithm = get_algorithm(name)
    rata = np.array([cfg.rata_min, cfg.rata_min + 59, -1, 0, cfg.rata_max - 1], dtype=np.int64)
    year, month, day = algorithm.from_rata(cfg, rata)
    expected = [from_rata_die(cfg, int(r)) for r in rata]
    assert [int(y) for y in year] == [d.year for d in expected]
    assert [int(m) for m in month] == [d.month for d in expected]
    assert [int(x) for x in day] == [d.day for d in expected]
    back = algorithm.to_rata(cfg, year.astype(np.int64), month.astype(np.int64), day.astype(np.int64))
    assert back.tolist() == rata.tolist()


def test_unknown_algorithm():
    with pytest.raises(BenchError) as err:
        get_algorithm("bubble")
    assert "fast" in err.value.message


def test_disagreement_is_reported(cfg):
    broken = Algorithm(
        "off-by-one",
        lambda c, y, m, d: ALGORITHMS["fast"].to_rata(c, y, m, d) + 1,
        ALGORITHMS["fast"].from_rata,
    )
    inputs = prepare_inputs(Direction.TO_RATA, cfg, 64, 1)
    with pytest.raises(BenchError) as err:
        check_agreement(Direction.TO_RATA, [ALGORITHMS["fast"], broken], cfg, inputs)
    assert err.value.data["index"] == 0


# =============================================================================
# Harness
# =============================================================================

@pytest.mark.parametrize("direction", list(Direction))
def test_run_bench_reports(direction):
    reports = run_bench(direction, repetitions=1, count=256, min_loop_ns=10_000)
    assert [r.algorithm for r in reports] == ["fast", "division-baseline", "table-baseline"]
    assert reports[0].relative == 1.0
    for r in reports:
        assert r.direction == direction
        assert 0 <= r.scan_ns <= r.total_ns
        assert r.adjusted_ns == pytest.approx(r.total_ns - r.scan_ns)


@pytest.mark.parametrize("kwargs", [
    {"repetitions": 0},
    {"count": 0},
    {"algorithms": ["fast", "nope"]},
])
def test_run_bench_rejects(kwargs):
    with pytest.raises(BenchError):
        run_bench(Direction.FROM_RATA, min_loop_ns=1000, **kwargs)


def test_one_run_at_a_time():
    assert harness._RUN_LOCK.acquire(blocking=False)
    try:
        with pytest.raises(BenchError):
            run_bench(Direction.FROM_RATA, repetitions=1, count=16, min_loop_ns=1000)
    finally:
        harness._RUN_LOCK.release()


def test_format_reports():
    reports = [
        BenchReport("fast", Direction.FROM_RATA, 10.0, 2.0, 8.0, 1.0),
        BenchReport("division-baseline", Direction.FROM_RATA, 22.0, 2.0, 20.0, 2.5),
    ]
    csv = format_reports(reports, csv=True).splitlines()
    assert csv[0] == ",".join(CSV_COLUMNS)
    assert csv[1].startswith("fast,from_rata,10.0,2.0,8.0,1.0")
    table = format_reports(reports)
    assert "division-baseline" in table
    assert "2.50" in table


SPEED_FACTOR = 1.3


@pytest.mark.bench
@pytest.mark.parametrize(
    "direction,baseline",
    [
        (Direction.TO_RATA, "division-baseline"),
        (Direction.FROM_RATA, "division-baseline"),
        (Direction.FROM_RATA, "table-baseline"),
    ],
)
def test_fast_outpaces_baseline(direction, baseline):
    fast, slow = run_bench(direction, algorithms=["fast", baseline], repetitions=9, count=16384)
    assert slow.adjusted_ns / fast.adjusted_ns >= SPEED_FACTOR


def test_fast_kernel_constants():
    assert (CENTURY_DIVISION.k, CENTURY_DIVISION.alpha_p) == (47, 963315389)
    assert CENTURY_DIVISION.n_bound == 4481379377
    assert CENTURY_DIVISION.alpha_p * (1 << 32) < 1 << 64
    assert (YEAR_RESIDUAL.k, YEAR_RESIDUAL.alpha_p) == (52, 1531969483)
    assert YEAR_RESIDUAL.n_bound >= 1 << 32


def test_fast_kernel_leaves_inputs_untouched(cfg):
    rata = np.asarray(gen_rata(5, 200), dtype=np.int64)
    before = rata.copy()
    get_algorithm("fast").from_rata(cfg, rata)
    assert np.array_equal(rata, before)

    inputs = prepare_inputs(Direction.TO_RATA, cfg, 200, 5)
    copies = [a.copy() for a in inputs]
    get_algorithm("fast").to_rata(cfg, *inputs)
    assert all(np.array_equal(a, b) for a, b in zip(inputs, copies))
