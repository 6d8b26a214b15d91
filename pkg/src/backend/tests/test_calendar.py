import pytest
from hypothesis import given, strategies as st

from src.backend.calendar_engine.gregorian import (
    LEAP_CYCLE_DAYS,
    CalendarConfig,
    CompDate,
    Date,
    TimeOfDay,
    default_config,
    format_date,
    from_computational,
    from_rata_die,
    inv_rata_die_comp,
    inv_rata_die_comp_plain,
    is_leap,
    month_count,
    month_length,
    next_day,
    parse_date,
    previous_day,
    rata_die_comp,
    rata_die_comp_plain,
    seconds_to_hms,
    to_computational,
    to_rata_die,
)
from src.backend.calendar_engine.oracle import oracle_from_rata_die, oracle_rata_die
from src.backend.errors import DateParseError, DomainError


@pytest.fixture
def cfg():
    return default_config()


# =============================================================================
# Leap years and months
# =============================================================================

@pytest.mark.parametrize("year, leap", [
    (2000, True), (1900, False), (2024, True), (2023, False),
    (0, True), (-4, True), (-100, False), (-400, True),
])
def test_is_leap(year, leap):
    assert is_leap(year) is leap


def test_month_length():
    assert month_length(2024, 2) == 29
    assert month_length(2100, 2) == 28
    assert month_length(2023, 4) == 30
    with pytest.raises(DomainError):
        month_length(2023, 13)


def test_month_count_matches_cumulative_lengths():
    lengths = [31, 30, 31, 30, 31, 31, 30, 31, 30, 31, 31]
    total = 0
    for m0, length in zip(range(3, 15), [0] + lengths):
        total += length
        assert month_count(m0) == total
    assert month_count(13) == 306
    assert month_count(14) == 337


def test_date_validation():
    with pytest.raises(DomainError):
        Date(2023, 2, 29)
    with pytest.raises(DomainError):
        Date(2023, 4, 31)
    assert Date(2024, 2, 29).day == 29


def test_dates_order_chronologically():
    assert Date(-1, 12, 31) < Date(0, 1, 1) < Date(1970, 1, 1) < Date(1970, 1, 2)


# =============================================================================
# Computational calendar
# =============================================================================

@pytest.mark.parametrize("date, comp", [
    (Date(2024, 3, 1), CompDate(2024, 3, 0)),
    (Date(2024, 1, 15), CompDate(2023, 13, 14)),
    (Date(2024, 2, 29), CompDate(2023, 14, 28)),
    (Date(2023, 12, 31), CompDate(2023, 12, 30)),
])
def test_to_and_from_computational(date, comp):
    assert to_computational(date) == comp
    assert from_computational(comp) == date


def test_comp_date_february_follows_next_year():
    assert CompDate(3, 14, 28).d0 == 28
    with pytest.raises(DomainError):
        CompDate(4, 14, 28)
    with pytest.raises(DomainError):
        CompDate(0, 2, 0)


@pytest.mark.parametrize("comp, r0", [
    (CompDate(0, 3, 0), 0),
    (CompDate(0, 13, 0), 306),
    (CompDate(0, 14, 0), 337),
    (CompDate(1, 3, 0), 365),
    (CompDate(3, 3, 0), 1095),
    (CompDate(4, 3, 0), 1461),
])
def test_rata_die_comp_examples(comp, r0):
    assert rata_die_comp(comp) == r0
    assert rata_die_comp_plain(comp) == r0
    assert inv_rata_die_comp(r0) == comp


def test_inverse_rejects_out_of_domain():
    with pytest.raises(DomainError):
        inv_rata_die_comp(-1)
    with pytest.raises(DomainError):
        inv_rata_die_comp(1 << 31)


@pytest.mark.slow
def test_inverse_matches_plain_division_over_two_cycles():
    for r0 in range(2 * LEAP_CYCLE_DAYS):
        assert inv_rata_die_comp(r0) == inv_rata_die_comp_plain(r0)


@given(st.integers(0, 70_000), st.integers(3, 14), st.integers(0, 27))
def test_forward_matches_plain_division(y0, m0, d0):
    comp = CompDate(y0, m0, d0)
    assert rata_die_comp(comp) == rata_die_comp_plain(comp)
    assert inv_rata_die_comp(rata_die_comp(comp)) == comp


# =============================================================================
# Rata die
# =============================================================================

def test_default_config(cfg):
    assert cfg.z2 == -32800
    assert cfg.epoch_offset == 12699422
    assert CalendarConfig.default() is cfg


@pytest.mark.parametrize("date, rata", [
    (Date(1970, 1, 1), 0),
    (Date(1970, 1, 2), 1),
    (Date(1969, 12, 31), -1),
    (Date(1969, 1, 1), -365),
    (Date(1972, 3, 1), 790),
    (Date(2000, 1, 1), 10957),
    (Date(2000, 3, 1), 11017),
])
def test_rata_die_examples(cfg, date, rata):
    assert to_rata_die(cfg, date) == rata
    assert from_rata_die(cfg, rata) == date
    assert oracle_rata_die(cfg, date) == rata
    assert oracle_from_rata_die(cfg, rata) == date


@given(st.integers(-32367, 32367), st.integers(1, 12), st.integers(1, 28))
def test_four_hundred_years_shift_by_one_cycle(year, month, day):
    cfg = default_config()
    r = to_rata_die(cfg, Date(year, month, day))
    assert to_rata_die(cfg, Date(year + 400, month, day)) == r + LEAP_CYCLE_DAYS


def test_range_edges(cfg):
    first = Date(cfg.year_min, 1, 1)
    last = Date(cfg.year_max, 12, 31)
    assert from_rata_die(cfg, cfg.rata_min) == first
    assert from_rata_die(cfg, cfg.rata_max - 1) == last
    assert oracle_rata_die(cfg, first) == cfg.rata_min
    assert oracle_rata_die(cfg, last) == cfg.rata_max - 1
    with pytest.raises(DomainError):
        from_rata_die(cfg, cfg.rata_max)
    with pytest.raises(DomainError):
        from_rata_die(cfg, cfg.rata_min - 1)
    with pytest.raises(DomainError):
        to_rata_die(cfg, Date(cfg.year_max + 1, 1, 1))


@pytest.mark.slow
def test_round_trip_against_oracle_over_one_cycle_each_side(cfg):
    date = oracle_from_rata_die(cfg, -LEAP_CYCLE_DAYS)
    for r in range(-LEAP_CYCLE_DAYS, LEAP_CYCLE_DAYS):
        assert to_rata_die(cfg, date) == r
        assert from_rata_die(cfg, r) == date
        date = next_day(date)


@given(st.integers(-12_000_000, 11_000_000))
def test_agrees_with_oracle_far_from_epoch(r):
    cfg = default_config()
    date = from_rata_die(cfg, r)
    assert oracle_from_rata_die(cfg, r) == date
    assert to_rata_die(cfg, date) == r


def test_custom_epoch():
    cfg = CalendarConfig.with_epoch("2000-03-01", z2=-400, year_min=-399, year_max=2399)
    assert to_rata_die(cfg, Date(2000, 3, 1)) == 0
    assert from_rata_die(cfg, -1) == Date(2000, 2, 29)
    assert oracle_rata_die(cfg, Date(2001, 3, 1)) == 365


@pytest.mark.parametrize("kwargs", [
    {"z2": -100, "epoch_offset": 0},
    {"z2": -400, "epoch_offset": -1},
    {"z2": -400, "epoch_offset": 0, "year_min": 10, "year_max": 0},
    {"z2": 0, "epoch_offset": 0, "year_min": -5, "year_max": 10},
])
def test_config_validation(kwargs):
    with pytest.raises(DomainError):
        CalendarConfig(**kwargs)


def test_neighbouring_days():
    assert next_day(Date(2000, 2, 28)) == Date(2000, 2, 29)
    assert next_day(Date(1900, 2, 28)) == Date(1900, 3, 1)
    assert next_day(Date(1999, 12, 31)) == Date(2000, 1, 1)
    assert previous_day(Date(2000, 3, 1)) == Date(2000, 2, 29)
    assert previous_day(Date(0, 1, 1)) == Date(-1, 12, 31)


# =============================================================================
# Text and time of day
# =============================================================================

@pytest.mark.parametrize("text, date", [
    ("1970-01-01", Date(1970, 1, 1)),
    ("-0044-03-15", Date(-44, 3, 15)),
    ("+12345-06-07", Date(12345, 6, 7)),
    ("0005-01-02", Date(5, 1, 2)),
])
def test_parse_date(text, date):
    assert parse_date(text) == date


@pytest.mark.parametrize("text", ["1970-1-1", "70-01-01", "2023-02-29", "2023-13-01", "yesterday", "", "１９７０-01-01", "1970-١٢-01"])
def test_parse_date_rejects(text):
    with pytest.raises(DateParseError):
        parse_date(text)


def test_format_date():
    assert format_date(Date(5, 1, 2)) == "0005-01-02"
    assert format_date(Date(-44, 3, 15)) == "-0044-03-15"
    assert str(Date(12345, 6, 7)) == "12345-06-07"


@pytest.mark.parametrize("n, hms", [
    (0, (0, 0, 0)),
    (3661, (1, 1, 1)),
    (45296, (12, 34, 56)),
    (86399, (23, 59, 59)),
])
def test_seconds_to_hms(n, hms):
    assert seconds_to_hms(n) == TimeOfDay(*hms)


def test_seconds_to_hms_rejects_out_of_day():
    with pytest.raises(DomainError):
        seconds_to_hms(86400)
    with pytest.raises(DomainError):
        seconds_to_hms(-1)
