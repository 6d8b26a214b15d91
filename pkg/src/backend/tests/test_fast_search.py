import random

import pytest
from hypothesis import given, settings, strategies as st

from src.backend.config import SEARCH_CAP
from src.backend.eaf_engine.eaf_core import Eaf
from src.backend.eaf_engine.fast_search import (
    DivConstants,
    FastEaf,
    RemConstants,
    Rounding,
    best_fast_eaf,
    certify_residual,
    classify_multiplier,
    fast_division,
    fast_eaf_down,
    fast_eaf_exact,
    fast_eaf_from_constants,
    fast_eaf_up,
    fast_remainder,
    find_min_k,
    remainder_for_bitwidth,
)
from src.backend.errors import (
    CertificateRefusedError,
    DomainError,
    ErrorCodes,
    SearchNotFoundError,
    UnsupportedParametersError,
)


@pytest.fixture
def month_count():
    return Eaf(153, -457, 5)


@pytest.fixture
def month_of_day():
    return Eaf(5, 461, 153)


def first_mismatch(f, c, stop):
    return next((r for r in range(stop) if f(r) != c.evaluate(r)), stop)


# =============================================================================
# General searches
# =============================================================================

@pytest.mark.parametrize("f, k, expected", [
    (Eaf(153, -457, 5), 5, (980, -2928, 12)),
    (Eaf(1, 0, 5), 8, (52, 0, 64)),
    (Eaf(1, 0, 1461), 32, (2939745, 0, 28825529)),
])
def test_fast_eaf_up_examples(f, k, expected):
    c = fast_eaf_up(f, k)
    assert (c.alpha_p, c.beta_p, c.n_bound) == expected
    assert c.rounding == Rounding.UP


@pytest.mark.parametrize("f, k, expected", [
    (Eaf(153, -457, 5), 5, (979, -2919, 34)),
    (Eaf(5, 461, 153), 16, (2141, 197913, 734)),
    (Eaf(1, 0, 3), 2, (1, 1, 6)),
])
def test_fast_eaf_down_examples(f, k, expected):
    c = fast_eaf_down(f, k)
    assert (c.alpha_p, c.beta_p, c.n_bound) == expected
    assert c.rounding == Rounding.DOWN


def test_down_constants_are_tight_for_thirds():
    f = Eaf(1, 0, 3)
    assert first_mismatch(f, fast_eaf_down(f, 2), 64) == 6


def test_epsilon_matches_rounding(month_count):
    up = fast_eaf_up(month_count, 5)
    down = fast_eaf_down(month_count, 5)
    scaled = 153 << 5
    assert up.alpha_p * 5 - scaled == up.epsilon
    assert scaled - down.alpha_p * 5 == down.epsilon > 0


def test_down_rejects_exact_multiples():
    with pytest.raises(DomainError) as err:
        fast_eaf_down(Eaf(1, 0, 4), 2)
    assert "fast_eaf_exact" in err.value.message


@pytest.mark.parametrize("search", [fast_eaf_up, fast_eaf_down, best_fast_eaf])
def test_searches_require_positive_delta(search):
    with pytest.raises(DomainError):
        search(Eaf(1, 0, -3), 4)


def test_shift_range_is_checked(month_count):
    with pytest.raises(DomainError):
        fast_eaf_up(month_count, 64)
    with pytest.raises(DomainError):
        fast_eaf_up(month_count, -1)


def test_exact_form_for_power_of_two():
    c = fast_eaf_exact(Eaf(1, 0, 2), 1)
    assert (c.alpha_p, c.beta_p, c.epsilon) == (1, 0, 0)
    assert c.rounding == Rounding.EXACT
    assert c.n_bound == SEARCH_CAP


def test_exact_form_with_offset():
    f = Eaf(3, 5, 8)
    c = fast_eaf_exact(f, 3)
    assert c.alpha_p == 3
    assert all(f(r) == c.evaluate(r) for r in range(-64, 1000))


def test_exact_requires_divisibility():
    with pytest.raises(DomainError):
        fast_eaf_exact(Eaf(1, 0, 3), 4)


@pytest.mark.parametrize("f, k, rounding, n_bound", [
    (Eaf(153, -457, 5), 5, Rounding.DOWN, 34),
    (Eaf(5, 461, 153), 16, Rounding.UP, 1560),
    (Eaf(1, 0, 2), 1, Rounding.EXACT, SEARCH_CAP),
])
def test_best_fast_eaf_examples(f, k, rounding, n_bound):
    c = best_fast_eaf(f, k)
    assert c.rounding == rounding
    assert c.n_bound == n_bound


def test_month_count_prefers_round_up_at_16_bits():
    c = best_fast_eaf(Eaf(5, 461, 153), 16)
    assert (c.alpha_p, c.beta_p, c.rounding) == (2142, 197428, Rounding.UP)
    assert fast_eaf_down(Eaf(5, 461, 153), 16).n_bound == 734


def test_equal_epsilons_break_toward_up():
    # 2^k % delta == delta/2 only for delta = 2^(k+1)
    for delta in (4, 8, 16, 32, 64):
        for beta in range(delta):
            f = Eaf(3, beta, delta)
            k = delta.bit_length() - 2
            up, down = fast_eaf_up(f, k), fast_eaf_down(f, k)
            best = best_fast_eaf(f, k)
            expected = Rounding.UP if up.n_bound >= down.n_bound else Rounding.DOWN
            assert best.rounding == expected


def test_heuristic_picks_smaller_epsilon(month_count):
    assert best_fast_eaf(month_count, 5, heuristic=True).rounding == Rounding.DOWN
    assert best_fast_eaf(Eaf(1, 0, 8), 5, heuristic=True).rounding == Rounding.EXACT


def test_heuristic_never_beats_exact_selection():
    rng = random.Random(11)
    agree = total = 0
    while total < 300:
        delta = rng.randint(3, 1000)
        k = rng.randint(1, 20)
        rem = (1 << k) % delta
        if rem == 0 or rem * 2 == delta:
            continue
        f = Eaf(1, 0, delta)
        up, down = fast_eaf_up(f, k), fast_eaf_down(f, k)
        best = best_fast_eaf(f, k)
        guess = best_fast_eaf(f, k, heuristic=True)
        assert best.n_bound == max(up.n_bound, down.n_bound)
        assert guess.n_bound <= best.n_bound
        assert guess.rounding == (Rounding.DOWN if rem < delta - rem else Rounding.UP)
        agree += guess.n_bound == best.n_bound
        total += 1
    # smaller epsilon wins about three times in four for plain division
    assert total // 2 < agree < total


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 300), st.integers(-2000, 2000), st.integers(1, 300), st.integers(0, 24))
def test_searched_bounds_are_sound(alpha, beta, delta, k):
    f = Eaf(alpha, beta, delta)
    c = best_fast_eaf(f, k)
    stop = min(c.n_bound, 5000)
    assert all(f(r) == c.evaluate(r) for r in range(stop))


def test_fast_eaf_serialisation(month_of_day):
    c = fast_eaf_down(month_of_day, 16)
    data = c.to_dict()
    assert set(data) == {"alpha_p", "beta_p", "k", "n_bound", "epsilon", "rounding"}
    assert data["rounding"] == "down"
    assert FastEaf.from_dict(data) == c
    assert c.as_eaf() == Eaf(2141, 197913, 1 << 16)


def test_classify_multiplier(month_count):
    assert classify_multiplier(month_count, 980, 5) == (Rounding.UP, 980 * 5 - (153 << 5))
    assert classify_multiplier(month_count, 979, 5) == (Rounding.DOWN, (153 << 5) - 979 * 5)
    with pytest.raises(DomainError):
        classify_multiplier(month_count, 900, 5)
    c = fast_eaf_from_constants(month_count, 979, -2919, 5, 34)
    assert c == fast_eaf_down(month_count, 5)


# =============================================================================
# Division and remainder by a constant
# =============================================================================

@pytest.mark.parametrize("delta, k, expected", [
    (1461, 32, (2939745, 149, 28825529)),
    (1461, 39, (376287347, 79, 6958934390)),
    (3600, 32, (1193047, 1904, 2257199)),
])
def test_fast_division_examples(delta, k, expected):
    c = fast_division(delta, k)
    assert (c.alpha_p, c.epsilon, c.n_bound) == expected


@pytest.mark.parametrize("delta, n_bound", [(3600, 2257199), (60, 97612919), (10, 1073741829)])
def test_time_of_day_division_bounds(delta, n_bound):
    assert fast_division(delta, 32).n_bound == n_bound


@given(st.integers(1, 10**6), st.integers(20, 63))
def test_division_algebra(delta, k):
    try:
        c = fast_division(delta, k)
    except UnsupportedParametersError:
        return
    assert c.alpha_p * c.delta == (1 << k) + c.epsilon
    assert 0 < c.epsilon <= c.alpha_p


def test_division_agrees_with_search():
    assert fast_division(1461, 32).n_bound == fast_eaf_up(Eaf(1, 0, 1461), 32).n_bound
    assert fast_division(5, 8).n_bound == 64


def test_division_bound_holds_near_the_edge():
    c = fast_division(1461, 32)
    for n in range(c.n_bound - 3000, c.n_bound):
        assert c.divide(n) == n // 1461
    assert c.divide(c.n_bound) != c.n_bound // 1461


def test_unsupported_division_suggests_larger_k():
    with pytest.raises(UnsupportedParametersError) as err:
        fast_division(1461, 10)
    suggested = err.value.data["suggested_k"]
    assert suggested > 10
    assert fast_division(1461, suggested).epsilon <= fast_division(1461, suggested).alpha_p
    assert err.value.code == ErrorCodes.USAGE_ERROR


def test_division_rejects_bad_divisor():
    with pytest.raises(DomainError):
        fast_division(0, 8)
    with pytest.raises(DomainError):
        fast_remainder(-5, 8)


def test_division_views():
    c = fast_division(1461, 32)
    assert DivConstants.from_dict(c.to_dict()) == c
    fast = c.to_fast_eaf()
    assert (fast.alpha_p, fast.beta_p, fast.k, fast.n_bound) == (2939745, 0, 32, 28825529)
    assert fast.rounding == Rounding.UP


@pytest.mark.parametrize("delta, m_bound", [(3600, 2255761), (60, 97612894), (10, 1073741824)])
def test_fast_remainder_examples(delta, m_bound):
    c = fast_remainder(delta, 32)
    assert c.m_bound == m_bound
    assert c.m_bound <= fast_division(delta, 32).n_bound
    assert RemConstants.from_dict(c.to_dict()) == c


def test_remainder_values():
    c = fast_remainder(60, 32)
    for n in list(range(5000)) + list(range(c.m_bound - 5000, c.m_bound)):
        assert c.remainder(n) == n % 60


def test_remainder_for_bitwidth_small():
    c = remainder_for_bitwidth(10, 3, 8)
    assert (c.k, c.alpha_p) == (6, 7)
    assert all(c.remainder(n) == n % 10 for n in range(8))
    assert remainder_for_bitwidth(2, 4, 8).k == 5


def test_remainder_for_bitwidth_covers_all_inputs():
    c = remainder_for_bitwidth(60, 16, 32)
    assert c.m_bound >= 1 << 16
    assert all(c.remainder(n) == n % 60 for n in range(1 << 16))


def test_remainder_for_bitwidth_errors():
    with pytest.raises(DomainError):
        remainder_for_bitwidth(0, 8, 8)
    with pytest.raises(DomainError):
        remainder_for_bitwidth(10, -1, 8)
    with pytest.raises(SearchNotFoundError):
        remainder_for_bitwidth(7, 16, 0)


# =============================================================================
# Minimal shift
# =============================================================================

def test_find_min_k_for_32_bit_years():
    k, c = find_min_k(Eaf(1, 0, 1461), 1 << 32)
    assert k == 39
    assert isinstance(c, DivConstants)
    assert (c.alpha_p, c.n_bound) == (376287347, 6958934390)


def test_find_min_k_is_minimal():
    k, c = find_min_k(Eaf(1, 0, 1461), 146100)
    assert k <= 32
    assert c.n_bound >= 146100
    try:
        assert fast_division(1461, k - 1).n_bound < 146100
    except UnsupportedParametersError:
        pass


def test_find_min_k_power_of_two():
    k, c = find_min_k(Eaf(1, 0, 2), 1000)
    assert k == 1
    assert c.rounding == Rounding.EXACT


def test_find_min_k_general_eaf(month_of_day):
    k, c = find_min_k(month_of_day, 734)
    assert c.n_bound >= 734
    assert k <= 16


def test_find_min_k_not_found_reports_best():
    with pytest.raises(SearchNotFoundError) as err:
        find_min_k(Eaf(1, 0, 1461), 1 << 40, k_max=20)
    assert err.value.data["best_n"] >= 0
    assert err.value.data["best_k"] <= 20


def test_find_min_k_validates_arguments():
    with pytest.raises(DomainError):
        find_min_k(Eaf(1, 0, 3), 0)
    with pytest.raises(DomainError):
        find_min_k(Eaf(1, 0, 3), 10, k_max=64)


# =============================================================================
# Residual certificates
# =============================================================================

def test_certify_year_residual():
    f = Eaf(1, 0, 1461)
    cert = certify_residual(f, fast_division(1461, 32).to_fast_eaf(), 0, 28825529)
    for r in (0, 1460, 1461, 146096, 28825528):
        assert cert.residual(r) == r % 1461
    assert cert.to_dict()["hi"] == 28825529


def test_certify_month_residual(month_of_day):
    cert = certify_residual(month_of_day, fast_eaf_down(month_of_day, 16), 0, 734)
    for r in range(734):
        assert cert.residual(r) == month_of_day.residual(r) // 5


def test_certify_power_of_two():
    f = Eaf(1, 0, 4)
    cert = certify_residual(f, fast_eaf_exact(f, 2), 0, 1024)
    assert all(cert.residual(r) == r % 4 for r in range(1024))


@pytest.mark.parametrize("delta", [3600, 60, 10])
def test_certify_time_of_day(delta):
    c = fast_division(delta, 32).to_fast_eaf()
    cert = certify_residual(Eaf(1, 0, delta), c, 0, c.n_bound)
    assert cert.residual(c.n_bound - 1) == (c.n_bound - 1) % delta


def test_certificate_refuses_unaligned_start(month_of_day):
    with pytest.raises(CertificateRefusedError) as err:
        certify_residual(month_of_day, fast_eaf_down(month_of_day, 16), 1, 734)
    assert err.value.hypothesis == "a = f^(f(a))"
    assert err.value.code == ErrorCodes.VERIFICATION_FAILED


def test_certificate_refuses_flat_start():
    f = Eaf(1, 0, 4)
    flat = FastEaf(1, 1, 2, 3, 0, Rounding.EXACT)
    with pytest.raises(CertificateRefusedError) as err:
        certify_residual(f, flat, 0, 3)
    assert err.value.hypothesis == "f'(a-1) < f'(a)"


def test_certificate_refuses_disagreement():
    f = Eaf(1, 0, 4)
    shifted = FastEaf(1, 0, 2, 10, 0, Rounding.EXACT)
    assert certify_residual(f, shifted, 0, 10)
    wrong = FastEaf(2, 0, 2, 10, 0, Rounding.EXACT)
    with pytest.raises(CertificateRefusedError) as err:
        certify_residual(Eaf(1, 0, 4), wrong, 0, 10)
    assert err.value.hypothesis == "f == f' on [a, b)"


def test_certificate_preconditions():
    with pytest.raises(DomainError):
        certify_residual(Eaf(6, 1, 5), fast_eaf_up(Eaf(6, 1, 5), 8), 0, 10)
    with pytest.raises(DomainError):
        certify_residual(Eaf(1, 0, 4), fast_eaf_exact(Eaf(1, 0, 4), 2), 5, 5)


def test_certificate_residual_outside_interval(month_of_day):
    cert = certify_residual(month_of_day, fast_eaf_down(month_of_day, 16), 0, 734)
    with pytest.raises(DomainError):
        cert.residual(734)
