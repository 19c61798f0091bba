import logging
import math
from fractions import Fraction
from itertools import combinations

import mpmath
import pytest

from twinsieve import symmetric
from twinsieve._exceptions import DomainError, PowerSumMismatchError, RationalBlowupError
from twinsieve.primes import Backend, odd_primes_up_to, power_sum
from twinsieve.symmetric import (
    MEISSEL_MERTENS,
    AsymptoticContext,
    check_identities,
    esp_direct,
    esp_recursive,
    esp_via_newton,
    leading_order_f,
    mertens_partial,
    odd_prime_zeta,
    second_order_f2,
)


RATIONAL = Backend.RATIONAL
FLOAT = Backend.FLOAT


def subset_sum(z: int, t: int) -> Fraction:
    """f(t;z) by enumerating every t-subset of the odd primes up to z."""
    return sum(
        (Fraction(1, math.prod(subset)) for subset in combinations(odd_primes_up_to(z), t)),
        Fraction(0),
    )


def newton_series(z: int, t_max: int, backend: Backend):
    sums = [power_sum(k, z, backend) for k in range(1, t_max + 1)]
    return esp_via_newton(sums, t_max, z=z)


def test_empty_variable_set():
    series = esp_direct(2, 5)
    assert series.values == (1, 0, 0, 0, 0, 0)
    assert series.odd_prime_count == 0


def test_direct_by_hand():
    series = esp_direct(10, 3, RATIONAL)
    assert series.values == (1, Fraction(71, 105), Fraction(1, 7), Fraction(1, 105))
    assert series.backend is RATIONAL


def test_direct_at_31():
    series = esp_direct(31, 4)
    expected = [1.0, 1.065697, 0.469830, 0.113811, 0.016906]
    assert [float(v) for v in series.values] == pytest.approx(expected, abs=1e-6)


def test_direct_matches_subset_enumeration():
    for z in range(2, 51):
        series = esp_direct(z, 5, RATIONAL)
        for t in range(6):
            assert series[t] == subset_sum(z, t), (z, t)


def test_newton_examples():
    series = newton_series(10, 2, RATIONAL)
    assert series[2] == Fraction(1, 7)
    assert esp_via_newton([], 0, z=10).values == (1,)
    assert newton_series(31, 4, RATIONAL).values == esp_direct(31, 4, RATIONAL).values


def test_newton_rejects_mismatched_sums():
    with pytest.raises(PowerSumMismatchError):
        esp_via_newton([power_sum(1, 10), power_sum(2, 11)], 2)
    with pytest.raises(PowerSumMismatchError):
        esp_via_newton([power_sum(1, 10)], 2)
    with pytest.raises(PowerSumMismatchError):
        esp_via_newton([power_sum(1, 10, RATIONAL), power_sum(2, 10, FLOAT)], 2)


def test_recursive_examples():
    assert esp_recursive(0, 31) == 1
    assert esp_recursive(2, 10) == Fraction(1, 7)
    assert esp_recursive(3, 31) == esp_direct(31, 3)[3]


@pytest.mark.parametrize("z", [2, 10, 31, 100, 500])
def test_three_routes_agree_exactly(z):
    direct = esp_direct(z, 8, RATIONAL)
    assert newton_series(z, 8, RATIONAL).values == direct.values
    assert tuple(esp_recursive(t, z, RATIONAL) for t in range(9)) == direct.values


@pytest.mark.parametrize("z", [3, 211, 997, 1000])
def test_direct_and_newton_agree_up_to_1000(z):
    assert newton_series(z, 8, RATIONAL).values == esp_direct(z, 8, RATIONAL).values


def test_rational_cap():
    with pytest.raises(RationalBlowupError, match="z <= 1000"):
        esp_direct(2000, 4, RATIONAL, rational_cap=1000)
    assert esp_direct(2000, 4, FLOAT, rational_cap=1000)[1] > 0
    with pytest.raises(DomainError):
        esp_direct(10, -1)


def test_rational_blowup_warning(monkeypatch, caplog):
    monkeypatch.setattr(symmetric, "RATIONAL_WARN_Z", 10)
    monkeypatch.setattr(symmetric, "RATIONAL_WARN_T", 2)
    with caplog.at_level(logging.WARNING):
        esp_direct(31, 3, RATIONAL)
    assert "huge denominators" in caplog.text
    caplog.clear()
    with caplog.at_level(logging.WARNING):
        esp_direct(31, 2, RATIONAL)
        esp_direct(31, 3, FLOAT)
    assert caplog.text == ""


def test_zero_tail():
    series = esp_direct(10, 6, RATIONAL)
    assert all(series[t] > 0 for t in range(4))
    assert series.values[4:] == (0, 0, 0)


@pytest.mark.parametrize("z", [100, 1000, 3000])
def test_float_matches_rational(z):
    exact = esp_direct(z, 8, RATIONAL)
    approx = esp_direct(z, 8, FLOAT)
    for t in range(9):
        assert abs(approx[t] - exact[t]) <= 1e-14 * exact[t]


def test_float_first_degree_is_compensated():
    # 9591 odd primes; the running sum must stay within a few ulps of fsum.
    direct = esp_direct(10**5, 1, FLOAT)[1]
    expected = math.fsum(1.0 / p for p in odd_primes_up_to(10**5))
    assert direct == pytest.approx(expected, rel=1e-15)


def test_alternating_sums_at_10():
    series = esp_direct(10, 3, RATIONAL)
    assert series.alternating_sum(2) == Fraction(1, 7)  # (1/3)(3/5)(5/7)
    assert series.alternating_sum(1) == Fraction(48, 105)  # (2/3)(4/5)(6/7)
    assert series.alternating_sum(1, t_max=1) == 1 - Fraction(71, 105)


def test_leading_order():
    assert leading_order_f(0, 10**6) == 1
    first = leading_order_f(1, 10**6)
    assert first == pytest.approx(math.log(math.log(10**6)) + MEISSEL_MERTENS - 0.5)
    assert first == pytest.approx(2.387, abs=1e-3)
    assert leading_order_f(2, 10**6) == pytest.approx(first**2 / 2)


def test_leading_order_domain():
    with pytest.raises(DomainError):
        leading_order_f(1, 2)
    with pytest.raises(DomainError):
        AsymptoticContext.from_limit(math.e)


def test_first_degree_approaches_asymptotic():
    def gap(z):
        return abs(esp_direct(z, 1, FLOAT)[1] - leading_order_f(1, z))

    assert gap(10**6) < gap(10**3)


def test_second_order_improves_f2():
    z = 10**6
    exact = esp_direct(z, 2, FLOAT)[2]
    assert abs(second_order_f2(z) - exact) < abs(leading_order_f(2, z) - exact)


def test_odd_prime_mertens_constant():
    ctx = AsymptoticContext.from_limit(100)
    assert ctx.M_odd == ctx.M - 0.5
    assert ctx.M_odd == pytest.approx(-0.2385, abs=1e-4)
    assert MEISSEL_MERTENS == pytest.approx(float(mpmath.mertens), abs=1e-15)


def test_mertens_partial_sum_converges_slowly():
    assert mertens_partial(10**6) == pytest.approx(MEISSEL_MERTENS, abs=1e-3)
    assert abs(mertens_partial(10**6) - MEISSEL_MERTENS) < abs(
        mertens_partial(10**3) - MEISSEL_MERTENS
    )


def test_odd_prime_zeta():
    assert odd_prime_zeta(2) == pytest.approx(0.4522474200410654 - 0.25, abs=1e-12)
    with pytest.raises(DomainError):
        odd_prime_zeta(1)


def test_identities_exact_at_10():
    report = check_identities(10, 3, backend=RATIONAL)
    assert report.all_passed
    assert all(residual == 0 for residual in report.residuals.values())


def test_identities_float_at_100():
    report = check_identities(100, 6, tolerance=1e-12, backend=FLOAT)
    assert report.all_passed
    assert max(report.residuals.values()) <= 1e-12


def test_identities_empty_set():
    report = check_identities(2, 4)
    assert report.all_passed
    assert esp_direct(2, 4).values == (1, 0, 0, 0, 0)


def test_identity_failure_is_reported(monkeypatch):
    monkeypatch.setattr(symmetric, "esp_recursive", lambda t, z, backend: Fraction(1))
    report = check_identities(10, 3, backend=RATIONAL)
    assert not report.all_passed
    assert not report.passed["direct_vs_recursive"]
    assert report.passed["direct_vs_newton"]
