import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mubargmann.exceptions import BesselUnderflowWarning, DomainError, RangeError
from mubargmann.special_functions import (
    EULER_GAMMA,
    RealOrder,
    bessel_k,
    bessel_k_reflection,
    bessel_k_scaled,
    digamma,
    gamma_ratio,
    k_moment,
    log_bessel_k,
    log_gamma,
)

mpmath.mp.dps = 30

# K_0.75(1.5) from the cosh integral representation, integrated in 40-digit arithmetic
K_075_15 = 0.24773741667982674946


class TestLogGamma:
    @pytest.mark.parametrize(
        "x, expected",
        [(1.0, 0.0), (0.5, 0.5723649429247001), (7.0, math.log(720.0))],
    )
    def test_reference_values(self, x, expected):
        assert log_gamma(x) == pytest.approx(expected, abs=1e-15)

    @given(st.floats(min_value=-6, max_value=8))
    def test_relative_accuracy(self, e):
        x = 10.0**e
        ref = float(mpmath.loggamma(x))
        assert abs(log_gamma(x) - ref) <= 1e-13 * max(abs(ref), 1e-300) + 1e-15

    def test_accuracy_near_zeros_of_log_gamma(self):
        for x in np.linspace(0.9, 2.1, 241):
            ref = float(mpmath.loggamma(x))
            assert abs(log_gamma(x) - ref) <= 1e-13 * abs(ref) + 2e-17

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            log_gamma(bad)

    def test_ratio_survives_huge_arguments(self):
        ref = float(mpmath.gamma(10_000.5) / mpmath.gamma(10_000.0))
        assert gamma_ratio(10_000.5, 10_000.0) == pytest.approx(ref, rel=1e-11)


class TestDigamma:
    @pytest.mark.parametrize(
        "x, expected",
        [
            (1.0, -EULER_GAMMA),
            (0.5, -EULER_GAMMA - 2 * math.log(2)),
            (4.0, -EULER_GAMMA + 1 + 1 / 2 + 1 / 3),
        ],
    )
    def test_reference_values(self, x, expected):
        assert digamma(x) == pytest.approx(expected, abs=1e-12)

    @given(st.floats(min_value=-2, max_value=8))
    def test_against_mpmath(self, e):
        x = 10.0**e
        ref = float(mpmath.digamma(x))
        assert abs(digamma(x) - ref) <= 1e-12 * max(1.0, abs(ref))

    def test_recurrence_on_random_points(self):
        rng = np.random.default_rng(7)
        for x in rng.uniform(1e-3, 100.0, size=1000):
            assert abs(digamma(x + 1) - 1 / x - digamma(x)) <= 1e-11 * max(1.0, 1 / x)

    def test_domain(self):
        with pytest.raises(DomainError):
            digamma(0.0)


X_GRID = (0.01, 0.1, 1.0, 10.0, 100.0, 1000.0)


class TestDigammaInequalities:
    @pytest.mark.parametrize("x", X_GRID)
    @pytest.mark.parametrize("m", range(1, 11))
    def test_shifted_upper_and_lower_bound(self, x, m):
        d = digamma(x + m) - math.log(x)
        assert 0 < d < (2 * m - 1) / (2 * x)

    @pytest.mark.parametrize("x", X_GRID)
    def test_unshifted_bracket(self, x):
        d = digamma(x) - math.log(x)
        assert -1 / x < d < -1 / (2 * x)

    @given(st.floats(min_value=-2, max_value=3), st.integers(min_value=1, max_value=10))
    def test_random_points(self, e, m):
        x = 10.0**e
        assert 0 < digamma(x + m) - math.log(x) < (2 * m - 1) / (2 * x)
        assert -1 / x < digamma(x) - math.log(x) < -1 / (2 * x)

    @pytest.mark.parametrize("y", [0.3, 0.7, 2.5])
    def test_shifted_difference_vanishes(self, y):
        errs = [abs(digamma(10.0**k + y) - math.log(10.0**k)) for k in range(1, 7)]
        assert all(b < a for a, b in zip(errs, errs[1:]))
        assert errs[-1] < 1e-5


class TestBesselK:
    def test_half_order_closed_form(self):
        assert bessel_k(0.5, 1.0) == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1), rel=1e-14)
        assert bessel_k(-0.5, 2.0) == pytest.approx(math.sqrt(math.pi / 4) * math.exp(-2), rel=1e-14)

    def test_against_integral_representation(self):
        assert bessel_k(0.75, 1.5) == pytest.approx(K_075_15, rel=1e-12)

    @given(st.floats(min_value=-50, max_value=50), st.floats(min_value=-6, max_value=math.log10(700)))
    def test_against_mpmath(self, alpha, e):
        x = 10.0**e
        ref = mpmath.log(mpmath.besselk(alpha, x))
        assert abs(log_bessel_k(alpha, x) - float(ref)) <= 1e-10 * max(1.0, abs(float(ref)))

    @pytest.mark.parametrize("alpha", [0.0, 1.0, 2.0, 3.0, 0.9999999, 1.0000001])
    @pytest.mark.parametrize("x", [1e-4, 0.3, 1.9, 2.1, 30.0])
    def test_integer_and_near_integer_orders(self, alpha, x):
        ref = float(mpmath.besselk(alpha, x))
        assert bessel_k(alpha, x) == pytest.approx(ref, rel=1e-12)

    @given(st.floats(min_value=-50, max_value=50), st.floats(min_value=1e-3, max_value=100))
    def test_even_in_order(self, alpha, x):
        assert bessel_k(alpha, x) == bessel_k(-alpha, x)

    @pytest.mark.parametrize("alpha", [-0.4, 0.0, 0.5, 1.3])
    def test_positive_and_decreasing(self, alpha):
        xs = np.linspace(0.01, 50.0, 400)
        vals = [bessel_k(alpha, x) for x in xs]
        assert all(v > 0 for v in vals)
        assert all(b < a for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("alpha, x", [(0.3, 0.2), (1.7, 1.1), (-2.4, 0.5)])
    def test_reflection_formula_agrees(self, alpha, x):
        assert bessel_k_reflection(alpha, x) == pytest.approx(bessel_k(alpha, x), rel=1e-10)

    def test_reflection_rejects_integer_order(self):
        with pytest.raises(DomainError):
            bessel_k_reflection(2.0000000001, 1.0)

    def test_scaled_variant(self):
        assert bessel_k_scaled(0.5, 600.0) == pytest.approx(math.sqrt(math.pi / 1200.0), rel=1e-13)

    def test_underflow_flag(self):
        with pytest.warns(BesselUnderflowWarning):
            assert bessel_k(0.0, 800.0) == 0.0
        assert math.isfinite(log_bessel_k(0.0, 800.0))

    def test_overflow_is_inf_but_log_is_finite(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert bessel_k(50.0, 1e-6) == math.inf
        assert log_bessel_k(50.0, 1e-6) == pytest.approx(float(mpmath.log(mpmath.besselk(50, 1e-6))), rel=1e-12)

    def test_errors(self):
        with pytest.raises(DomainError):
            bessel_k(0.5, 0.0)
        with pytest.raises(RangeError):
            bessel_k(50.5, 1.0)
        with pytest.raises(DomainError):
            RealOrder(math.nan)


class TestKMoment:
    @pytest.mark.parametrize(
        "alpha, beta, expected",
        [
            (0.5, 1.5, math.sqrt(math.pi / 2)),
            (0.0, 2.0, 1.0),
            (1.0, 2.0, math.pi / 2),
        ],
    )
    def test_closed_form(self, alpha, beta, expected):
        assert k_moment(alpha, beta) == pytest.approx(expected, rel=1e-14)

    def test_against_mpmath_quadrature(self):
        ref = mpmath.quad(lambda s: mpmath.besselk(0.3, s) * s**1.2, [0, 1, mpmath.inf])
        assert k_moment(0.3, 2.2) == pytest.approx(float(ref), rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            k_moment(1.0, 1.0)
