import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mubargmann.entropy_energy import (
    EnergyValue,
    EntropyValue,
    SharpnessPoint,
    energy_xi,
    entropy_classical,
    entropy_gap_zeta1,
    entropy_limit_mu_infinity,
    entropy_monomial_ground,
    entropy_relation_half_plus_m,
    entropy_xi,
    entropy_xi_even,
    entropy_xi_odd,
    entropy_zeta1,
    log_entropy_monomial_ground,
    monomial_entropy_growth_error,
    s_vs_S_relation,
    sharpness_predictor,
    sharpness_sequence,
    sharpness_verdict,
)
from mubargmann.exceptions import DomainError, RangeError
from mubargmann.mu_core import log_gamma_mu
from mubargmann.special_functions import EULER_GAMMA, digamma

from conftest import MU_GRID

# independent 30-digit evaluations of the closed forms
ENTROPY_EVEN_4_MU1 = 2.036978930945155896659584
ENTROPY_ODD_3_MU_HALF = 1.325205824735456108763
MONOMIAL_ENTROPY_3_MU0 = 5.026614867212541419874
ENTROPY_EVEN_2_MU_HALF = 0.8455686701969342787870
GAP_MU2 = -0.8401861527733880239161
ENTROPY_ZETA1_NEAR_EDGE = 6.332183347171836580581

mus = st.floats(min_value=-0.49, max_value=20.0, allow_nan=False)


def harmonic_entropy(n):
    return n * (1.0 - EULER_GAMMA + math.fsum(1.0 / k for k in range(2, n + 1))) - math.lgamma(n + 1)


class TestValueTypes:
    def test_entropy_rejects_nan(self):
        with pytest.raises(RangeError):
            EntropyValue(1, 0.0, math.nan)

    def test_entropy_allows_negative(self):
        assert float(EntropyValue(1, 0.0, -3.0)) == -3.0

    def test_energy_must_be_positive(self):
        with pytest.raises(RangeError):
            EnergyValue(0, 0.0, 0.0)

    def test_sharpness_point_index_and_gap(self):
        p = SharpnessPoint(3, 1, 1.5, 0.0, 8.0, 2.0)
        assert p.index == 7
        assert p.gap == pytest.approx(5.0)


class TestEntropyClosedForms:
    def test_ground_index_is_zero(self, mu):
        assert entropy_xi_even(0, mu).value == 0.0
        assert entropy_xi(0, mu).value == 0.0

    def test_reference_values(self):
        assert entropy_xi_even(2, 1.0).value == pytest.approx(ENTROPY_EVEN_4_MU1, rel=1e-13)
        assert entropy_xi_odd(1, 0.5).value == pytest.approx(ENTROPY_ODD_3_MU_HALF, rel=1e-13)
        assert entropy_xi_even(1, 0.5).value == pytest.approx(ENTROPY_EVEN_2_MU_HALF, rel=1e-13)

    def test_returned_index_is_basis_index(self):
        assert entropy_xi_even(3, 0.0).n == 6
        assert entropy_xi_odd(3, 0.0).n == 7

    def test_classical_small_values(self):
        assert entropy_classical(1).value == pytest.approx(1 - EULER_GAMMA, abs=1e-14)
        assert entropy_classical(2).value == pytest.approx(3 - 2 * EULER_GAMMA - math.log(2), abs=1e-14)

    @pytest.mark.parametrize("n", range(0, 51))
    def test_classical_matches_harmonic_sum(self, n):
        assert entropy_classical(n).value == pytest.approx(harmonic_entropy(n), abs=1e-10)

    @pytest.mark.parametrize("n", range(0, 41))
    def test_mu_zero_is_classical(self, n):
        assert entropy_xi(n, 0.0).value == pytest.approx(entropy_classical(n).value, abs=1e-11)

    @pytest.mark.parametrize("n", range(0, 41))
    def test_unified_matches_parity_forms(self, n, mu):
        half, odd = divmod(n, 2)
        split = (entropy_xi_odd if odd else entropy_xi_even)(half, mu).value
        assert entropy_xi(n, mu).value == pytest.approx(split, abs=1e-12 * max(1.0, abs(split)))

    def test_bad_index(self):
        for bad in (-1, 1.5):
            with pytest.raises(DomainError):
                entropy_xi(bad, 0.0)

    def test_bad_mu(self):
        with pytest.raises(DomainError):
            entropy_xi(2, -0.5)

    @pytest.mark.parametrize("m", MU_GRID)
    def test_even_sequence_increasing_and_positive(self, m):
        values = np.array([entropy_xi_even(n, m).value for n in range(502)])
        assert np.all(np.diff(values) > 0)
        assert np.all(values[1:] > 0)

    @pytest.mark.parametrize("m", MU_GRID)
    def test_odd_sequence_increasing(self, m):
        values = np.array([entropy_xi_odd(n, m).value for n in range(502)])
        assert np.all(np.diff(values) > 0)

    @given(n=st.integers(0, 2000), m=mus)
    def test_even_step_is_between_zero_and_three(self, n, m):
        step = entropy_xi_even(n + 1, m).value - entropy_xi_even(n, m).value
        assert 0 < step < 3

    @pytest.mark.parametrize("n", range(0, 201))
    def test_duplication_identity(self, n):
        lhs = digamma((n + 1) / 2) + digamma((n + 2) / 2)
        rhs = 2 * digamma(n + 1.0) - 2 * math.log(2.0)
        assert lhs == pytest.approx(rhs, abs=1e-11)


class TestLimits:
    @pytest.mark.parametrize("m", MU_GRID)
    def test_even_difference_tends_to_two(self, m):
        errs = [abs(entropy_xi_even(n + 1, m).value - entropy_xi_even(n, m).value - 2) for n in (10, 100, 1000)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] <= 0.01

    @pytest.mark.parametrize("m", MU_GRID)
    def test_consecutive_difference_tends_to_one(self, m):
        grid = (500, 1000, 2000)
        errs = [abs(entropy_xi(2 * n + 1, m).value - entropy_xi(2 * n, m).value - 1) for n in grid]
        errs_back = [abs(entropy_xi(2 * n, m).value - entropy_xi(2 * n - 1, m).value - 1) for n in grid]
        assert errs[0] > errs[1] > errs[2] and errs[2] <= 0.01
        assert errs_back[0] > errs_back[1] > errs_back[2] and errs_back[2] <= 0.01

    @pytest.mark.parametrize("m", MU_GRID)
    def test_cross_parity_at_one_thousand(self, m):
        n = 1000
        assert abs(entropy_xi_odd(n, m).value - entropy_xi_even(n, m).value - 1) <= 0.02
        assert abs(entropy_xi_even(n, m).value - entropy_xi_odd(n - 1, m).value - 1) <= 0.02

    @pytest.mark.parametrize("m", MU_GRID)
    def test_cesaro(self, m):
        assert abs(entropy_xi(10_000, m).value / 10_000 - 1) <= 0.02

    @pytest.mark.parametrize("m", MU_GRID)
    def test_deformed_factorial_root_growth(self, m):
        bands = (2e-1, 2e-2, 3e-3)
        errs = [abs(math.exp(log_gamma_mu(n, m) / n) / n - math.exp(-1)) for n in (100, 1000, 10_000)]
        assert errs[0] > errs[1] > errs[2]
        assert all(e <= b for e, b in zip(errs, bands))

    def test_even_large_mu_limit(self):
        diffs = entropy_limit_mu_infinity(2, [1, 10, 100, 1000])
        errs = [abs(d) for d in diffs]
        assert errs == sorted(errs, reverse=True)
        assert errs[-1] < 1e-3

    @pytest.mark.parametrize("index", [2, 4, 8])
    def test_even_large_mu_limit_tail_monotone(self, index):
        errs = [abs(d) for d in entropy_limit_mu_infinity(index, [10, 100, 1000, 10_000])]
        assert all(a > b for a, b in zip(errs, errs[1:]))

    def test_odd_large_mu_decreases_through_negatives(self):
        values = entropy_limit_mu_infinity(1, [1, 10, 100, 1000])
        assert all(v < 0 for v in values)
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_index_zero_is_identically_zero(self):
        assert entropy_limit_mu_infinity(0, [0.1, 5, 50]) == [0.0, 0.0, 0.0]

    def test_grid_must_increase(self):
        with pytest.raises(DomainError):
            entropy_limit_mu_infinity(2, [10, 1])


class TestIdentities:
    @pytest.mark.parametrize("n", range(0, 11))
    @pytest.mark.parametrize("m", range(0, 11))
    def test_half_plus_m_relation(self, n, m):
        lhs, rhs = entropy_relation_half_plus_m(n, m)
        assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_half_plus_m_examples(self):
        assert entropy_relation_half_plus_m(0, 5) == (pytest.approx(0.0, abs=1e-13), pytest.approx(0.0, abs=1e-13))
        lhs, rhs = entropy_relation_half_plus_m(1, 0)
        assert lhs == pytest.approx(2 * (1 - EULER_GAMMA), abs=1e-13)
        assert rhs == pytest.approx(ENTROPY_EVEN_2_MU_HALF, abs=1e-13)

    @pytest.mark.parametrize("n", range(1, 21))
    def test_monomial_vs_basis_relation(self, n, mu):
        lhs, rhs = s_vs_S_relation(n, mu)
        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)

    def test_monomial_relation_first_case(self):
        lhs, rhs = s_vs_S_relation(1, 0.0)
        expected = 0.5 * (2 - math.log(2) - EULER_GAMMA)
        assert lhs == pytest.approx(expected, abs=1e-13)
        assert rhs == pytest.approx(expected, abs=1e-12)

    def test_relation_rejects_zero(self):
        with pytest.raises(DomainError):
            s_vs_S_relation(0, 0.0)


class TestMonomialEntropy:
    def test_constant_has_zero_entropy(self, mu):
        assert entropy_monomial_ground(0, mu).value == 0.0

    def test_first_power(self, mu):
        expected = (mu + 0.5) * (digamma(mu + 1.5) - math.log(mu + 0.5))
        assert entropy_monomial_ground(1, mu).value == pytest.approx(expected, rel=1e-13)

    def test_half_mu_first_power(self):
        assert entropy_monomial_ground(1, 0.5).value == pytest.approx(1 - EULER_GAMMA, abs=1e-14)

    def test_reference_value(self):
        assert entropy_monomial_ground(3, 0.0).value == pytest.approx(MONOMIAL_ENTROPY_3_MU0, rel=1e-13)

    @pytest.mark.parametrize("m", MU_GRID)
    def test_increasing_and_positive_in_log_space(self, m):
        logs = np.array([log_entropy_monomial_ground(n, m) for n in range(1, 201)])
        assert np.all(np.isfinite(logs))
        assert np.all(np.diff(logs) > 0)
        assert entropy_monomial_ground(1, m).value > 0

    def test_log_form_agrees(self):
        for n in (1, 5, 40):
            assert math.exp(log_entropy_monomial_ground(n, 1.0)) == pytest.approx(
                entropy_monomial_ground(n, 1.0).value, rel=1e-12)

    def test_overflow_is_reported(self):
        with pytest.raises(RangeError):
            entropy_monomial_ground(400, 0.0)
        assert math.isfinite(log_entropy_monomial_ground(400, 0.0))

    def test_log_form_rejects_zero(self):
        with pytest.raises(DomainError):
            log_entropy_monomial_ground(0, 0.0)

    @pytest.mark.parametrize("m", MU_GRID)
    def test_growth_error_decreases(self, m):
        errs = [monomial_entropy_growth_error(n, m) for n in (50, 100, 200)]
        assert errs[0] > errs[1] > errs[2]


class TestFirstHermiteElement:
    def test_classical_constant(self):
        assert entropy_zeta1(0.0).value == pytest.approx(2 - math.log(2) - EULER_GAMMA, abs=1e-10)

    def test_half(self):
        assert entropy_zeta1(0.5).value == pytest.approx(1 - EULER_GAMMA, abs=1e-14)

    def test_near_edge(self):
        value = entropy_zeta1(-0.499).value
        assert value > 0
        assert value == pytest.approx(ENTROPY_ZETA1_NEAR_EDGE, rel=1e-12)

    @given(m=mus)
    def test_homogeneity_link_to_monomial(self, m):
        scaled = 2.0 / (1.0 + 2.0 * m) * entropy_monomial_ground(1, m).value
        assert entropy_zeta1(m).value == pytest.approx(scaled, rel=1e-12, abs=1e-12)

    def test_gap_values(self):
        assert entropy_gap_zeta1(0.0) == pytest.approx(-(1 - math.log(2)), abs=1e-14)
        assert entropy_gap_zeta1(2.0) == pytest.approx(GAP_MU2, abs=1e-14)
        assert entropy_gap_zeta1(-0.499) == pytest.approx(-8.2e-4, rel=0.01)

    def test_gap_is_classical_entropy_difference(self):
        assert entropy_gap_zeta1(0.0) == pytest.approx(entropy_classical(1).value - entropy_zeta1(0.0).value,
                                                       abs=1e-14)

    @given(m=mus)
    def test_gap_is_negative(self, m):
        assert entropy_gap_zeta1(m) < 0

    def test_gap_vanishes_at_edge(self):
        assert abs(entropy_gap_zeta1(-0.5 + 1e-12)) < 1e-10


class TestEnergy:
    @pytest.mark.parametrize("n", range(0, 60))
    def test_classical_energy_is_index_plus_one(self, n):
        assert energy_xi(n, 0.0).value == pytest.approx(n + 1, rel=1e-13)

    def test_examples(self):
        assert energy_xi(0, 1.0).value == pytest.approx(2.0, rel=1e-14)
        assert energy_xi(2, 1.0).value == pytest.approx(4.0, rel=1e-14)
        assert energy_xi(1, 0.5).value == pytest.approx(3 * math.pi / 4, rel=1e-14)

    def test_large_index_is_finite(self):
        assert math.isfinite(energy_xi(20_001, 2.5).value)

    @given(n=st.integers(0, 5000), m=mus)
    def test_energy_grows_like_index(self, n, m):
        e = energy_xi(n, m).value
        assert e > 0
        assert energy_xi(n + 2, m).value > e


class TestSharpness:
    def test_sequence_shape(self):
        seq = sharpness_sequence("odd", 1.0, 0.0, 10)
        assert len(seq) == 11
        assert [p.index for p in seq[:3]] == [1, 3, 5]

    def test_sequence_bounded_example(self):
        gaps = [p.gap for p in sharpness_sequence("even", 1.5, 0.0, 50)]
        tail = gaps[25:]
        assert int(np.argmax(tail)) == 0
        assert all(a > b for a, b in zip(tail, tail[1:]))

    def test_log_growth_at_critical_constant(self):
        gaps = [p.gap for p in sharpness_sequence("even", 1.0, 0.0, 10_000)]
        assert gaps[10_000] - gaps[100] == pytest.approx(0.5 * math.log(100), abs=0.1)

    def test_linear_slope_below_critical_constant(self):
        gaps = np.array([p.gap for p in sharpness_sequence("odd", 0.9, 1.0, 1000)])
        slope = np.polyfit(np.arange(100, 1001), gaps[100:], 1)[0]
        assert slope == pytest.approx(0.2, rel=0.1)

    def test_predictor_parity_shift(self):
        even = sharpness_predictor("even", 1.0, 0.0, 10.0)
        odd = sharpness_predictor("odd", 1.0, 0.0, 10.0)
        assert odd - even == pytest.approx(0.5 * math.log(11.5 / 10.5))

    @pytest.mark.parametrize("parity", ["even", "odd"])
    @pytest.mark.parametrize("m", MU_GRID)
    def test_dichotomy(self, parity, m):
        for c in (1.05, 1.2, 2.0):
            summary = sharpness_verdict(parity, c, m)
            assert summary.verdict == "bounded"
            assert summary.argmax < summary.n_max
        for c in (0.5, 0.95, 1.0):
            summary = sharpness_verdict(parity, c, m)
            assert summary.verdict == "unbounded"
            assert summary.growth > 0

    def test_bad_parity(self):
        with pytest.raises(DomainError):
            sharpness_sequence("both", 1.0, 0.0, 10)

    def test_short_range_rejected(self):
        with pytest.raises(DomainError):
            sharpness_verdict("even", 1.0, 0.0, 5)
