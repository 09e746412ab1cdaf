import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ar1invest import (
    ModelParams,
    StabilityError,
    adaptive_position,
    cond_eu_adaptive,
    cond_eu_static,
    log_gamma_beta,
    log_h_beta,
    static_position,
    stationary_eu_adaptive,
    stationary_eu_static,
    theta,
)


def log_gamma_via_lgamma(T, beta):
    # independent oracle: gamma(T) = beta^(2T) Gamma(1/beta^2 + T) / Gamma(1/beta^2)
    b2 = beta * beta
    return 2 * T * math.log(abs(beta)) + math.lgamma(1 / b2 + T) - math.lgamma(1 / b2)


class TestTheta:
    def test_last_date_is_one(self):
        for T in (1, 2, 7):
            for beta in (-1.3, 0.0, 0.8):
                assert theta(T, T, beta) == 1.0

    def test_direct_substitution(self):
        assert theta(1, 3, -0.5) == pytest.approx(2.0, abs=0)
        assert theta(2, 5, 0.1) == pytest.approx(0.7, rel=1e-15)

    @pytest.mark.parametrize("t,T", [(0, 3), (4, 3), (-1, 5)])
    def test_out_of_range(self, t, T):
        with pytest.raises(ValueError):
            theta(t, T, -0.5)

    @given(st.integers(2, 40), st.integers(2, 40),
           st.floats(-3.0, 3.0, allow_nan=False))
    def test_shift_identity(self, t, T, beta):
        # the horizon-shift that makes backward induction work:
        # coefficient at date t of horizon T == date t-1 of horizon T-1
        if t > T:
            t, T = T, t
        assert theta(t, T, beta) == theta(t - 1, T - 1, beta)

    def test_weighted_power_sum_identity(self):
        # sum_{i=m}^{n} theta_i alpha^i == (T+1-m) alpha^m - (T-n) alpha^(n+1)
        gen = np.random.default_rng(3)
        for _ in range(300):
            T = int(gen.integers(1, 31))
            m = int(gen.integers(1, T + 1))
            n = int(gen.integers(m, T + 1))
            alpha = float(gen.uniform(-2, 2))
            beta = alpha - 1.0
            lhs = sum(theta(i, T, beta) * alpha**i for i in range(m, n + 1))
            rhs = (T + 1 - m) * alpha**m - (T - n) * alpha ** (n + 1)
            assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


class TestPositions:
    def test_adaptive_zero_state(self):
        p = ModelParams.from_beta(-0.7, 1.3)
        assert adaptive_position(2, 4, 0.0, p) == 0.0

    def test_adaptive_examples(self):
        p = ModelParams.from_beta(-0.5, 1.0)
        assert adaptive_position(1, 3, 2.0, p) == pytest.approx(-2.0, rel=1e-15)
        p2 = ModelParams.from_beta(1.0, 2.0)
        assert adaptive_position(1, 1, 1.0, p2) == pytest.approx(0.25, rel=1e-15)

    def test_static_examples(self):
        p = ModelParams.from_beta(-0.5, 1.0)
        assert static_position(3, 3, 1.0, p) == pytest.approx(-0.5, rel=1e-15)
        assert static_position(1, 3, 1.0, p) == pytest.approx(-1.0, rel=1e-15)
        assert static_position(2, 3, 0.0, p) == 0.0


class TestGamma:
    def test_beta_zero_is_identity(self):
        for T in (1, 10, 1000):
            assert log_gamma_beta(T, 0.0) == 0.0

    def test_product_of_first_integers(self):
        assert log_gamma_beta(3, 1.0) == pytest.approx(math.log(6.0), rel=1e-15)

    def test_single_factor(self):
        for beta in (-1.5, 0.3, 2.0):
            assert log_gamma_beta(1, beta) == 0.0

    def test_continuity_at_zero(self):
        assert abs(math.exp(log_gamma_beta(100, 1e-6)) - 1.0) < 1e-8

    @pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
    def test_agrees_with_gamma_function_form(self, beta):
        for T in range(1, 21):
            assert log_gamma_beta(T, beta) == pytest.approx(
                log_gamma_via_lgamma(T, beta), abs=1e-9
            )


class TestConditionalUtilities:
    def test_beta_zero_gives_minus_one(self):
        p = ModelParams.from_beta(0.0, 1.0)
        for z in (-3.0, 0.0, 2.0):
            assert cond_eu_adaptive(z, 7, p).value == -1.0
            assert cond_eu_static(z, 7, p).value == -1.0

    def test_adaptive_examples(self):
        assert cond_eu_adaptive(0.0, 3, ModelParams.from_beta(1.0, 1.0)).value == (
            pytest.approx(-1 / math.sqrt(6.0), rel=1e-12)
        )
        assert cond_eu_adaptive(1.0, 1, ModelParams.from_beta(-0.5, 1.0)).value == (
            pytest.approx(-math.exp(-0.125), rel=1e-12)
        )

    def test_static_examples(self):
        p = ModelParams.from_beta(-0.5, 1.0)
        assert cond_eu_static(1.0, 1, p).value == cond_eu_adaptive(1.0, 1, p).value
        assert cond_eu_static(2.0, 4, p).value == pytest.approx(-math.exp(-2.0), rel=1e-12)

    @given(
        st.floats(-2.0, 2.0, allow_nan=False),
        st.integers(1, 50),
        st.floats(-1.5, 1.5, allow_nan=False),
    )
    @settings(max_examples=200)
    def test_history_dominates_initial_only(self, z, T, beta):
        # magnitudes differ by gamma^(-1/2) <= 1, so the adaptive value is
        # closer to zero; strictly for T >= 2 and beta != 0
        p = ModelParams.from_beta(beta, 1.0)
        lm_a = cond_eu_adaptive(z, T, p).log_magnitude
        lm_s = cond_eu_static(z, T, p).log_magnitude
        assert lm_a <= lm_s
        if T >= 2 and abs(beta) > 1e-3:
            assert lm_a < lm_s


class TestStationaryUtilities:
    def test_adaptive_examples(self):
        assert stationary_eu_adaptive(-0.5, 2).value == pytest.approx(
            -math.sqrt(0.48), rel=1e-12
        )
        # at T = 1 there is no history to use: both formulas give -sqrt(0.75)
        assert stationary_eu_adaptive(-0.5, 1).value == pytest.approx(
            -math.sqrt(0.75), rel=1e-12
        )
        assert stationary_eu_adaptive(-0.5, 1).value == stationary_eu_static(-0.5, 1).value

    def test_static_examples(self):
        assert stationary_eu_static(-0.5, 2).value == pytest.approx(
            -math.sqrt(0.6), rel=1e-12
        )
        assert stationary_eu_static(-0.5, 1).value == pytest.approx(
            -math.sqrt(0.75), rel=1e-12
        )
        assert stationary_eu_static(-1.0, 3).value == pytest.approx(-0.5, rel=1e-12)

    def test_limit_beta_to_zero(self):
        assert stationary_eu_adaptive(-1e-9, 1).value == pytest.approx(-1.0, abs=1e-9)

    @pytest.mark.parametrize("beta", [0.0, -2.0, 1.0])
    def test_rejects_unstable(self, beta):
        with pytest.raises(StabilityError):
            stationary_eu_adaptive(beta, 2)
        with pytest.raises(StabilityError):
            stationary_eu_static(beta, 2)

    @pytest.mark.parametrize("T", [2, 5, 10])
    def test_more_memory_is_better(self, T):
        # walking the grid toward beta = -2 (larger |beta|), both utilities
        # strictly improve (move toward zero)
        betas = [-0.1 * k for k in range(1, 20)]
        adaptive = [stationary_eu_adaptive(b, T).log_magnitude for b in betas]
        static = [stationary_eu_static(b, T).log_magnitude for b in betas]
        assert all(a > b for a, b in zip(adaptive, adaptive[1:]))
        assert all(a > b for a, b in zip(static, static[1:]))


class TestAsymptote:
    def test_beta_zero(self):
        for T in (1, 100):
            assert log_h_beta(T, 0.0) == 0.0

    def test_ratio_at_t_one(self):
        # gamma(1)/h(1) = Gamma(2) / (sqrt(2 pi) / e) = e / sqrt(2 pi)
        ratio = math.exp(log_gamma_beta(1, 1.0) - log_h_beta(1, 1.0))
        assert ratio == pytest.approx(math.e / math.sqrt(2 * math.pi), rel=1e-12)

    def test_ratio_at_t_thousand(self):
        ratio = math.exp(log_gamma_beta(1000, 1.0) - log_h_beta(1000, 1.0))
        assert 0.999 <= ratio <= 1.001

    @pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
    def test_ratio_converges(self, beta):
        ratio = math.exp(log_gamma_beta(10_000, beta) - log_h_beta(10_000, beta))
        assert abs(ratio - 1.0) < 1e-3

    def test_no_overflow_at_huge_horizons(self):
        for beta in (0.5, 2.0):
            lg = log_gamma_beta(1_000_000, beta)
            lh = log_h_beta(1_000_000, beta)
            assert math.isfinite(lg) and math.isfinite(lh)
            assert math.exp(lg - lh) == pytest.approx(1.0, abs=1e-5)
