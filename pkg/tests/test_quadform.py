import math

import numpy as np
import pytest

from ar1invest import (
    ModelParams,
    NotPositiveDefiniteError,
    adaptive_position,
    build_A,
    build_b,
    build_b_rearranged,
    build_c,
    check_minor_identity,
    check_sum_of_rows,
    cholesky_log_det,
    cond_eu_adaptive,
    eval_Q_direct,
    expected_utility_first_step,
    first_step_exponent,
    gaussian_integral,
    inverse_corner,
    log_det_A,
    log_det_A_recursive,
    optimal_first_position,
)

# sweep boundaries within reach of double precision: entries scale like
# alpha^(2T-4), so explosive alphas pair with short horizons only
MODERATE = [(a, T) for a in (-1.0, -0.5, 0.0, 0.5, 1.0) for T in (1, 2, 3, 5, 8, 13, 21, 34, 50)]
EXPLOSIVE = [(a, T) for a in (-1.5, 1.5) for T in (1, 2, 3, 5, 8, 12)]


def params_from_alpha(alpha, sigma=1.0):
    return ModelParams(alpha=alpha, sigma=sigma)


class TestBuildA:
    def test_single_period(self):
        A = build_A(1, params_from_alpha(0.7))
        np.testing.assert_array_equal(A, [[0.5]])

    def test_two_period_entries(self):
        # beta = 1, alpha = 2: a11 = 1/2 + theta_2 = 3/2, a21 = beta/2
        A = build_A(2, ModelParams.from_beta(1.0, 1.0))
        np.testing.assert_allclose(A, [[1.5, 0.5], [0.5, 0.5]], rtol=0, atol=0)
        assert np.linalg.det(A) == pytest.approx(0.5, rel=1e-14)

    def test_beta_zero_is_half_identity(self):
        for T in (1, 3, 9):
            A = build_A(T, ModelParams.from_beta(0.0, 1.0))
            np.testing.assert_array_equal(A, 0.5 * np.eye(T))

    def test_symmetric_and_corner(self):
        for alpha, T in EXPLOSIVE + MODERATE[:10]:
            A = build_A(T, params_from_alpha(alpha))
            assert np.array_equal(A, A.T)
            assert A[T - 1, T - 1] == 0.5

    @pytest.mark.parametrize("alpha,T", MODERATE + EXPLOSIVE)
    def test_positive_definite(self, alpha, T):
        np.linalg.cholesky(build_A(T, params_from_alpha(alpha)))


class TestBuildB:
    def test_zero_x0_has_only_first_entry(self):
        b = build_b(1.0, 0.0, 4, params_from_alpha(0.5, sigma=2.0))
        np.testing.assert_array_equal(b, [2.0, 0.0, 0.0, 0.0])

    def test_single_period_is_phi_sigma(self):
        b = build_b(3.0, 5.0, 1, ModelParams.from_beta(1.0, 2.0))
        np.testing.assert_array_equal(b, [6.0])

    def test_rearranged_form_agrees(self):
        gen = np.random.default_rng(11)
        worst = 0.0
        for _ in range(300):
            T = int(gen.integers(1, 9))
            params = ModelParams(alpha=gen.uniform(-1.5, 1.5), sigma=gen.uniform(0.5, 2.0))
            phi, x0 = gen.uniform(-2, 2, size=2)
            direct = build_b(phi, x0, T, params)
            rearranged = build_b_rearranged(phi, x0, T, params)
            worst = max(worst, float(np.abs(direct - rearranged).max()))
        assert worst < 1e-10


class TestBuildC:
    def test_zero_x0(self):
        assert build_c(2.0, 0.0, 5, params_from_alpha(0.7)) == 0.0

    def test_single_period(self):
        assert build_c(2.0, 3.0, 1, ModelParams.from_beta(-0.5, 1.0)) == pytest.approx(-3.0)

    def test_two_period(self):
        # phi = 0: c = theta_2 * alpha^2 = 4 for beta = 1, x0 = 1
        assert build_c(0.0, 1.0, 2, ModelParams.from_beta(1.0, 1.0)) == pytest.approx(4.0)


class TestEvalQDirect:
    def test_beta_zero_trades_only_first(self):
        params = ModelParams.from_beta(0.0, 1.3)
        eps = np.array([0.7, -0.2, 1.1])
        q = eval_Q_direct(2.0, 5.0, eps, 3, params)
        assert q == pytest.approx(2.0 * 1.3 * 0.7, rel=1e-14)

    def test_deterministic_path_hand_recursion(self):
        params = ModelParams.from_beta(-0.5, 1.0)
        T, phi, x0 = 4, 0.8, 1.5
        q = eval_Q_direct(phi, x0, np.zeros(T), T, params)
        # with no noise, X_t = alpha^t x0 and dX_t = beta X_{t-1}
        expected = phi * params.beta * x0
        for t in range(2, T + 1):
            xprev = params.alpha ** (t - 1) * x0
            expected += adaptive_position(t, T, xprev, params) * params.beta * xprev
        assert q == pytest.approx(expected, rel=1e-13)

    def test_matches_quadratic_decomposition(self):
        gen = np.random.default_rng(5)
        for _ in range(400):
            T = int(gen.integers(1, 9))
            params = ModelParams(alpha=gen.uniform(-1.5, 1.5), sigma=gen.uniform(0.5, 2.0))
            phi, x0 = gen.uniform(-2, 2, size=2)
            eps = gen.standard_normal(T)
            direct = eval_Q_direct(phi, x0, eps, T, params)
            A = build_A(T, params)
            b = build_b(phi, x0, T, params)
            c = build_c(phi, x0, T, params)
            decomposed = float(eps @ (A - 0.5 * np.eye(T)) @ eps + b @ eps) + c
            assert abs(direct - decomposed) < 1e-9 * (1.0 + abs(direct))

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            eval_Q_direct(1.0, 0.0, [0.1, 0.2], 3, params_from_alpha(0.5))


class TestGaussianIntegral:
    def test_standard_normal_normalization(self):
        for n in (1, 3, 6):
            assert gaussian_integral(0.5 * np.eye(n), np.zeros(n)) == pytest.approx(0.0, abs=1e-15)

    def test_one_dimensional_closed_form(self):
        for a, b in [(0.5, 0.0), (2.0, 1.0), (0.3, -2.0)]:
            expected = -0.5 * math.log(2 * a) + b * b / (4 * a)
            assert gaussian_integral([[a]], [b]) == pytest.approx(expected, rel=1e-14)

    def test_diagonal_factorizes(self):
        d = np.array([0.4, 1.7, 3.0, 0.9])
        b = np.array([0.3, -1.0, 2.0, 0.0])
        expected = sum(-0.5 * math.log(2 * di) + bi * bi / (4 * di) for di, bi in zip(d, b))
        assert gaussian_integral(np.diag(d), b) == pytest.approx(expected, abs=1e-12)

    def test_monte_carlo_oracle_3x3(self):
        # E_{x~N(0,I)} exp(-x'Ax - b'x): the Gaussian weight contributes I/2
        # to the quadratic form of the closed-form integral
        gen = np.random.default_rng(42)
        m = gen.standard_normal((3, 3))
        A = m @ m.T + 0.4 * np.eye(3)
        b = gen.standard_normal(3)
        n = 1_000_000
        x = gen.standard_normal((n, 3))
        samples = np.exp(-np.einsum("ij,jk,ik->i", x, A, x) - x @ b)
        mc, se = samples.mean(), samples.std(ddof=1) / math.sqrt(n)
        closed = math.exp(gaussian_integral(A + 0.5 * np.eye(3), b))
        assert abs(closed - mc) < 3 * se

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            gaussian_integral([[1.0, 0.5], [0.2, 1.0]], [0.0, 0.0])

    def test_rejects_indefinite(self):
        with pytest.raises(NotPositiveDefiniteError):
            gaussian_integral([[1.0, 0.0], [0.0, -1.0]], [0.0, 0.0])


class TestFirstStep:
    def test_single_period_closed_form(self):
        # -exp(-phi beta z + phi^2 sigma^2 / 2)
        params = ModelParams.from_beta(-0.5, 1.5)
        for phi, z in [(0.3, 1.0), (-1.2, 2.0), (0.0, 0.0)]:
            lu = expected_utility_first_step(phi, z, 1, params)
            expected = -phi * params.beta * z + 0.5 * phi * phi * params.sigma**2
            assert lu.log_magnitude == pytest.approx(expected, abs=1e-12)
            assert lu.value == pytest.approx(-math.exp(expected), rel=1e-12)

    def test_beta_zero_idle_first_trade(self):
        lu = expected_utility_first_step(0.0, 3.0, 5, ModelParams.from_beta(0.0, 1.0))
        assert lu.value == pytest.approx(-1.0, abs=1e-12)

    def test_optimal_first_trade_completes_the_chain(self):
        # plugging the optimal phi into the quadratic form must reproduce the
        # closed-form conditional utility
        gen = np.random.default_rng(9)
        for _ in range(60):
            T = int(gen.integers(1, 9))
            params = ModelParams(alpha=gen.uniform(-1.3, 1.3), sigma=gen.uniform(0.5, 2.0))
            z = float(gen.uniform(-2, 2))
            phi = adaptive_position(1, T, z, params)
            lu = expected_utility_first_step(phi, z, T, params)
            target = cond_eu_adaptive(z, T, params)
            assert lu.log_magnitude == pytest.approx(target.log_magnitude, abs=1e-9)

    def test_exponent_at_optimum(self):
        params = ModelParams.from_beta(-0.5, 1.0)
        z, T = 1.5, 4
        f = first_step_exponent(adaptive_position(1, T, z, params), z, T, params)
        assert f == pytest.approx(-params.beta**2 * z**2 * T / (2 * params.sigma**2), abs=1e-11)

    def test_any_other_first_trade_is_worse(self):
        gen = np.random.default_rng(21)
        for _ in range(40):
            T = int(gen.integers(1, 7))
            params = ModelParams(alpha=gen.uniform(-1.3, 1.3), sigma=gen.uniform(0.5, 2.0))
            z = float(gen.uniform(-2, 2))
            best = optimal_first_position(z, T, params)
            lu_best = expected_utility_first_step(best, z, T, params)
            perturbed = best + float(gen.choice([-1, 1]) * gen.uniform(0.05, 1.0))
            lu_other = expected_utility_first_step(perturbed, z, T, params)
            assert lu_other.value <= lu_best.value
            assert lu_other.log_magnitude >= lu_best.log_magnitude


class TestOptimalFirstPosition:
    def test_zero_state(self):
        assert optimal_first_position(0.0, 4, params_from_alpha(0.3)) == pytest.approx(0.0, abs=1e-14)

    def test_matches_linear_rule(self):
        params = ModelParams.from_beta(-0.5, 1.0)
        assert optimal_first_position(1.0, 3, params) == pytest.approx(-1.0, rel=1e-10)

    def test_single_period(self):
        params = ModelParams.from_beta(0.8, 1.7)
        z = 2.0
        assert optimal_first_position(z, 1, params) == pytest.approx(
            params.beta * z / params.sigma**2, rel=1e-12
        )

    def test_numeric_root_equals_rule_everywhere(self):
        gen = np.random.default_rng(13)
        for _ in range(60):
            T = int(gen.integers(1, 9))
            params = ModelParams(alpha=gen.uniform(-1.4, 1.4), sigma=gen.uniform(0.5, 2.0))
            z = float(gen.uniform(-2, 2))
            rule = adaptive_position(1, T, z, params)
            numeric = optimal_first_position(z, T, params)
            assert numeric == pytest.approx(rule, rel=1e-9, abs=1e-11)


class TestMatrixIdentities:
    def test_sum_of_rows_examples(self):
        assert check_sum_of_rows(2, ModelParams.from_beta(1.0, 1.0)) < 1e-12
        assert check_sum_of_rows(7, ModelParams.from_beta(0.0, 1.0)) == 0.0
        assert check_sum_of_rows(10, params_from_alpha(0.5)) < 1e-12

    @pytest.mark.parametrize("alpha,T", [(a, T) for a, T in MODERATE + EXPLOSIVE if T >= 2])
    def test_sum_of_rows_sweep(self, alpha, T):
        assert check_sum_of_rows(T, params_from_alpha(alpha)) < 1e-10

    def test_minor_identity_small(self):
        assert check_minor_identity(2, params_from_alpha(0.9)) == 0.0
        assert check_minor_identity(5, ModelParams.from_beta(-0.5, 1.0)) == 0.0
        assert check_minor_identity(8, ModelParams.from_beta(1.2, 1.0)) == 0.0

    @pytest.mark.parametrize("alpha,T", [(a, T) for a, T in MODERATE + EXPLOSIVE if T >= 2])
    def test_minor_identity_exact_sweep(self, alpha, T):
        # entries of the nested matrices are identical floating-point
        # expressions, so the match is exact, not merely close
        assert check_minor_identity(T, params_from_alpha(alpha)) == 0.0

    def test_log_det_examples(self):
        assert log_det_A(1, params_from_alpha(0.2)) == pytest.approx(math.log(0.5), rel=1e-15)
        assert log_det_A(3, ModelParams.from_beta(1.0, 1.0)) == pytest.approx(
            math.log(0.75), rel=1e-12
        )
        assert log_det_A(4, ModelParams.from_beta(0.0, 1.0)) == pytest.approx(
            math.log(1 / 16), rel=1e-14
        )

    @pytest.mark.parametrize("alpha,T", MODERATE + EXPLOSIVE)
    def test_determinant_triple_agreement(self, alpha, T):
        params = params_from_alpha(alpha)
        closed = log_det_A(T, params)
        chol = cholesky_log_det(build_A(T, params))
        recursive = log_det_A_recursive(T, params)
        assert abs(closed - chol) < 1e-9
        assert abs(closed - recursive) < 1e-9

    def test_inverse_corner_examples(self):
        assert inverse_corner(1, 5.0) == 2.0
        assert inverse_corner(2, 1.0) == 1.0
        assert inverse_corner(5, -0.5) == pytest.approx(1.0, rel=1e-15)

    @pytest.mark.parametrize("alpha,T", MODERATE + EXPLOSIVE)
    def test_inverse_corner_matches_numeric_inverse(self, alpha, T):
        params = params_from_alpha(alpha)
        closed = inverse_corner(T, params.beta)
        numeric = np.linalg.inv(build_A(T, params))[0, 0]
        assert abs(numeric - closed) / abs(closed) < 1e-9
