"""The structural-identity verification sweep behind ``ar1invest verify``.

Every check compares two independent routes to the same quantity: matrix
identities against their closed forms, the direct wealth simulation against
the quadratic-form decomposition, the backward-induction solver against the
linear rule, and the static first-order system against its known solution.

Absolute tolerances only mean something while the matrix entries stay well
below 1/eps.  Entries grow like alpha^(2T-4), so the default sweep pairs
|alpha| <= 1 with horizons up to 50 but |alpha| = 1.5 only with horizons up
to 12; beyond that boundary double precision cannot distinguish a true
identity from rounding noise (at alpha = -1.5, T = 50 the rounded matrix is
not even numerically positive definite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bruteforce import DPConfig, dp_solve, solve_static_system, static_system_residuals
from .closedform import cond_eu_adaptive, theta
from .model import ModelParams
from .quadform import (
    build_A,
    build_b,
    build_b_rearranged,
    build_c,
    check_minor_identity,
    cholesky_log_det,
    eval_Q_direct,
    inverse_corner,
    log_det_A,
    log_det_A_recursive,
)

__all__ = ["CheckResult", "run_identity_suite", "MODERATE_ALPHAS", "EXPLOSIVE_ALPHAS",
           "MODERATE_HORIZONS", "EXPLOSIVE_HORIZONS"]

MODERATE_ALPHAS = (-1.0, -0.5, 0.0, 0.5, 1.0)
MODERATE_HORIZONS = (2, 3, 5, 8, 13, 21, 34, 50)
EXPLOSIVE_ALPHAS = (-1.5, 1.5)
EXPLOSIVE_HORIZONS = (2, 3, 5, 8, 12)

SUM_OF_ROWS_TOL = 1e-10
MINOR_TOL = 0.0
LOG_DET_TOL = 1e-9
INVERSE_TOL = 1e-9
QUADFORM_TOL = 1e-9
REARRANGED_B_TOL = 1e-10
DP_COEFF_TOL = 1e-4
DP_VALUE_TOL = 1e-5
STATIC_TOL = 1e-10

STATIC_BETAS = (-1.9, -1.0, -0.5, -0.1, 0.1, 0.5)
DP_BETAS = (-0.5, 0.5)


@dataclass(frozen=True)
class CheckResult:
    check: str
    alpha: float
    sigma: float
    T: int
    value: float
    tolerance: float
    passed: bool


def _alpha_horizon_grid():
    for alpha in MODERATE_ALPHAS:
        for T in MODERATE_HORIZONS:
            yield alpha, T
    for alpha in EXPLOSIVE_ALPHAS:
        for T in EXPLOSIVE_HORIZONS:
            yield alpha, T


def _matrix_checks(inject_bug: bool) -> list[CheckResult]:
    out = []
    for alpha, T in _alpha_horizon_grid():
        params = ModelParams(alpha=alpha, sigma=1.0)
        beta = params.beta
        A = build_A(T, params)
        if inject_bug:
            A = A.copy()
            A[T - 1, T - 1] += 1e-3
        resid = float(np.abs(A[0, 1:] - beta * A[1:, 1:].sum(axis=0)).max())
        out.append(CheckResult("sum_of_rows", alpha, 1.0, T, resid,
                               SUM_OF_ROWS_TOL, resid < SUM_OF_ROWS_TOL))
        minor = check_minor_identity(T, params)
        out.append(CheckResult("minor_identity", alpha, 1.0, T, minor,
                               MINOR_TOL, minor <= MINOR_TOL))
        closed = log_det_A(T, params)
        chol = cholesky_log_det(build_A(T, params))
        rec = log_det_A_recursive(T, params)
        dev = max(abs(closed - chol), abs(closed - rec))
        out.append(CheckResult("log_det_triple", alpha, 1.0, T, dev,
                               LOG_DET_TOL, dev < LOG_DET_TOL))
        corner = inverse_corner(T, beta)
        numeric = float(np.linalg.inv(build_A(T, params))[0, 0])
        rel = abs(numeric - corner) / abs(corner)
        out.append(CheckResult("inverse_corner", alpha, 1.0, T, rel,
                               INVERSE_TOL, rel < INVERSE_TOL))
    return out


def _quadform_checks(seed: int, tuples: int = 1000) -> list[CheckResult]:
    gen = np.random.default_rng(seed)
    worst_q = 0.0
    worst_b = 0.0
    for _ in range(tuples):
        T = int(gen.integers(1, 9))
        alpha = float(gen.uniform(-1.5, 1.5))
        sigma = float(gen.uniform(0.5, 2.0))
        phi = float(gen.uniform(-2.0, 2.0))
        x0 = float(gen.uniform(-2.0, 2.0))
        eps = gen.standard_normal(T)
        params = ModelParams(alpha=alpha, sigma=sigma)
        q_direct = eval_Q_direct(phi, x0, eps, T, params)
        A = build_A(T, params)
        b = build_b(phi, x0, T, params)
        c = build_c(phi, x0, T, params)
        q_form = float(eps @ (A - 0.5 * np.eye(T)) @ eps) + float(b @ eps) + c
        worst_q = max(worst_q, abs(q_direct - q_form) / (1.0 + abs(q_direct)))
        worst_b = max(worst_b, float(np.abs(b - build_b_rearranged(phi, x0, T, params)).max()))
    return [
        CheckResult("quadratic_form_equivalence", math.nan, math.nan, 0,
                    worst_q, QUADFORM_TOL, worst_q < QUADFORM_TOL),
        CheckResult("b_rearrangement", math.nan, math.nan, 0,
                    worst_b, REARRANGED_B_TOL, worst_b < REARRANGED_B_TOL),
    ]


def _dp_checks(grid_points: int, quad_nodes: int) -> list[CheckResult]:
    out = []
    config = DPConfig(grid_points=grid_points, quadrature_nodes=quad_nodes)
    T = 3
    for beta in DP_BETAS:
        params = ModelParams.from_beta(beta, 1.0)
        sol = dp_solve(T, params, config)
        coeff_err = 0.0
        for t in range(1, T + 1):
            target = beta * theta(t, T, beta) / params.sigma**2
            scale = max(abs(target), abs(beta) / params.sigma**2)
            coeff_err = max(coeff_err, abs(sol.fitted_coefficients[t - 1] - target) / scale)
        out.append(CheckResult("dp_coefficients", params.alpha, 1.0, T, coeff_err,
                               DP_COEFF_TOL, coeff_err < DP_COEFF_TOL))
        value_err = 0.0
        for z in (0.0, 1.0):
            lm = cond_eu_adaptive(z, T, params).log_magnitude
            value_err = max(value_err, abs(sol.log_value_at(z) - lm) / (1.0 + abs(lm)))
        out.append(CheckResult("dp_value", params.alpha, 1.0, T, value_err,
                               DP_VALUE_TOL, value_err < DP_VALUE_TOL))
    return out


def _static_checks() -> list[CheckResult]:
    out = []
    x0 = 1.0
    for beta in STATIC_BETAS:
        params = ModelParams.from_beta(beta, 1.0)
        worst_err = 0.0
        worst_res = 0.0
        for T in range(1, 21):
            eta = solve_static_system(x0, T, params)
            target = np.array(
                [theta(k, T, beta) * beta * x0 / params.sigma**2 for k in range(1, T + 1)]
            )
            worst_err = max(worst_err, float(np.abs(eta - target).max()))
            worst_res = max(
                worst_res, float(np.abs(static_system_residuals(eta, x0, T, params)).max())
            )
        out.append(CheckResult("static_solution", params.alpha, 1.0, 20, worst_err,
                               STATIC_TOL, worst_err < STATIC_TOL))
        out.append(CheckResult("static_residual", params.alpha, 1.0, 20, worst_res,
                               STATIC_TOL, worst_res < STATIC_TOL))
    return out


def run_identity_suite(
    seed: int = 0,
    grid_points: int = 257,
    quad_nodes: int = 64,
    inject_bug: bool = False,
) -> list[CheckResult]:
    """Run every structural check; returns one result row per (check, params).

    ``inject_bug`` perturbs the trailing diagonal entry of every matrix fed
    to the row-sum check — a negative control that must make the suite fail.
    """
    results = _matrix_checks(inject_bug)
    results += _quadform_checks(seed)
    results += _dp_checks(grid_points, quad_nodes)
    results += _static_checks()
    return results
