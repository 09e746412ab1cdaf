"""Gaussian quadratic-form machinery behind the first-trade optimization.

Fix the first position phi and trade the adaptive-optimal rule afterwards.
The terminal wealth is then a quadratic form in the innovation vector,

    Q_T(phi, x0, eps) = eps' (A - I/2) eps + b(phi, x0)' eps + c(phi, x0),

with A a T x T symmetric positive definite matrix, so the conditional
expected utility has the closed Gaussian form

    -E[exp(-Q_T) | X_0 = z] = -(2^T det A)^(-1/2) * exp(b' A^{-1} b / 4 - c).

This module builds A, b and c entry by entry, evaluates the Gaussian
integral via Cholesky factorization, recovers the optimal first trade from
the first-order condition, and exposes the structural identities the
construction satisfies: the beta-weighted row sums collapse, the (1,1) minor
of A_T is A_{T-1}, det A_T telescopes to (1/2^T) prod_{i<T} (1 + beta^2 i),
and (A^{-1})_{11} = 2 / (1 + beta^2 (T-1)).

The identities hold in exact arithmetic for every alpha.  In doubles the
entries grow like alpha^(2T-4), so residual checks are meaningful only while
that stays well below 1/eps; see the verification suite for the parameter
ranges exercised.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import solve_triangular

from .closedform import LogUtility, adaptive_position, log_gamma_beta
from .errors import DegenerateSystemError, NotPositiveDefiniteError
from .model import ModelParams, check_horizon, evolve_path

__all__ = [
    "build_A",
    "build_b",
    "build_b_rearranged",
    "build_c",
    "eval_Q_direct",
    "gaussian_integral",
    "first_step_exponent",
    "expected_utility_first_step",
    "optimal_first_position",
    "check_sum_of_rows",
    "check_minor_identity",
    "log_det_A",
    "log_det_A_recursive",
    "cholesky_log_det",
    "inverse_corner",
]


def _theta_vector(T: int, beta: float) -> np.ndarray:
    """theta_t = 1 - (T - t) * beta for t = 1..T, at index t-1."""
    return 1.0 - beta * np.arange(T - 1, -1, -1, dtype=float)


def _power_table(alpha: float, n: int) -> np.ndarray:
    """alpha^0 .. alpha^n by repeated multiplication (0^0 = 1)."""
    pw = np.empty(n + 1)
    pw[0] = 1.0
    for k in range(1, n + 1):
        pw[k] = pw[k - 1] * alpha
    return pw


def build_A(T: int, params: ModelParams) -> np.ndarray:
    """Quadratic-term matrix of Q_T; symmetric, a_TT = 1/2, positive definite.

    Entry formulas (1-indexed, k < i):

        a_ii = 1/2 + beta^2 sum_{j=i}^{T-1} theta_{j+1} alpha^(2j-2i),  i < T
        a_TT = 1/2
        a_ik = beta theta_i alpha^(i-k-1) / 2
               + beta^2 alpha^(i-k) sum_{j=i}^{T-1} theta_{j+1} alpha^(2j-2i),  i < T
        a_Tk = beta alpha^(T-k-1) / 2

    The lower triangle is constructed and mirrored, so symmetry is exact.
    """
    T = check_horizon(T)
    alpha, beta = params.alpha, params.beta
    th = _theta_vector(T, beta)
    pw = _power_table(alpha, 2 * T)
    b2 = beta * beta
    a2 = alpha * alpha
    # tail[i] = sum_{j=i}^{T-1} theta_{j+1} alpha^(2(j-i)), 1-indexed, tail[T] = 0
    tail = np.zeros(T + 1)
    for i in range(T - 1, 0, -1):
        tail[i] = th[i] + a2 * tail[i + 1]
    A = np.zeros((T, T))
    for i in range(1, T):
        A[i - 1, i - 1] = 0.5 + b2 * tail[i]
        for k in range(1, i):
            A[i - 1, k - 1] = 0.5 * beta * th[i - 1] * pw[i - k - 1] + b2 * pw[i - k] * tail[i]
    A[T - 1, T - 1] = 0.5
    for k in range(1, T):
        A[T - 1, k - 1] = 0.5 * beta * pw[T - k - 1]
    return np.tril(A) + np.tril(A, -1).T


def build_b(phi: float, x0: float, T: int, params: ModelParams) -> np.ndarray:
    """Linear-term vector of Q_T.

    b_1 carries the free first position (b_1 = phi sigma + ...); rows 2..T-1
    mix x0 through the optimal-rule coefficients; b_T = beta x0 alpha^(T-1) / sigma.
    At T = 1 the vector is just (phi sigma,): the first-row formula governs.
    """
    T = check_horizon(T)
    alpha, beta, sigma = params.alpha, params.beta, params.sigma
    th = _theta_vector(T, beta)
    pw = _power_table(alpha, 2 * T)
    b2 = beta * beta
    out = np.zeros(T)
    s = 0.0
    for j in range(1, T):
        s += th[j] * pw[2 * j - 1]
    out[0] = phi * sigma + (2.0 * b2 * x0 / sigma) * s
    for i in range(2, T):
        s = 0.0
        for j in range(i, T):
            s += th[j] * pw[2 * j - i]
        out[i - 1] = (beta * x0 / sigma) * th[i - 1] * pw[i - 1] + (2.0 * b2 * x0 / sigma) * s
    if T >= 2:
        out[T - 1] = (beta * x0 / sigma) * pw[T - 1]
    return out


def build_b_rearranged(phi: float, x0: float, T: int, params: ModelParams) -> np.ndarray:
    """Same vector assembled from the first column of A:

        b = (sigma phi - alpha x0 / sigma) e_1 + (2 alpha x0 / sigma) A[:, 0].

    Used as an independent cross-check of ``build_b`` and by the first-order
    condition of the minimizer.
    """
    T = check_horizon(T)
    A = build_A(T, params)
    alpha, sigma = params.alpha, params.sigma
    out = (2.0 * alpha * x0 / sigma) * A[:, 0]
    out[0] += sigma * phi - alpha * x0 / sigma
    return out


def build_c(phi: float, x0: float, T: int, params: ModelParams) -> float:
    """Constant term of Q_T:

        c = phi beta x0 + (beta^2 x0^2 / sigma^2) sum_{j=2}^T theta_j alpha^(2j-2),

    with an empty sum at T = 1.
    """
    T = check_horizon(T)
    alpha, beta, sigma = params.alpha, params.beta, params.sigma
    th = _theta_vector(T, beta)
    pw = _power_table(alpha, 2 * T)
    s = 0.0
    for j in range(2, T + 1):
        s += th[j - 1] * pw[2 * j - 2]
    return phi * beta * x0 + (beta * beta * x0 * x0 / (sigma * sigma)) * s


def eval_Q_direct(phi, x0, innovations, T: int, params: ModelParams) -> float:
    """Terminal wealth from simulating the path and trading phi, then the
    adaptive-optimal rule from date 2 on.

    This is the direct-route evaluation of Q_T; it must agree with the
    quadratic-form decomposition eps'(A - I/2)eps + b'eps + c for the same
    inputs.
    """
    T = check_horizon(T)
    eps = np.asarray(innovations, dtype=float)
    if eps.shape != (T,):
        raise ValueError(f"expected {T} innovations, got shape {eps.shape}")
    path = evolve_path(params, x0, eps)
    wealth = 0.0
    for t in range(1, T + 1):
        pos = phi if t == 1 else adaptive_position(t, T, path.prices[t - 1], params)
        wealth += pos * (path.prices[t] - path.prices[t - 1])
    return wealth


def _cholesky(A: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(
            "Cholesky factorization failed; matrix is not (numerically) positive definite"
        ) from exc


def gaussian_integral(A, b) -> float:
    """log of (2 pi)^(-n/2) * integral of exp(-x'Ax - b'x) over R^n.

    For symmetric positive definite A the value is
    (2^n det A)^(-1/2) * exp(b'A^{-1}b / 4); returned in log form,
    -(n log 2 + log det A)/2 + b'A^{-1}b/4, with the log-determinant read off
    the Cholesky diagonal and the quadratic term from one triangular solve.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got shape {A.shape}")
    n = A.shape[0]
    if b.shape != (n,):
        raise ValueError(f"b must have shape ({n},), got {b.shape}")
    asym = float(np.abs(A - A.T).max()) if n else 0.0
    if asym > 1e-12:
        raise ValueError(f"A must be symmetric; max |A - A'| = {asym:g}")
    L = _cholesky(A)
    log_det = 2.0 * float(np.log(np.diag(L)).sum())
    y = solve_triangular(L, b, lower=True)
    quad = float(y @ y)  # b'A^{-1}b = |L^{-1} b|^2
    return -0.5 * (n * math.log(2.0) + log_det) + 0.25 * quad


def first_step_exponent(phi: float, z: float, T: int, params: ModelParams) -> float:
    """f(phi, z) = b'A^{-1}b/4 - c: the phi-dependent exponent of E[exp(-Q_T)].

    At the optimal first trade, f collapses to -beta^2 z^2 T / (2 sigma^2).
    """
    T = check_horizon(T)
    A = build_A(T, params)
    b = build_b(phi, z, T, params)
    L = _cholesky(A)
    y = solve_triangular(L, b, lower=True)
    return 0.25 * float(y @ y) - build_c(phi, z, T, params)


def expected_utility_first_step(phi: float, z: float, T: int, params: ModelParams) -> LogUtility:
    """-E[exp(-Q_T(phi, X_0, eps)) | X_0 = z] via the Gaussian integral."""
    T = check_horizon(T)
    A = build_A(T, params)
    b = build_b(phi, z, T, params)
    c = build_c(phi, z, T, params)
    return LogUtility(gaussian_integral(A, b) - c)


def optimal_first_position(z: float, T: int, params: ModelParams) -> float:
    """First trade solving d/dphi f(phi, z) = 0.

    The derivative sigma * (A^{-1} b(phi))_1 / 2 - beta * z is linear in phi,
    so its root follows from two evaluations; the result coincides with the
    adaptive rule at t = 1.
    """
    T = check_horizon(T)
    A = build_A(T, params)
    L = _cholesky(A)
    sigma, beta = params.sigma, params.beta

    def derivative(phi: float) -> float:
        b = build_b(phi, z, T, params)
        y = solve_triangular(L, b, lower=True)
        x = solve_triangular(L.T, y, lower=False)
        return 0.5 * sigma * x[0] - beta * z

    g0 = derivative(0.0)
    g1 = derivative(1.0)
    slope = g1 - g0
    if slope == 0.0:
        # cannot happen for positive definite A: the slope is sigma^2 (A^{-1})_{11} / 2
        raise DegenerateSystemError("first-order condition has zero slope in phi")
    return -g0 / slope


def check_sum_of_rows(T: int, params: ModelParams) -> float:
    """max_n |a_{1n} - beta * sum_{i=2}^T a_{in}| over columns n = 2..T.

    Zero in exact arithmetic: subtracting beta times the other rows from the
    first annihilates every column but the first.
    """
    T = check_horizon(T)
    if T < 2:
        raise ValueError("row-sum identity needs T >= 2")
    A = build_A(T, params)
    resid = A[0, 1:] - params.beta * A[1:, 1:].sum(axis=0)
    return float(np.abs(resid).max())


def check_minor_identity(T: int, params: ModelParams) -> float:
    """max entry difference between the (1,1) minor of A_T and A_{T-1}.

    The nesting is exact entry-by-entry (identical floating-point
    expressions), so the expected return value is 0.0, not merely small.
    """
    T = check_horizon(T)
    if T < 2:
        raise ValueError("minor identity needs T >= 2")
    A = build_A(T, params)
    prev = build_A(T - 1, params)
    return float(np.abs(A[1:, 1:] - prev).max())


def log_det_A(T: int, params: ModelParams) -> float:
    """Closed-form log det A_T = -T log 2 + sum_{i<T} log(1 + beta^2 i)."""
    T = check_horizon(T)
    return -T * math.log(2.0) + log_gamma_beta(T, params.beta)


def log_det_A_recursive(T: int, params: ModelParams) -> float:
    """log det A_T accumulated through det A_T = (1 + beta^2 (T-1))/2 * det A_{T-1},
    starting from det A_1 = 1/2."""
    T = check_horizon(T)
    b2 = params.beta * params.beta
    ld = math.log(0.5)
    for k in range(2, T + 1):
        ld += math.log1p(b2 * (k - 1)) - math.log(2.0)
    return ld


def cholesky_log_det(A) -> float:
    """Numerical log-determinant from the Cholesky diagonal."""
    L = _cholesky(np.asarray(A, dtype=float))
    return 2.0 * float(np.log(np.diag(L)).sum())


def inverse_corner(T: int, beta: float) -> float:
    """(A_T^{-1})_{11} = 2 / (1 + beta^2 (T - 1)): ratio of the nested minors."""
    T = check_horizon(T)
    return 2.0 / (1.0 + beta * beta * (T - 1))
