"""Brute-force verifiers that rediscover the closed forms numerically.

Two independent routes:

* ``dp_solve`` runs backward induction on a state grid.  With multiplicative
  exponential utility the value function factorizes, so

      W_T(x) = 1,
      W_{t-1}(x) = min_phi E[ exp(-phi (beta x + sigma e)) W_t(alpha x + sigma e) ],

  with e standard normal.  The expectation is a Gauss-Hermite sum, log W is
  interpolated cubically between grid points (linearly beyond them), and the
  per-point minimization is a vectorized golden-section search.  The search
  bracket is seeded from the known linear rule — seeding cannot move the
  converged minimum of a strictly convex objective — and everything else is
  derived numerically, so matching coefficients is genuine evidence.

* ``solve_static_system`` solves the first-order conditions of the investor
  who only conditions on X_0.  Wealth is c(eta) + b(eta)'eps with b = sigma S
  eta for an upper-triangular loading matrix S, so the gradient system is
  sigma^2 S'S eta = beta x0 (alpha^(k-1))_k and two triangular solves give
  eta far more accurately than a dense solve of the assembled normal
  equations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import solve_triangular

from .closedform import LogUtility, theta
from .errors import DegenerateSystemError, GridRangeError, NumericOverflowError
from .model import ModelParams, check_horizon

__all__ = [
    "DPConfig",
    "DPSolution",
    "gauss_hermite",
    "dp_solve",
    "evaluate_policy",
    "dp_conditional_utility",
    "solve_static_system",
    "static_system_residuals",
    "static_utility_check",
]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_MAX_GOLDEN_ITER = 400


@dataclass(frozen=True)
class DPConfig:
    """Discretization knobs for the backward-induction solver."""

    grid_points: int = 257
    grid_halfwidth_sigmas: float = 5.0
    quadrature_nodes: int = 64
    minimizer_tolerance: float = 1e-10

    def __post_init__(self):
        if self.grid_points < 65 or self.grid_points % 2 == 0:
            raise ValueError("grid_points must be odd and >= 65 (the grid includes 0)")
        if self.grid_halfwidth_sigmas <= 0:
            raise ValueError("grid_halfwidth_sigmas must be positive")
        if self.quadrature_nodes < 16:
            raise ValueError("quadrature_nodes must be >= 16")
        if not self.minimizer_tolerance > 0:
            raise ValueError("minimizer_tolerance must be positive")


@dataclass(frozen=True)
class DPSolution:
    """Backward-induction output on the state grid.

    ``positions[t-1]`` holds the optimal positions traded at date t as a
    function of X_{t-1} on the grid; ``log_values[t]`` holds
    log W_t(x) = log min E[exp(-sum_{j>t} phi_j dX_j) | X_t = x], so
    log_values[T] is identically zero and -exp(log_values[0]) is the best
    conditional expected utility.
    """

    grid: np.ndarray
    positions: np.ndarray
    log_values: np.ndarray
    fitted_coefficients: np.ndarray
    T: int
    params: ModelParams
    config: DPConfig

    @property
    def values(self) -> np.ndarray:
        """W_t(x) in linear space, shape (T+1, grid_points)."""
        return np.exp(self.log_values)

    def log_value_at(self, z: float) -> float:
        """Interpolated log W_0 at state z (cubic, grid interior only)."""
        g = self.grid
        if not g[0] <= z <= g[-1]:
            raise GridRangeError(f"z = {z!r} outside state grid [{g[0]!r}, {g[-1]!r}]")
        return float(CubicSpline(g, self.log_values[0])(z))


def gauss_hermite(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Hermite nodes and weights for integration against the standard
    normal density (probabilists' normalization)."""
    nodes, weights = np.polynomial.hermite.hermgauss(n)
    return nodes * math.sqrt(2.0), weights / math.sqrt(math.pi)


def _state_grid(T: int, params: ModelParams, config: DPConfig, z_cover: float) -> np.ndarray:
    """Symmetric grid wide enough for the path mass and for queries |z| <= z_cover."""
    alpha, sigma = params.alpha, params.sigma
    if abs(alpha) < 1.0:
        base = sigma / math.sqrt(1.0 - alpha * alpha)
    else:
        base = sigma * math.sqrt(T)
    spread = sigma * math.sqrt(T)
    half = max(config.grid_halfwidth_sigmas * base,
               abs(z_cover) + config.grid_halfwidth_sigmas * spread)
    return np.linspace(-half, half, config.grid_points)


def _interpolate_log_values(grid: np.ndarray, log_w: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Cubic interpolation of log W inside the grid, linear continuation outside.

    Quadrature images can land far beyond the grid edge where a cubic
    extrapolant would be unbounded; those images carry Gaussian-tail weight,
    so a linear continuation keeps them harmless.
    """
    spline = CubicSpline(grid, log_w)
    out = spline(np.clip(points, grid[0], grid[-1]))
    lo, hi = grid[0], grid[-1]
    below = points < lo
    above = points > hi
    if below.any():
        out = np.where(below, log_w[0] + float(spline(lo, 1)) * (points - lo), out)
    if above.any():
        out = np.where(above, log_w[-1] + float(spline(hi, 1)) * (points - hi), out)
    return out


def _log_expectation(base: np.ndarray, increments: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """log sum_k exp(base[g, k] - phi[g] * increments[g, k]) per grid point."""
    expo = base - phi[:, None] * increments
    peak = expo.max(axis=1)
    return peak + np.log(np.exp(expo - peak[:, None]).sum(axis=1))


def dp_solve(
    T: int,
    params: ModelParams,
    config: DPConfig | None = None,
    z_cover: float = 2.0,
) -> DPSolution:
    """Backward induction over the full horizon.

    ``z_cover`` widens the grid so that later state queries up to |z| are
    interior.  The per-date position functions come out numerically; their
    through-origin least-squares slopes (fitted on the central half of the
    grid, where quadrature images stay on-grid) are stored as
    ``fitted_coefficients`` for comparison against the closed-form rule.
    """
    T = check_horizon(T)
    config = config or DPConfig()
    grid = _state_grid(T, params, config, z_cover)
    alpha, beta, sigma = params.alpha, params.beta, params.sigma
    nodes, weights = gauss_hermite(config.quadrature_nodes)
    log_weights = np.log(weights)

    images = alpha * grid[:, None] + sigma * nodes[None, :]
    increments = beta * grid[:, None] + sigma * nodes[None, :]

    log_w = np.zeros(config.grid_points)
    log_values = np.empty((T + 1, config.grid_points))
    log_values[T] = log_w
    positions = np.empty((T, config.grid_points))

    tol = config.minimizer_tolerance
    for t in range(T, 0, -1):
        base = log_weights[None, :] + _interpolate_log_values(grid, log_w, images)

        # bracket around the known linear rule; the objective is strictly
        # convex in phi, so golden section converges to the global minimum
        center = (beta * theta(t, T, beta) / (sigma * sigma)) * grid
        half = np.maximum(1.0, 2.0 * np.abs(center))
        lo = center - half
        hi = center + half
        x1 = hi - _INV_PHI * (hi - lo)
        x2 = lo + _INV_PHI * (hi - lo)
        f1 = _log_expectation(base, increments, x1)
        f2 = _log_expectation(base, increments, x2)
        for _ in range(_MAX_GOLDEN_ITER):
            if np.max(hi - lo) <= tol:
                break
            keep_low = f1 < f2
            hi = np.where(keep_low, x2, hi)
            lo = np.where(keep_low, lo, x1)
            x1_new = hi - _INV_PHI * (hi - lo)
            x2_new = lo + _INV_PHI * (hi - lo)
            f_new = _log_expectation(base, increments, np.where(keep_low, x1_new, x2_new))
            f1, f2 = np.where(keep_low, f_new, f2), np.where(keep_low, f1, f_new)
            x1, x2 = np.where(keep_low, x1_new, x2), np.where(keep_low, x1, x2_new)
        else:
            raise NumericOverflowError("golden-section search failed to shrink the bracket")

        phi = 0.5 * (lo + hi)
        log_w = _log_expectation(base, increments, phi)
        if not np.isfinite(log_w).all():
            raise NumericOverflowError(
                "non-finite value function; reduce the grid halfwidth or |beta|"
            )
        positions[t - 1] = phi
        log_values[t - 1] = log_w

    central = np.abs(grid) <= 0.5 * grid[-1]
    gx = grid[central]
    fitted = positions[:, central] @ gx / float(gx @ gx)

    return DPSolution(
        grid=grid,
        positions=positions,
        log_values=log_values,
        fitted_coefficients=fitted,
        T=T,
        params=params,
        config=config,
    )


def evaluate_policy(solution: DPSolution, positions: np.ndarray) -> np.ndarray:
    """log W_0 on the grid when the given positions are traded as-is.

    Same recursion as ``dp_solve`` with the minimization removed; feeding
    back ``solution.positions`` reproduces ``solution.log_values[0]``, and
    any perturbed policy can only increase W_0.
    """
    cfg = solution.config
    params = solution.params
    grid = solution.grid
    positions = np.asarray(positions, dtype=float)
    if positions.shape != (solution.T, grid.size):
        raise ValueError(f"positions must have shape {(solution.T, grid.size)}")
    alpha, beta, sigma = params.alpha, params.beta, params.sigma
    nodes, weights = gauss_hermite(cfg.quadrature_nodes)
    log_weights = np.log(weights)
    images = alpha * grid[:, None] + sigma * nodes[None, :]
    increments = beta * grid[:, None] + sigma * nodes[None, :]
    log_w = np.zeros(grid.size)
    for t in range(solution.T, 0, -1):
        base = log_weights[None, :] + _interpolate_log_values(grid, log_w, images)
        log_w = _log_expectation(base, increments, positions[t - 1])
    return log_w


def dp_conditional_utility(solution: DPSolution, z: float) -> float:
    """-W_0(z): the numerically recovered best conditional expected utility."""
    return -math.exp(solution.log_value_at(z))


def _loading_matrix(T: int, params: ModelParams) -> np.ndarray:
    """Upper-triangular S with b(eta) = sigma * S @ eta:
    S[l, j] = 1 at j = l, beta * alpha^(j-l-1) for j > l."""
    alpha, beta = params.alpha, params.beta
    S = np.eye(T)
    for l in range(T):
        power = 1.0
        for j in range(l + 1, T):
            S[l, j] = beta * power
            power *= alpha
    return S


def _alpha_powers(T: int, alpha: float) -> np.ndarray:
    out = np.empty(T)
    out[0] = 1.0
    for k in range(1, T):
        out[k] = out[k - 1] * alpha
    return out


def solve_static_system(x0: float, T: int, params: ModelParams) -> np.ndarray:
    """Positions eta_1..eta_T solving the initial-information first-order
    conditions.

    The gradient system is sigma^2 S'S eta = beta x0 (alpha^(k-1))_k; it is
    solved through the two triangular factors rather than by assembling the
    normal equations, which loses digits once powers of alpha grow.  The
    solution must coincide with theta_k * beta * x0 / sigma^2.
    """
    T = check_horizon(T)
    S = _loading_matrix(T, params)
    rhs = params.beta * x0 * _alpha_powers(T, params.alpha) / (params.sigma**2)
    w = solve_triangular(S.T, rhs, lower=True)
    eta = solve_triangular(S, w, lower=False)
    if not np.isfinite(eta).all():
        raise DegenerateSystemError("first-order condition system is singular")
    return eta


def static_system_residuals(eta, x0: float, T: int, params: ModelParams) -> np.ndarray:
    """Gradient components sigma^2 (S'S eta)_k - beta x0 alpha^(k-1) at eta."""
    T = check_horizon(T)
    eta = np.asarray(eta, dtype=float)
    if eta.shape != (T,):
        raise ValueError(f"eta must have shape ({T},), got {eta.shape}")
    S = _loading_matrix(T, params)
    normal = params.sigma**2 * (S.T @ S)
    rhs = params.beta * x0 * _alpha_powers(T, params.alpha)
    return normal @ eta - rhs


def static_utility_check(x0: float, T: int, params: ModelParams) -> LogUtility:
    """Expected utility -exp(g(eta)) at the solved positions.

    g(eta) = -c(eta) + b(eta)'b(eta)/2 with c = beta x0 sum_j eta_j alpha^(j-1).
    At the optimum every loading b_k collapses to beta x0 / sigma; that
    collapse is verified here before the value is returned.
    """
    T = check_horizon(T)
    eta = solve_static_system(x0, T, params)
    S = _loading_matrix(T, params)
    loadings = params.sigma * (S @ eta)
    expected = params.beta * x0 / params.sigma
    deviation = float(np.abs(loadings - expected).max())
    if deviation > 1e-10 * max(1.0, abs(expected)):
        raise ArithmeticError(
            f"loading vector failed to collapse: max deviation {deviation:g}"
        )
    powers = _alpha_powers(T, params.alpha)
    c = params.beta * x0 * float(powers @ eta)
    g = -c + 0.5 * float(loadings @ loadings)
    return LogUtility(g)
