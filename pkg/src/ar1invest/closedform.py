"""Closed-form optimal strategies and their expected exponential utilities.

For an investor with utility U(x) = -exp(-x) trading one AR(1) asset over T
periods, the optimal position at date t is linear in the conditioning price:

    position_t(z) = (beta * z / sigma^2) * theta_t,    theta_t = 1 - (T - t) * beta,

where z is the latest price X_{t-1} for the fully adaptive investor and the
initial price X_0 for the investor who ignores everything after time zero.
The achieved expected utilities differ exactly by the square root of

    gamma(T) = prod_{i=0}^{T-1} (1 + beta^2 * i),

the performance factor quantifying the value of using the accumulated price
history.  Expected utilities are strictly negative and shrink double
precision to zero for long horizons, so they are carried as ``LogUtility``
values: log of the magnitude plus an implicit minus sign.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass

import numpy as np

from .errors import StabilityError
from .model import ModelParams, check_horizon

__all__ = [
    "LogUtility",
    "theta",
    "adaptive_position",
    "static_position",
    "log_gamma_beta",
    "cond_eu_adaptive",
    "cond_eu_static",
    "stationary_eu_adaptive",
    "stationary_eu_static",
    "log_h_beta",
]


@dataclass(frozen=True)
class LogUtility:
    """A strictly negative expected utility stored as log of its magnitude."""

    log_magnitude: float

    @property
    def sign(self) -> int:
        return -1

    @property
    def value(self) -> float:
        """Linear-space utility; may underflow to -0.0 for very negative logs."""
        return -math.exp(self.log_magnitude)

    def __float__(self) -> float:
        return self.value


def theta(t: int, T: int, beta: float) -> float:
    """Position scaling 1 - (T - t) * beta for trading date t of horizon T."""
    T = check_horizon(T)
    t = operator.index(t)
    if not 1 <= t <= T:
        raise ValueError(f"t must lie in [1, {T}], got {t}")
    return 1.0 - (T - t) * beta


def adaptive_position(t: int, T: int, state_z: float, params: ModelParams) -> float:
    """Optimal position at date t given the conditioning state z.

    The adaptive investor feeds z = X_{t-1}, re-reading the rule off the
    latest price every period.
    """
    return (params.beta * state_z / params.sigma**2) * theta(t, T, params.beta)


def static_position(t: int, T: int, x0: float, params: ModelParams) -> float:
    """Optimal position at date t when only the initial price is ever used.

    Same coefficient as the adaptive rule, frozen at z = X_0.
    """
    return (params.beta * x0 / params.sigma**2) * theta(t, T, params.beta)


def log_gamma_beta(T: int, beta: float) -> float:
    """log of the performance factor gamma(T) = prod_{i<T} (1 + beta^2 * i).

    Evaluated as a sum of log1p terms, which is exact at beta = 0 and has no
    pole, unlike the equivalent Gamma-function ratio
    beta^(2T) * Gamma(1/beta^2 + T) / Gamma(1/beta^2).
    """
    T = check_horizon(T)
    b2 = beta * beta
    return float(np.log1p(b2 * np.arange(T, dtype=float)).sum())


def cond_eu_adaptive(z: float, T: int, params: ModelParams) -> LogUtility:
    """Best achievable E[-exp(-L_T) | X_0 = z] with the full price history.

    The value is -gamma(T)^(-1/2) * exp(-beta^2 z^2 T / (2 sigma^2)).
    """
    b, s = params.beta, params.sigma
    lm = -0.5 * log_gamma_beta(T, b) - b * b * z * z * T / (2.0 * s * s)
    return LogUtility(lm)


def cond_eu_static(z: float, T: int, params: ModelParams) -> LogUtility:
    """Best achievable E[-exp(-L_T) | X_0 = z] using only the initial price.

    The value is -exp(-beta^2 z^2 T / (2 sigma^2)); the adaptive investor
    improves on it by exactly the factor gamma(T)^(-1/2).
    """
    T = check_horizon(T)
    b, s = params.beta, params.sigma
    return LogUtility(-b * b * z * z * T / (2.0 * s * s))


def _check_stable(beta: float) -> None:
    if not (-2.0 < beta < 0.0):
        raise StabilityError(f"stationary values require beta in (-2, 0), got {beta!r}")


def stationary_eu_adaptive(beta: float, T: int) -> LogUtility:
    """Unconditional optimal utility in the stationary unit-variance regime.

    Assumes sigma^2 = 1 - alpha^2 and X_0 ~ N(0, 1); the value is
    -sqrt((beta + 2) / ((2 - (T - 1) beta) * gamma(T))).
    """
    _check_stable(beta)
    T = check_horizon(T)
    lm = 0.5 * (
        math.log(beta + 2.0) - math.log(2.0 - (T - 1) * beta) - log_gamma_beta(T, beta)
    )
    return LogUtility(lm)


def stationary_eu_static(beta: float, T: int) -> LogUtility:
    """Unconditional initial-information-only utility in the stationary regime.

    The value is -sqrt((beta + 2) / (2 - (T - 1) beta)).
    """
    _check_stable(beta)
    T = check_horizon(T)
    lm = 0.5 * (math.log(beta + 2.0) - math.log(2.0 - (T - 1) * beta))
    return LogUtility(lm)


def log_h_beta(T: int, beta: float) -> float:
    """log of the Stirling-type large-horizon asymptote of gamma.

    gamma(T) / h(T) -> 1 as T grows; with y = T - 1 + 1/beta^2,

        log h = -lgamma(1/beta^2) + (1 - 1/beta^2) log(beta^2)
                + 0.5 log(2 pi y) + y (log(1 + (T-1) beta^2) - 1),

    i.e. h is Stirling's approximation of Gamma(y + 1) scaled by the same
    beta^(2T) / Gamma(1/beta^2) factors that gamma carries, so the ratio
    gamma/h reduces to Gamma(y+1) / (sqrt(2 pi y) (y/e)^y) -> 1.  (With
    +lgamma the ratio would converge to 1/Gamma(1/beta^2)^2 instead, which
    is 1 only at beta^2 = 1.)  Everything stays in log space, so horizons up
    to 1e6 neither overflow nor underflow.  Returns 0 when beta = 0 (gamma
    is identically 1 there).
    """
    T = check_horizon(T)
    if beta == 0.0:
        return 0.0
    b2 = beta * beta
    inv = 1.0 / b2
    y = (T - 1) + inv
    return (
        -math.lgamma(inv)
        + (1.0 - inv) * math.log(b2)
        + 0.5 * math.log(2.0 * math.pi * y)
        + y * (math.log1p((T - 1) * b2) - 1.0)
    )
