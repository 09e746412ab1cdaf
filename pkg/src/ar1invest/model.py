"""Gaussian AR(1) market model and deterministic path evolution.

The risky price follows

    X_{t+1} = alpha * X_t + sigma * eps_{t+1}

with i.i.d. standard normal innovations.  Writing beta = alpha - 1 turns the
same recursion into mean-reversion form, X_{t+1} - X_t = beta * X_t +
sigma * eps_{t+1}; beta is the knob that controls how strongly the past
leaks into the next increment.  Prices may go negative; nothing here clamps
them.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass

import numpy as np

from .errors import StabilityError

__all__ = [
    "ModelParams",
    "Horizon",
    "PathBundle",
    "check_horizon",
    "evolve_path",
    "stationary_sigma",
]


def check_horizon(T) -> int:
    """Validate a trading horizon: an integer >= 1."""
    t = operator.index(T)
    if t < 1:
        raise ValueError(f"horizon must be an integer >= 1, got {t}")
    return t


@dataclass(frozen=True)
class ModelParams:
    """AR(1) parameters.

    ``alpha`` is the canonical stored field; ``beta = alpha - 1`` is derived
    on access so the two can never drift apart.
    """

    alpha: float
    sigma: float

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise ValueError(f"alpha must be finite, got {self.alpha!r}")
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma!r}")

    @property
    def beta(self) -> float:
        return self.alpha - 1.0

    @classmethod
    def from_beta(cls, beta: float, sigma: float) -> "ModelParams":
        return cls(alpha=beta + 1.0, sigma=sigma)


@dataclass(frozen=True)
class Horizon:
    """Number of trading periods."""

    T: int

    def __post_init__(self):
        object.__setattr__(self, "T", check_horizon(self.T))


@dataclass(frozen=True)
class PathBundle:
    """One realized price path together with the innovations that drove it.

    ``prices`` holds X_0..X_T, ``innovations`` holds eps_1..eps_T; both are
    read-only arrays, so bundles are safe to share between threads.
    """

    x0: float
    innovations: np.ndarray
    prices: np.ndarray
    params: ModelParams

    @property
    def horizon(self) -> int:
        return len(self.innovations)


def evolve_path(params: ModelParams, x0: float, innovations) -> PathBundle:
    """Run the price recursion over an explicit innovation sequence.

    Deterministic function of its inputs; the returned bundle satisfies
    prices[t+1] == alpha * prices[t] + sigma * innovations[t] exactly.
    """
    eps = np.asarray(innovations, dtype=float)
    if eps.ndim != 1 or eps.size == 0:
        raise ValueError("innovations must be a nonempty one-dimensional sequence")
    T = eps.size
    prices = np.empty(T + 1)
    x = float(x0)
    prices[0] = x
    for t in range(T):
        x = params.alpha * x + params.sigma * eps[t]
        prices[t + 1] = x
    eps = eps.copy()
    eps.setflags(write=False)
    prices.setflags(write=False)
    return PathBundle(x0=float(x0), innovations=eps, prices=prices, params=params)


def stationary_sigma(beta: float) -> float:
    """Innovation scale giving the stable process unit stationary variance.

    Requires beta in (-2, 0), i.e. |alpha| < 1.  Then var(X) =
    sigma^2 / (1 - alpha^2) equals one exactly when
    sigma = sqrt(1 - alpha^2) = sqrt(-beta * (beta + 2)).
    """
    if not (-2.0 < beta < 0.0):
        raise StabilityError(f"stationary regime requires beta in (-2, 0), got {beta!r}")
    return math.sqrt(-beta * (beta + 2.0))
