"""Monte Carlo estimation of expected exponential utility under linear strategies.

Every supported strategy is linear in a conditioning price: position_t =
c_t * X_{t-1} (adaptive rules) or c_t * X_0 (initial-information rules), so
one kernel simulates the path and accumulates wealth for all of them.
Estimates are reproducible by construction — path i's randomness is a pure
function of (seed, i) — and summation runs over fixed-size chunks reduced in
index order, so the result is bit-identical for any worker-thread count.

The utility draws -exp(-L_T) can be very heavy-tailed for aggressive
strategies (the second moment need not exist); the estimator reports the
plain sample mean and standard error without trimming, since any trimming
would bias the comparison against the closed-form values.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from . import rng
from ._kernels import terminal_utilities
from .closedform import theta
from .errors import StabilityError
from .model import ModelParams, PathBundle, check_horizon, evolve_path, stationary_sigma

__all__ = [
    "CHUNK_PATHS",
    "StrategySpec",
    "InitialLaw",
    "UtilityEstimate",
    "terminal_wealth",
    "estimate_utility",
    "sample_paths",
]

# Fixed chunk size: summation order never depends on n or on threading.
CHUNK_PATHS = 1 << 16

_KINDS = ("adaptive", "static", "zero", "linear")


@dataclass(frozen=True)
class StrategySpec:
    """Which position rule to trade.

    kind is one of "adaptive" (optimal rule on the latest price), "static"
    (optimal rule frozen at X_0), "zero", or "linear" (explicit per-date
    coefficients c_t applied to X_{t-1}).
    """

    kind: str
    coefficients: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}; expected one of {_KINDS}")
        if self.kind == "linear":
            if not self.coefficients:
                raise ValueError("linear strategy requires a nonempty coefficient sequence")
            object.__setattr__(
                self, "coefficients", tuple(float(c) for c in self.coefficients)
            )
        elif self.coefficients is not None:
            raise ValueError(f"{self.kind!r} strategy takes no coefficients")

    @classmethod
    def adaptive(cls) -> "StrategySpec":
        return cls("adaptive")

    @classmethod
    def static(cls) -> "StrategySpec":
        return cls("static")

    @classmethod
    def zero(cls) -> "StrategySpec":
        return cls("zero")

    @classmethod
    def linear(cls, coefficients) -> "StrategySpec":
        return cls("linear", tuple(coefficients))

    @property
    def state_linear(self) -> bool:
        """True when positions multiply the latest price rather than X_0."""
        return self.kind in ("adaptive", "linear")

    def coefficient_vector(self, T: int, params: ModelParams) -> np.ndarray:
        """Per-date coefficients c_1..c_T of the linear representation."""
        T = check_horizon(T)
        if self.kind == "zero":
            return np.zeros(T)
        if self.kind == "linear":
            if len(self.coefficients) != T:
                raise ValueError(
                    f"strategy has {len(self.coefficients)} coefficients for horizon {T}"
                )
            return np.asarray(self.coefficients, dtype=float)
        b, s = params.beta, params.sigma
        return np.array([b * theta(t, T, b) / (s * s) for t in range(1, T + 1)])


@dataclass(frozen=True)
class InitialLaw:
    """Distribution of X_0: a point mass, or the stationary standard normal."""

    kind: str
    z: float = 0.0

    def __post_init__(self):
        if self.kind not in ("fixed", "stationary"):
            raise ValueError(f"unknown initial law {self.kind!r}")

    @classmethod
    def fixed(cls, z: float) -> "InitialLaw":
        return cls("fixed", float(z))

    @classmethod
    def stationary(cls) -> "InitialLaw":
        return cls("stationary")

    def validate(self, params: ModelParams) -> None:
        """The stationary law requires beta in (-2, 0) and the matching sigma."""
        if self.kind == "stationary":
            target = stationary_sigma(params.beta)
            if not math.isclose(params.sigma, target, rel_tol=1e-12):
                raise StabilityError(
                    f"stationary law requires sigma = {target!r} for beta = "
                    f"{params.beta!r}, got sigma = {params.sigma!r}"
                )


@dataclass(frozen=True)
class UtilityEstimate:
    """Sample mean of -exp(-L_T) with its standard error."""

    mean: float
    stderr: float
    n: int
    seed: int


def terminal_wealth(path: PathBundle, strategy: StrategySpec) -> float:
    """Wealth sum phi_t * (X_t - X_{t-1}) along one realized path."""
    T = path.horizon
    coeffs = strategy.coefficient_vector(T, path.params)
    base = path.prices[:-1] if strategy.state_linear else np.full(T, path.x0)
    return float((coeffs * base) @ np.diff(path.prices))


def _draw_eps_x0(law: InitialLaw, T: int, seed: int, start: int, count: int):
    """Innovations and initial prices for paths [start, start + count).

    Slot 0 of each path's block is reserved for X_0 under either law (unused
    when the law is a point mass), slots 1..T hold eps_1..eps_T.
    """
    u = rng.uniforms(seed, start, count, T + 1)
    eps = ndtri(u[:, 1:])
    if law.kind == "fixed":
        x0 = np.full(count, law.z)
    else:
        x0 = ndtri(u[:, 0])
    return eps, x0


def estimate_utility(
    strategy: StrategySpec,
    law: InitialLaw,
    T: int,
    params: ModelParams,
    n: int,
    seed: int,
    threads: int = 1,
) -> UtilityEstimate:
    """Mean and standard error of -exp(-L_T) over n independent paths.

    Deterministic given the seed, and bit-identical for any ``threads``
    value: chunks have fixed size and their partial sums are reduced in
    chunk order.
    """
    T = check_horizon(T)
    if n < 2:
        raise ValueError(f"need at least 2 paths, got {n}")
    law.validate(params)
    coeffs = strategy.coefficient_vector(T, params)
    alpha, sigma = params.alpha, params.sigma
    state_linear = strategy.state_linear

    def run_chunk(start: int):
        count = min(CHUNK_PATHS, n - start)
        eps, x0 = _draw_eps_x0(law, T, seed, start, count)
        util = terminal_utilities(x0, eps, coeffs, alpha, sigma, state_linear)
        return float(util.sum()), float((util * util).sum())

    starts = range(0, n, CHUNK_PATHS)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run_chunk, starts))
    else:
        parts = [run_chunk(s) for s in starts]

    total = 0.0
    total_sq = 0.0
    for part_sum, part_sq in parts:
        total += part_sum
        total_sq += part_sq
    mean = total / n
    var = max(total_sq - n * mean * mean, 0.0) / (n - 1)
    return UtilityEstimate(mean=mean, stderr=math.sqrt(var / n), n=int(n), seed=int(seed))


def sample_paths(
    law: InitialLaw, T: int, params: ModelParams, n: int, seed: int
) -> list[PathBundle]:
    """Materialize n paths using the same per-path stream layout as
    ``estimate_utility`` (path i here is path i there)."""
    T = check_horizon(T)
    if n < 1:
        raise ValueError(f"need at least one path, got {n}")
    law.validate(params)
    eps, x0 = _draw_eps_x0(law, T, seed, 0, n)
    return [evolve_path(params, x0[i], eps[i]) for i in range(n)]
