"""Optimal exponential-utility trading on a Gaussian AR(1) price.

The package provides three independent routes to the same quantities and
the tooling to confront them:

* closed forms for the optimal strategies and their expected utilities
  (``closedform``), backed by the Gaussian quadratic-form machinery that
  derives them (``quadform``);
* Monte Carlo estimation under any linear strategy with reproducible
  counter-based randomness (``montecarlo``);
* brute-force rediscovery by backward induction and by solving the static
  first-order system (``bruteforce``).

``suite`` bundles the structural-identity checks, and ``cli`` exposes
everything as reproducible batch commands.
"""

from ._kernels import BACKEND
from .bruteforce import (
    DPConfig,
    DPSolution,
    dp_conditional_utility,
    dp_solve,
    evaluate_policy,
    gauss_hermite,
    solve_static_system,
    static_system_residuals,
    static_utility_check,
)
from .closedform import (
    LogUtility,
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
from .errors import (
    DegenerateSystemError,
    GridRangeError,
    NotPositiveDefiniteError,
    NumericOverflowError,
    StabilityError,
)
from .model import (
    Horizon,
    ModelParams,
    PathBundle,
    evolve_path,
    stationary_sigma,
)
from .montecarlo import (
    InitialLaw,
    StrategySpec,
    UtilityEstimate,
    estimate_utility,
    sample_paths,
    terminal_wealth,
)
from .quadform import (
    build_A,
    build_b,
    build_b_rearranged,
    build_c,
    check_minor_identity,
    check_sum_of_rows,
    cholesky_log_det,
    eval_Q_direct,
    expected_utility_first_step,
    first_step_exponent,
    gaussian_integral,
    inverse_corner,
    log_det_A,
    log_det_A_recursive,
    optimal_first_position,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BACKEND",
    # model
    "ModelParams", "Horizon", "PathBundle", "evolve_path", "stationary_sigma",
    # closed forms
    "LogUtility", "theta", "adaptive_position", "static_position",
    "log_gamma_beta", "cond_eu_adaptive", "cond_eu_static",
    "stationary_eu_adaptive", "stationary_eu_static", "log_h_beta",
    # quadratic form
    "build_A", "build_b", "build_b_rearranged", "build_c", "eval_Q_direct",
    "gaussian_integral", "first_step_exponent", "expected_utility_first_step",
    "optimal_first_position", "check_sum_of_rows", "check_minor_identity",
    "log_det_A", "log_det_A_recursive", "cholesky_log_det", "inverse_corner",
    # Monte Carlo
    "StrategySpec", "InitialLaw", "UtilityEstimate", "terminal_wealth",
    "estimate_utility", "sample_paths",
    # brute force
    "DPConfig", "DPSolution", "dp_solve", "evaluate_policy",
    "dp_conditional_utility", "gauss_hermite", "solve_static_system",
    "static_system_residuals", "static_utility_check",
    # errors
    "StabilityError", "NotPositiveDefiniteError", "DegenerateSystemError",
    "GridRangeError", "NumericOverflowError",
]
