"""Pure-NumPy path kernel: reference implementation and import-time fallback."""

import numpy as np


def terminal_utilities(x0, eps, coeffs, alpha, sigma, state_linear):
    """Utilities -exp(-L_T) of linear trading rules on AR(1) paths.

    Parameters
    ----------
    x0 : (n,) float array of initial prices.
    eps : (n, T) float array of standard-normal innovations.
    coeffs : (T,) per-date coefficients c_t.
    alpha, sigma : AR(1) recursion parameters.
    state_linear : position at date t is c_t * X_{t-1} when true,
        c_t * X_0 when false.

    Returns
    -------
    (n,) array of -exp(-terminal wealth).

    The update order mirrors the compiled kernel operation for operation,
    so the two backends agree to the last few ulps (the exp implementations
    may differ by one).
    """
    x = x0.astype(float, copy=True)
    wealth = np.zeros_like(x)
    T = eps.shape[1]
    for t in range(T):
        prev = x
        x = alpha * prev + sigma * eps[:, t]
        base = prev if state_linear else x0
        wealth += coeffs[t] * base * (x - prev)
    return -np.exp(-wealth)
