# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled path kernel: the hot loop of the Monte Carlo estimator."""

from libc.math cimport exp

import numpy as np


def terminal_utilities(const double[::1] x0, const double[:, ::1] eps,
                       const double[::1] coeffs, double alpha, double sigma,
                       bint state_linear):
    """Same contract as the pure-NumPy kernel; one fused pass per path."""
    cdef Py_ssize_t n = x0.shape[0]
    cdef Py_ssize_t T = eps.shape[1]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, t
    cdef double x, prev, base, wealth
    with nogil:
        for i in range(n):
            x = x0[i]
            wealth = 0.0
            for t in range(T):
                prev = x
                x = alpha * prev + sigma * eps[i, t]
                base = prev if state_linear else x0[i]
                wealth += (coeffs[t] * base) * (x - prev)
            out[i] = -exp(-wealth)
    return out_arr
