#!/usr/bin/env python3
"""Benchmark the compiled path kernel against the pure-NumPy fallback.

Run from the repository root:

    python benchmarks/bench_kernels.py

Times the raw kernel on pre-generated inputs and the end-to-end estimator
(which adds random-number generation and the inverse-CDF transform on top).
"""

import time

import numpy as np

from ar1invest._kernels import _pathsim_py
from ar1invest.model import ModelParams
from ar1invest.montecarlo import InitialLaw, StrategySpec, estimate_utility

try:
    from ar1invest._kernels import _pathsim_cy
except ImportError:
    _pathsim_cy = None


def time_call(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernel():
    print("raw kernel: n paths x T steps, best of 5  (adaptive-rule coefficients)")
    print(f"{'n':>9} {'T':>4} {'numpy':>10} {'cython':>10} {'speedup':>8}")
    gen = np.random.default_rng(0)
    params = ModelParams.from_beta(-0.5, 1.0)
    for n, T in [(100_000, 2), (100_000, 10), (1_000_000, 2), (1_000_000, 10)]:
        x0 = gen.standard_normal(n)
        eps = gen.standard_normal((n, T))
        coeffs = StrategySpec.adaptive().coefficient_vector(T, params)
        args = (x0, eps, coeffs, params.alpha, params.sigma, True)
        t_py = time_call(_pathsim_py.terminal_utilities, *args)
        if _pathsim_cy is None:
            print(f"{n:>9} {T:>4} {t_py * 1e3:>9.2f}ms {'n/a':>10} {'':>8}")
            continue
        t_cy = time_call(_pathsim_cy.terminal_utilities, *args)
        out_py = _pathsim_py.terminal_utilities(*args)
        out_cy = _pathsim_cy.terminal_utilities(*args)
        worst = float((np.abs(out_py - out_cy) / np.abs(out_py)).max())
        print(f"{n:>9} {T:>4} {t_py * 1e3:>9.2f}ms {t_cy * 1e3:>9.2f}ms "
              f"{t_py / t_cy:>7.2f}x  (max rel diff {worst:.1e})")


def bench_estimator():
    if _pathsim_cy is None:
        print("\ncompiled kernel unavailable; skipping end-to-end comparison")
        return
    print("\nend-to-end estimate_utility (n = 1e6, adaptive, fixed X0 = 1)")
    params = ModelParams.from_beta(-0.5, 1.0)
    import ar1invest.montecarlo as mc

    for T in (2, 10):
        times = {}
        for label, impl in (("numpy", _pathsim_py), ("cython", _pathsim_cy)):
            original = mc.terminal_utilities
            mc.terminal_utilities = impl.terminal_utilities
            try:
                t0 = time.perf_counter()
                estimate_utility(StrategySpec.adaptive(), InitialLaw.fixed(1.0),
                                 T, params, 1_000_000, 12)
                times[label] = time.perf_counter() - t0
            finally:
                mc.terminal_utilities = original
        print(f"  T={T:>2}: numpy {times['numpy']:.2f}s  cython {times['cython']:.2f}s  "
              f"speedup {times['numpy'] / times['cython']:.2f}x")


if __name__ == "__main__":
    bench_kernel()
    bench_estimator()
