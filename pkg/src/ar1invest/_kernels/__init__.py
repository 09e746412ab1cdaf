"""Backend selection for the hot path-simulation kernel.

The compiled Cython kernel is used when its extension module is importable;
otherwise the pure-NumPy fallback takes over.  Set AR1INVEST_BACKEND=python
to force the fallback (e.g. to benchmark against it) or
AR1INVEST_BACKEND=cython to fail loudly when the extension is missing.
Both backends implement identical arithmetic; results differ by at most a
few ulps from the exp implementation.
"""

import os

from . import _pathsim_py

_requested = os.environ.get("AR1INVEST_BACKEND", "").strip().lower()

if _requested in ("python", "numpy", "fallback"):
    _impl = _pathsim_py
    BACKEND = "python"
elif _requested in ("", "cython", "compiled"):
    try:
        from . import _pathsim_cy as _impl

        BACKEND = "cython"
    except ImportError:
        if _requested:
            raise
        _impl = _pathsim_py
        BACKEND = "python"
else:
    raise ValueError(f"unrecognized AR1INVEST_BACKEND value: {_requested!r}")

terminal_utilities = _impl.terminal_utilities

__all__ = ["terminal_utilities", "BACKEND"]
