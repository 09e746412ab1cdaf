"""Counter-based random streams: path i's draws are a pure function of (seed, i).

A Philox generator keyed by the seed supplies the raw 64-bit words.  Each
path owns a fixed, disjoint block of the word stream, so a consumer that
starts at path ``a`` reproduces exactly the words a sequential consumer
would have produced there — chunking and thread scheduling cannot change
any draw.  Uniforms come from the top 53 bits of each word (strictly inside
(0, 1)); standard normals through the inverse CDF.
"""

from __future__ import annotations

import numpy as np
from numpy.random import Philox
from scipy.special import ndtri

__all__ = ["blocks_per_path", "uniforms", "standard_normals"]

_WORDS_PER_BLOCK = 4  # Philox-4x64 emits four words per counter increment


def blocks_per_path(draws: int) -> int:
    """Counter blocks reserved per path for ``draws`` doubles (rounded up)."""
    if draws < 1:
        raise ValueError(f"draws must be >= 1, got {draws}")
    return -(-draws // _WORDS_PER_BLOCK)


def uniforms(seed: int, start_path: int, n_paths: int, draws: int) -> np.ndarray:
    """(n_paths, draws) uniforms on the open interval (0, 1).

    Row i holds the draws of absolute path index start_path + i, independent
    of how the full run is chunked.
    """
    blocks = blocks_per_path(draws)
    bit_gen = Philox(key=seed)
    if start_path:
        bit_gen.advance(start_path * blocks)
    raw = bit_gen.random_raw(n_paths * blocks * _WORDS_PER_BLOCK)
    raw = raw.reshape(n_paths, blocks * _WORDS_PER_BLOCK)
    return (raw[:, :draws] >> np.uint64(11)) * 2.0**-53 + 2.0**-54


def standard_normals(seed: int, start_path: int, n_paths: int, draws: int) -> np.ndarray:
    """(n_paths, draws) standard normals via the inverse CDF."""
    return ndtri(uniforms(seed, start_path, n_paths, draws))
