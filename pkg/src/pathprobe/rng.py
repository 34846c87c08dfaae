"""Seed derivation and the 64-bit mixing primitive behind all randomness.

Every stochastic component of the package keys its pseudorandomness off
``mix64`` (the SplitMix64 finalizer) so that results are a pure function
of integer seeds, reproducible across platforms and interpreter runs.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN64 = 0x9E3779B97F4A7C15
_MIX_M1 = 0xBF58476D1CE4E5B9
_MIX_M2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """SplitMix64 finalizer: an avalanching bijection on 64-bit words."""
    x &= MASK64
    x ^= x >> 30
    x = (x * _MIX_M1) & MASK64
    x ^= x >> 27
    x = (x * _MIX_M2) & MASK64
    return x ^ (x >> 31)


def mix64_np(x: np.ndarray) -> np.ndarray:
    """Vectorised ``mix64`` over a uint64 array (wrapping arithmetic)."""
    x = x ^ (x >> np.uint64(30))
    x = x * np.uint64(_MIX_M1)
    x = x ^ (x >> np.uint64(27))
    x = x * np.uint64(_MIX_M2)
    return x ^ (x >> np.uint64(31))


def derive_seed(master: int, *path: int) -> int:
    """Derive a child seed from ``master`` and an index path.

    Distinct index paths give statistically unrelated streams, so trials,
    rounds and sub-samplers can each own an independent seed.
    """
    h = mix64(master ^ GOLDEN64)
    for index in path:
        h = mix64(h ^ ((index + 1) * GOLDEN64 & MASK64))
    return h
