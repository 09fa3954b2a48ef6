"""Deterministic, splittable random streams.

Streams are keyed by ``(seed, stream)`` through ``SeedSequence`` spawn keys and
drive a Philox counter-based generator, so parallel consumers (multi-start
fits, genesis simulation) never share state.
"""

import numpy as np

from .errors import ArgumentError

_TWO53 = float(2**53)


def check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ArgumentError("seed must be a 64-bit unsigned integer")
    return seed


def stream(seed, index=0) -> np.random.Generator:
    """Independent generator for stream ``index`` of ``seed``."""
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(ss))


def uniform_open(gen: np.random.Generator, n: int) -> np.ndarray:
    """n uniforms on the open interval (0, 1), 53-bit resolution."""
    k = gen.integers(0, 2**53, size=n, dtype=np.uint64)
    return (k.astype(float) + 0.5) / _TWO53
