"""SplitMix64 uniform stream, vectorized.

The generator is counter based: the k-th output (k = 1, 2, ...) is
``mix(seed + k * 0x9E3779B97F4A7C15 mod 2**64)`` with

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

and uniforms are ``(z >> 11) * 2**-53`` in ``[0, 1)``. Any implementation of
that recurrence reproduces these numbers bit for bit.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def splitmix64(seed: int, count: int, start: int = 0) -> np.ndarray:
    """Raw 64-bit outputs ``start + 1 .. start + count`` of the stream."""
    k = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed % 2**64) + k * _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def uniforms(seed: int, count: int, start: int = 0) -> np.ndarray:
    z = splitmix64(seed, count, start)
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53
