"""SplitMix64 streams keyed by (seed, trial, walker).

Output k of a stream with key K is mix64(K + (k + 1) * GAMMA), so the scalar
generator and the vectorised one below produce identical numbers and any
trial can be regenerated without touching the others. Do not change the
constants: golden outputs in the test-suite pin them.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_WALKER_SALT = 0xD1B54A32D192ED03


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def mix64_array(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= np.uint64(_M1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_M2)
    z ^= z >> np.uint64(31)
    return z


def stream_key(seed: int, trial: int, walker: int = 0) -> int:
    base = mix64(seed ^ mix64(walker * _WALKER_SALT + 1))
    return mix64(base + trial * GAMMA)


def stream_keys(seed: int, trials: np.ndarray, walker: int = 0) -> np.ndarray:
    base = np.uint64(mix64(seed ^ mix64(walker * _WALKER_SALT + 1)))
    t = trials.astype(np.uint64)
    return mix64_array(base + t * np.uint64(GAMMA))


def stream_outputs(keys: np.ndarray, k: int) -> np.ndarray:
    """The k-th (0-based) output of every stream in ``keys``."""
    offset = np.uint64(((k + 1) * GAMMA) & MASK64)
    return mix64_array(keys + offset)


class SplitMix64:
    """Scalar generator over one stream."""

    def __init__(self, key: int):
        self.key = key & MASK64
        self.count = 0

    @classmethod
    def for_trial(cls, seed: int, trial: int, walker: int = 0) -> "SplitMix64":
        return cls(stream_key(seed, trial, walker))

    def next_u64(self) -> int:
        self.count += 1
        return mix64(self.key + self.count * GAMMA)
