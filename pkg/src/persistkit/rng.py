"""Counter-based keyed random numbers.

Every random quantity in the toolkit is a pure function of a 64-bit key and a
counter.  Trials, walk steps and scenery sites are addressed by counters, so a
value never depends on evaluation order or on how trials are split between
workers.  The mixing function is the SplitMix64 finalizer.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

U64 = np.uint64
MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

# sub-stream labels
STREAM_WALK = 1
STREAM_SCENERY = 2
STREAM_ENVIRONMENT = 3
STREAM_MOVES = 4
STREAM_GAUSS_HEAD = 5
STREAM_GAUSS_BODY = 6

_TWO_M53 = 1.0 / 9007199254740992.0


@njit(cache=True, inline="always")
def mix64(z):
    z = (z ^ (z >> U64(30))) * U64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> U64(27))) * U64(0x94D049BB133111EB)
    return z ^ (z >> U64(31))


@njit(cache=True, inline="always")
def keyed_bits(key, counter):
    return mix64(key ^ mix64(counter + U64(GOLDEN)))


@njit(cache=True, inline="always")
def keyed_uniform(key, counter):
    """Uniform on the open interval (0, 1)."""
    bits = keyed_bits(key, counter) >> U64(11)
    return (float(bits) + 0.5) * _TWO_M53


@njit(cache=True, inline="always")
def keyed_normal(key_a, key_b, counter):
    # Box-Muller, one output per counter
    u1 = keyed_uniform(key_a, counter)
    u2 = keyed_uniform(key_b, counter)
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def _mix64_py(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive(key: int, *labels: int) -> int:
    """Fold labels into a key: derive(k, a, b) == derive(derive(k, a), b)."""
    key &= MASK64
    for label in labels:
        key = _mix64_py(key ^ _mix64_py((label + GOLDEN) & MASK64))
    return key


def master_key(seed: int) -> int:
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return _mix64_py(seed)


def trial_seed(seed: int, trial: int) -> int:
    """Seed of trial ``trial`` under master seed ``seed``."""
    return derive(master_key(seed), trial)
