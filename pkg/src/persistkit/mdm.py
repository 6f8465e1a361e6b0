"""The Matheron-de Marsily walk on Z^2 with randomly oriented horizontal lines.

Annealed law: every trial draws a fresh environment (line orientations, a keyed
hash of the line index y) and a fresh move sequence.  An antithetic partner
reuses the move sequence with every orientation flipped, which negates the
first coordinate path by path.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np
from numba import njit, prange

from .core import Censored, PathSample, PathStats, path_stats
from .rng import STREAM_ENVIRONMENT, STREAM_MOVES, U64, derive, keyed_bits, keyed_uniform, master_key


@dataclass(frozen=True)
class MdmSpec:
    p: float = 1.0 / 3.0
    length: int = 1

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if self.length < 1:
            raise ValueError(f"length must be >= 1, got {self.length}")


@dataclass(frozen=True)
class MdmTrial:
    first_coord_stats: PathStats
    t0_first: int | Censored
    vertical_line_range: int


@njit(cache=True, inline="always")
def _move(p, km, ke, sign, k, x, y):
    u = keyed_uniform(km, U64(k))
    if u < p:
        if keyed_uniform(ke, U64(y)) < 0.5:
            x -= sign
        else:
            x += sign
    elif u < p + 0.5 * (1.0 - p):
        y -= 1
    else:
        y += 1
    return x, y


@njit(cache=True, inline="always")
def _keys(mkey, t):
    tkey = keyed_bits(mkey, U64(t))
    return keyed_bits(tkey, U64(STREAM_MOVES)), keyed_bits(tkey, U64(STREAM_ENVIRONMENT))


@njit(cache=True, parallel=True)
def _events(p, mkey, trials, n, level, sign):
    # a return to 0 also crosses any level < 0, so stopping at T_0 loses nothing
    t0 = np.empty(trials, dtype=np.int64)
    above = np.empty(trials, dtype=np.int64)
    for t in prange(trials):
        km, ke = _keys(mkey, t)
        x = np.int64(0)
        y = np.int64(0)
        hit0 = n + 1
        hit = n + 1
        for k in range(1, n + 1):
            x, y = _move(p, km, ke, sign, k, x, y)
            if hit > n and x > level:
                hit = k
            if x == 0:
                hit0 = k
                break
        t0[t] = hit0
        above[t] = hit
    return t0, above


@njit(cache=True, parallel=True)
def _extremes(p, mkey, trials, checkpoints, sign):
    c = checkpoints.size
    top = np.empty((trials, c))
    bottom = np.empty((trials, c))
    n = checkpoints[-1]
    for t in prange(trials):
        km, ke = _keys(mkey, t)
        x = np.int64(0)
        y = np.int64(0)
        hi = np.int64(-(1 << 62))
        lo = np.int64(1 << 62)
        j = 0
        for k in range(1, n + 1):
            x, y = _move(p, km, ke, sign, k, x, y)
            hi = max(hi, x)
            lo = min(lo, x)
            while j < c and checkpoints[j] == k:
                top[t, j] = hi
                bottom[t, j] = lo
                j += 1
    return top, bottom


@njit(cache=True)
def _path(p, km, ke, sign, n):
    xs = np.zeros(n + 1, dtype=np.int64)
    ys = np.zeros(n + 1, dtype=np.int64)
    x = np.int64(0)
    y = np.int64(0)
    for k in range(1, n + 1):
        x, y = _move(p, km, ke, sign, k, x, y)
        xs[k] = x
        ys[k] = y
    return xs, ys


def mdm_path(spec: MdmSpec, seed: int, flip: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates (M^(1), M^(2)) at times 0..n for trial seed ``seed``."""
    km = U64(derive(seed, STREAM_MOVES))
    ke = U64(derive(seed, STREAM_ENVIRONMENT))
    return _path(spec.p, km, ke, -1 if flip else 1, spec.length)


def line_orientation(seed: int, y: int) -> int:
    """xi_y in {-1, +1} for the environment of trial seed ``seed``."""
    u = keyed_uniform(U64(derive(seed, STREAM_ENVIRONMENT)), U64(np.int64(y)))
    return -1 if u < 0.5 else 1


def sample_mdm(spec: MdmSpec, seed: int, flip: bool = False) -> MdmTrial:
    xs, _ = mdm_path(spec, seed, flip)
    path = PathSample(xs, integer_valued=True)
    stats = path_stats(path)
    return MdmTrial(stats, stats.first_return, int(np.unique(xs).size))


def _set_workers(workers: int) -> None:
    numba.set_num_threads(max(1, min(workers, numba.config.NUMBA_NUM_THREADS)))


def mdm_event_times(spec: MdmSpec, trials: int, seed: int, level: float = -1.0,
                    flip: bool = False, workers: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """(T_0^(1), first k with M^(1)_k > level) per trial, ``n + 1`` when not observed.

    Each trial stops at its return to 0 (early exit).
    """
    _set_workers(workers)
    return _events(spec.p, U64(master_key(seed)), trials, spec.length, float(level),
                   -1 if flip else 1)


def mdm_running_extremes(spec: MdmSpec, checkpoints, trials: int, seed: int,
                         workers: int = 1) -> tuple[np.ndarray, np.ndarray]:
    checkpoints = np.asarray(checkpoints, dtype=np.int64)
    _set_workers(workers)
    return _extremes(spec.p, U64(master_key(seed)), trials, checkpoints, 1)


def paired_counts(spec: MdmSpec, pairs: int, seed: int, workers: int = 1) -> dict[str, int]:
    """Counts for the orientation-flip pairing of ``pairs`` trials at horizon n.

    Flipping every orientation negates M^(1), so among survivors (T_0 > n)
    exactly one member of each pair has max_{1..n} M^(1) <= -1.
    """
    n = spec.length
    t0, above = mdm_event_times(spec, pairs, seed, -1.0, False, workers)
    t0f, abovef = mdm_event_times(spec, pairs, seed, -1.0, True, workers)
    return {
        "pairs": pairs,
        "below_original": int(np.sum(above > n)),
        "below_flipped": int(np.sum(abovef > n)),
        "survivors_original": int(np.sum(t0 > n)),
        "survivors_flipped": int(np.sum(t0f > n)),
    }


def mdm_constants(p: float, sup_delta_mean: float) -> tuple[float, float]:
    """(K_p, kappa): K_p = p (1-p)^(-1/4) and kappa = (3/2) K_p E[sup Delta].

    kappa is the limit of n^(1/4) P(T_0^(1) > n).
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if not sup_delta_mean > 0:
        raise ValueError("sup_delta_mean must be positive")
    k_p = p * (1.0 - p) ** -0.25
    return k_p, 1.5 * k_p * sup_delta_mean

