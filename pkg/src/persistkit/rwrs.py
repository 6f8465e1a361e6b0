"""Random walk in random scenery, Z_n = sum_{i<=n} xi_{S_i}.

The scenery is never stored: xi at a site is a keyed hash of the packed site
coordinates, so revisits see the same value and an unvisited site costs
nothing.  The trial kernels here also drive plain one-dimensional walks
(``Z = S``) through the ``WALK_ITSELF`` scenery code.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np
from numba import njit, prange

from .core import PathSample
from .lattice import WalkSpec, cms_symmetric, pack_site, walk_keys, walk_step
from .rng import (
    STREAM_SCENERY,
    STREAM_WALK,
    U64,
    derive,
    keyed_bits,
    keyed_normal,
    keyed_uniform,
    master_key,
)

WALK_ITSELF = -1
RADEMACHER, LAZY_RADEMACHER, GAUSSIAN, BOUNDED_UNIFORM, SYMMETRIC_STABLE = range(5)
SCENERY_LAWS = {
    "rademacher": RADEMACHER,
    "lazy_rademacher": LAZY_RADEMACHER,
    "gaussian": GAUSSIAN,
    "bounded_uniform": BOUNDED_UNIFORM,
    "symmetric_stable": SYMMETRIC_STABLE,
}
INTEGER_LAWS = ("rademacher", "lazy_rademacher")

EVENT_ABOVE, EVENT_RETURN = 0, 1


@dataclass(frozen=True)
class ScenerySpec:
    law: str = "rademacher"
    q: float = 0.5
    beta: float = 2.0
    scale: float = 1.0

    def __post_init__(self):
        if self.law not in SCENERY_LAWS:
            raise ValueError(f"unknown scenery law {self.law!r}")
        if self.law == "lazy_rademacher" and not 0.0 <= self.q < 1.0:
            raise ValueError(f"q must lie in [0, 1), got {self.q}")
        if self.law == "symmetric_stable" and not 1.0 < self.beta <= 2.0:
            raise ValueError(f"beta must lie in (1, 2], got {self.beta}")
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    @property
    def tail_index(self) -> float:
        """beta: 2 for every square-integrable law."""
        return self.beta if self.law == "symmetric_stable" else 2.0

    @property
    def integer_valued(self) -> bool:
        return self.law in INTEGER_LAWS and float(self.scale).is_integer()

    @property
    def unit_increments(self) -> bool:
        """Whether xi lies in {-1, 0, 1} almost surely."""
        return self.law in INTEGER_LAWS and self.scale == 1.0

    @property
    def code(self) -> int:
        return SCENERY_LAWS[self.law]


@dataclass(frozen=True)
class RwrsSpec:
    walk: WalkSpec
    scenery: ScenerySpec

    @property
    def length(self) -> int:
        return self.walk.length

    def with_length(self, n: int) -> RwrsSpec:
        return RwrsSpec(WalkSpec(**{**self.walk.__dict__, "length": n}), self.scenery)


@dataclass(frozen=True)
class ScalingSequence:
    """a_n = n**gamma * (log n)**log_power."""

    regime: str
    gamma: float
    log_power: float = 0.0

    def a(self, n: float) -> float:
        value = n**self.gamma
        if self.log_power:
            value *= math.log(n) ** self.log_power
        return value

    @property
    def persistence_exponent(self) -> float:
        return 1.0 - self.gamma


def scaling_sequence(walk: WalkSpec, scenery: ScenerySpec) -> ScalingSequence:
    beta = scenery.tail_index
    if not beta > 1.0:
        raise ValueError("regime not covered")
    if walk.dimension == 1:
        alpha = walk.index
        if not 1.0 < alpha <= 2.0:
            raise ValueError("regime not covered")
        return ScalingSequence("d1_alpha", 1.0 - 1.0 / alpha + 1.0 / (alpha * beta))
    if walk.dimension == 2 and walk.kind in ("simple", "lazy"):
        return ScalingSequence("critical", 1.0 / beta, 1.0 - 1.0 / beta)
    if walk.dimension == 3 and walk.kind in ("simple", "lazy"):
        return ScalingSequence("transient", 1.0 / beta)
    raise ValueError("regime not covered")


def scaling_for(walk: WalkSpec, scenery: ScenerySpec, n: float) -> tuple[float, float]:
    """(a_n, predicted persistence exponent 1 - gamma)."""
    seq = scaling_sequence(walk, scenery)
    return seq.a(n), seq.persistence_exponent


@njit(cache=True, inline="always")
def scenery_value(law, q, beta, scale, k1, k2, site):
    u = keyed_uniform(k1, site)
    if law == RADEMACHER:
        x = -1.0 if u < 0.5 else 1.0
    elif law == LAZY_RADEMACHER:
        if u < q:
            x = 0.0
        elif u < q + 0.5 * (1.0 - q):
            x = -1.0
        else:
            x = 1.0
    elif law == GAUSSIAN:
        x = keyed_normal(k1, k2, site)
    elif law == BOUNDED_UNIFORM:
        x = 2.0 * u - 1.0
    else:
        x = cms_symmetric(beta, u, keyed_uniform(k2, site))
    return x * scale


@njit(cache=True, inline="always")
def _trial_keys(mkey, t, frozen, fkey):
    tkey = keyed_bits(mkey, U64(t))
    wkey = keyed_bits(tkey, U64(STREAM_WALK))
    skey = fkey if frozen else keyed_bits(tkey, U64(STREAM_SCENERY))
    return (keyed_bits(wkey, U64(0)), keyed_bits(wkey, U64(1)),
            keyed_bits(skey, U64(0)), keyed_bits(skey, U64(1)))


@njit(cache=True, inline="always")
def _advance(kind, d, hold, alpha, law, q, beta, scale, ka, kb, k1, k2, k, pos, z):
    """One step of the process; returns the new Z_k."""
    walk_step(kind, d, hold, alpha, ka, kb, k, pos)
    if law == WALK_ITSELF:
        return float(pos[0])
    return z + scenery_value(law, q, beta, scale, k1, k2, pack_site(d, pos))


@njit(cache=True, parallel=True)
def _first_events(kind, d, hold, alpha, law, q, beta, scale, mkey, trials, n, level, event,
                  frozen, fkey):
    out = np.empty(trials, dtype=np.int64)
    for t in prange(trials):
        ka, kb, k1, k2 = _trial_keys(mkey, t, frozen, fkey)
        pos = np.zeros(3, dtype=np.int64)
        z = 0.0
        hit = n + 1
        for k in range(1, n + 1):
            z = _advance(kind, d, hold, alpha, law, q, beta, scale, ka, kb, k1, k2, k, pos, z)
            if (event == EVENT_ABOVE and z > level) or (event == EVENT_RETURN and z == 0.0):
                hit = k
                break
        out[t] = hit
    return out


@njit(cache=True, parallel=True)
def _extremes(kind, d, hold, alpha, law, q, beta, scale, mkey, trials, checkpoints,
              frozen, fkey):
    c = checkpoints.size
    top = np.empty((trials, c))
    bottom = np.empty((trials, c))
    n = checkpoints[-1]
    for t in prange(trials):
        ka, kb, k1, k2 = _trial_keys(mkey, t, frozen, fkey)
        pos = np.zeros(3, dtype=np.int64)
        z = 0.0
        hi = -np.inf
        lo = np.inf
        j = 0
        for k in range(1, n + 1):
            z = _advance(kind, d, hold, alpha, law, q, beta, scale, ka, kb, k1, k2, k, pos, z)
            hi = max(hi, z)
            lo = min(lo, z)
            while j < c and checkpoints[j] == k:
                top[t, j] = hi
                bottom[t, j] = lo
                j += 1
    return top, bottom


@njit(cache=True)
def _one_path(kind, d, hold, alpha, law, q, beta, scale, ka, kb, k1, k2, n):
    z = np.zeros(n + 1)
    walk = np.zeros((n + 1, d), dtype=np.int64)
    pos = np.zeros(3, dtype=np.int64)
    for k in range(1, n + 1):
        z[k] = _advance(kind, d, hold, alpha, law, q, beta, scale, ka, kb, k1, k2, k, pos,
                        z[k - 1])
        walk[k, :] = pos[:d]
    return z, walk


def _process_args(spec) -> tuple:
    if isinstance(spec, RwrsSpec):
        w, s = spec.walk, spec.scenery
        return (w.code, w.dimension, w.hold, w.index, s.code, s.q, s.tail_index, s.scale)
    if isinstance(spec, WalkSpec):
        if spec.dimension != 1:
            raise ValueError("a walk used directly as the process must be one-dimensional")
        return (spec.code, 1, spec.hold, spec.index, WALK_ITSELF, 0.0, 2.0, 1.0)
    raise TypeError(f"unsupported process spec {type(spec).__name__}")


def _set_workers(workers: int) -> None:
    numba.set_num_threads(max(1, min(workers, numba.config.NUMBA_NUM_THREADS)))


def _frozen(scenery_seed: int | None) -> tuple[bool, np.uint64]:
    if scenery_seed is None:
        return False, U64(0)
    return True, U64(derive(scenery_seed, STREAM_SCENERY))


def first_event_times(spec, trials: int, seed: int, level: float = -1.0, event: str = "above",
                      workers: int = 1, scenery_seed: int | None = None) -> np.ndarray:
    """Per-trial time of the first event within ``spec.length`` steps, ``n + 1`` if none.

    ``event="above"``: first k >= 1 with Z_k > level (so the persistence event
    max_{1..n} Z <= level is ``time > n``).  ``event="return"``: first k >= 1
    with Z_k = 0.  ``scenery_seed`` freezes one scenery across all trials.
    """
    code = {"above": EVENT_ABOVE, "return": EVENT_RETURN}[event]
    frozen, fkey = _frozen(scenery_seed)
    _set_workers(workers)
    return _first_events(*_process_args(spec), U64(master_key(seed)), trials, spec.length,
                         float(level), code, frozen, fkey)


def running_extremes(spec, checkpoints, trials: int, seed: int, workers: int = 1,
                     scenery_seed: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """(max_{1..c} Z, min_{1..c} Z) per trial and checkpoint c; full paths, no early exit."""
    checkpoints = np.asarray(checkpoints, dtype=np.int64)
    if checkpoints.size == 0 or np.any(np.diff(checkpoints) <= 0) or checkpoints[0] < 1:
        raise ValueError("checkpoints must be strictly increasing and >= 1")
    frozen, fkey = _frozen(scenery_seed)
    _set_workers(workers)
    return _extremes(*_process_args(spec), U64(master_key(seed)), trials, checkpoints,
                     frozen, fkey)


def _path_keys(seed: int, scenery_seed: int | None = None):
    ka, kb = walk_keys(seed)
    skey = derive(seed if scenery_seed is None else scenery_seed, STREAM_SCENERY)
    return ka, kb, U64(derive(skey, 0)), U64(derive(skey, 1))


def sample_rwrs_with_walk(spec: RwrsSpec, seed: int,
                          scenery_seed: int | None = None) -> tuple[PathSample, np.ndarray]:
    z, walk = _one_path(*_process_args(spec), *_path_keys(seed, scenery_seed), spec.length)
    return PathSample(z, integer_valued=spec.scenery.integer_valued), walk


def sample_rwrs(spec: RwrsSpec, seed: int) -> PathSample:
    """One RWRS path; ``seed`` is a trial seed (see ``rng.trial_seed``)."""
    return sample_rwrs_with_walk(spec, seed)[0]


def scenery_at(scenery: ScenerySpec, seed: int, site) -> float:
    """xi at a lattice site (int or coordinate tuple) for trial seed ``seed``."""
    coords = np.atleast_1d(np.asarray(site, dtype=np.int64))
    pos = np.zeros(3, dtype=np.int64)
    pos[:coords.size] = coords
    _, _, k1, k2 = _path_keys(seed)
    return float(_scenery_at(scenery.code, scenery.q, scenery.tail_index, scenery.scale,
                             k1, k2, coords.size, pos))


@njit(cache=True)
def _scenery_at(law, q, beta, scale, k1, k2, d, pos):
    return scenery_value(law, q, beta, scale, k1, k2, pack_site(d, pos))
