"""Random walks on Z^d and their occupation statistics."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .rng import STREAM_WALK, U64, derive, keyed_uniform

SIMPLE, LAZY, STABLE = 0, 1, 2
WALK_KINDS = {"simple": SIMPLE, "lazy": LAZY, "stable": STABLE}

# packed site coordinates use 21 bits per axis
_COORD_BITS = 21
_COORD_MASK = (1 << _COORD_BITS) - 1
_STABLE_CLIP = 2.0**52


@dataclass(frozen=True)
class WalkSpec:
    dimension: int = 1
    kind: str = "simple"
    hold: float = 0.0
    alpha: float = 2.0
    length: int = 1

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.dimension}")
        if self.kind not in WALK_KINDS:
            raise ValueError(f"unknown walk kind {self.kind!r}")
        if self.kind == "lazy" and not 0.0 <= self.hold < 1.0:
            raise ValueError(f"hold probability must lie in [0, 1), got {self.hold}")
        if self.kind == "stable":
            if self.dimension != 1:
                raise ValueError("stable walks are only supported for dimension 1")
            if not 1.0 < self.alpha <= 2.0:
                raise ValueError(f"alpha must lie in (1, 2], got {self.alpha}")
        if self.length < 1:
            raise ValueError(f"length must be >= 1, got {self.length}")

    @property
    def index(self) -> float:
        """Stable index of the walk: 2 for nearest-neighbour kinds."""
        return self.alpha if self.kind == "stable" else 2.0

    @property
    def code(self) -> int:
        return WALK_KINDS[self.kind]


@dataclass(frozen=True)
class OccupationStats:
    walk_range: int
    self_intersections: int
    v_beta: float


@njit(cache=True, inline="always")
def cms_symmetric(alpha, u1, u2):
    """Chambers-Mallows-Stuck symmetric alpha-stable draw, E exp(itX) = exp(-|t|^alpha)."""
    v = math.pi * (u1 - 0.5)
    w = -math.log(u2)
    if alpha == 2.0:
        return 2.0 * math.sin(v) * math.sqrt(w)
    return (math.sin(alpha * v) / math.cos(v) ** (1.0 / alpha)
            * (math.cos((1.0 - alpha) * v) / w) ** ((1.0 - alpha) / alpha))


@njit(cache=True, inline="always")
def walk_step(kind, d, hold, alpha, ka, kb, k, pos):
    """Advance ``pos`` in place by step number ``k`` of the keyed walk stream."""
    u = keyed_uniform(ka, U64(k))
    if kind == STABLE:
        x = cms_symmetric(alpha, u, keyed_uniform(kb, U64(k)))
        x = min(max(x, -_STABLE_CLIP), _STABLE_CLIP)
        pos[0] += np.int64(math.floor(x + 0.5))
        return
    if kind == LAZY:
        if u < hold:
            return
        u = keyed_uniform(kb, U64(k))
    j = min(int(u * 2 * d), 2 * d - 1)
    if j & 1:
        pos[j >> 1] += 1
    else:
        pos[j >> 1] -= 1


@njit(cache=True, inline="always")
def pack_site(d, pos):
    if d == 1:
        return U64(pos[0])
    m = U64(_COORD_MASK)
    key = U64(pos[0]) & m
    key |= (U64(pos[1]) & m) << U64(_COORD_BITS)
    if d == 3:
        key |= (U64(pos[2]) & m) << U64(2 * _COORD_BITS)
    return key


def walk_keys(seed: int) -> tuple[np.uint64, np.uint64]:
    wkey = derive(seed, STREAM_WALK)
    return U64(derive(wkey, 0)), U64(derive(wkey, 1))


@njit(cache=True)
def _walk_path(kind, d, hold, alpha, ka, kb, n):
    out = np.zeros((n + 1, d), dtype=np.int64)
    pos = np.zeros(3, dtype=np.int64)
    for k in range(1, n + 1):
        walk_step(kind, d, hold, alpha, ka, kb, k, pos)
        out[k, :] = pos[:d]
    return out


def sample_walk(spec: WalkSpec, seed: int) -> np.ndarray:
    """Lattice path S_0..S_n as an ``(n + 1, d)`` integer array with S_0 = 0."""
    ka, kb = walk_keys(seed)
    return _walk_path(spec.code, spec.dimension, spec.hold, spec.index, ka, kb, spec.length)


@njit(cache=True)
def _stable_draws(alpha, ka, kb, size):
    out = np.empty(size)
    for i in range(size):
        out[i] = cms_symmetric(alpha, keyed_uniform(ka, U64(i)), keyed_uniform(kb, U64(i)))
    return out


def stable_draws(alpha: float, size: int, seed: int) -> np.ndarray:
    """``size`` i.i.d. symmetric alpha-stable draws (alpha = 2 gives N(0, 2))."""
    if not 1.0 < alpha <= 2.0:
        raise ValueError(f"alpha must lie in (1, 2], got {alpha}")
    ka, kb = walk_keys(seed)
    return _stable_draws(alpha, ka, kb, size)


def sample_stable_step(alpha: float, seed: int) -> float:
    return float(stable_draws(alpha, 1, seed)[0])


def _sites(path) -> np.ndarray:
    path = np.asarray(path)
    if path.ndim == 1:
        path = path[:, None]
    if path.shape[0] < 2:
        raise ValueError("path needs at least one step")
    return path[1:]


def visit_counts(path) -> dict[tuple[int, ...], int]:
    """N_n(y) = #{k = 1..n : S_k = y} for every visited site y."""
    sites, counts = np.unique(_sites(path), axis=0, return_counts=True)
    return {tuple(int(c) for c in s): int(k) for s, k in zip(sites, counts)}


def occupation_stats(path, beta: float = 2.0) -> OccupationStats:
    _, counts = np.unique(_sites(path), axis=0, return_counts=True)
    counts = counts.astype(np.int64)
    return OccupationStats(
        walk_range=int(counts.size),
        self_intersections=int(np.sum(counts * counts)),
        v_beta=math.fsum(counts.astype(np.float64) ** beta),
    )
