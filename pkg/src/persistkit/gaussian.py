"""Fractional Gaussian noise and its partial sums.

Paths are sampled exactly by circulant embedding (Davies-Harte).  The first
increment is drawn from its own stream and the rest of the path is produced
conditionally on it::

    X_j = X'_j + r(j - 1) * (x_1 - X'_1)

where X' is an unconditional embedding sample.  Since Cov(X'_j, X'_1) =
r(j - 1) this has exactly the fGN law, and a first-exit run can discard a
trial whose first increment already crosses the level without paying for an
FFT.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft
import scipy.linalg
from numba import njit

from .core import PathSample
from .rng import (
    STREAM_GAUSS_BODY,
    STREAM_GAUSS_HEAD,
    U64,
    derive,
    keyed_bits,
    keyed_normal,
    master_key,
)

EIGEN_TOLERANCE = 1e-10
BATCH = 64


@dataclass(frozen=True)
class FgnSpec:
    hurst: float
    length: int = 1

    def __post_init__(self):
        if not 0.0 < self.hurst < 1.0:
            raise ValueError(f"hurst must lie in (0, 1), got {self.hurst}")
        if self.length < 1:
            raise ValueError(f"length must be >= 1, got {self.length}")


def fgn_autocovariance(spec: FgnSpec, lag: int) -> float:
    """r(j) = E[X_0 X_j] for unit-variance fractional Gaussian noise."""
    if lag < 0:
        raise ValueError("lag must be non-negative")
    two_h = 2.0 * spec.hurst
    j = float(lag)
    return 0.5 * (abs(j + 1) ** two_h - 2.0 * j**two_h + abs(j - 1) ** two_h)


def autocovariances(hurst: float, n: int) -> np.ndarray:
    """r(0), ..., r(n - 1)."""
    two_h = 2.0 * hurst
    j = np.arange(n, dtype=np.float64)
    return 0.5 * (np.abs(j + 1) ** two_h - 2.0 * j**two_h + np.abs(j - 1) ** two_h)


def covariance_sum(hurst: float, n: int) -> float:
    """sum_{i,j=1..n} r(i - j), i.e. Var(Z_n); equals n ** (2H)."""
    r = autocovariances(hurst, n)
    k = np.arange(1, n)
    return math.fsum([n * r[0], *(2.0 * (n - k) * r[1:])])


@lru_cache(maxsize=32)
def circulant_eigenvalues(hurst: float, n: int) -> np.ndarray:
    """Eigenvalues lambda_0..lambda_n of the size-2n circulant embedding."""
    r = autocovariances(hurst, n + 1)
    row = np.concatenate([r, r[-2:0:-1]])
    lam = scipy.fft.rfft(row).real
    top = lam.max()
    if lam.min() < -EIGEN_TOLERANCE * top:
        raise RuntimeError("embedding failed")
    lam = np.clip(lam, 0.0, None)
    lam.setflags(write=False)
    return lam


class FgnSampler:
    """Maps standard normal draws to fGN partial-sum paths of a fixed length.

    ``head`` holds the first increments (shape ``(B,)``), ``body`` the
    ``2n`` embedding draws per path (shape ``(B, 2n)``).  The map is linear,
    so negating every draw negates the path.
    """

    def __init__(self, hurst: float, n: int):
        self.hurst = hurst
        self.n = n
        self.m = 2 * n
        lam = circulant_eigenvalues(hurst, n)
        m = self.m
        # irfft divides by m, so the spectral weights carry a factor m
        scale = np.sqrt(lam / (2.0 * m)) * m
        scale[0] = math.sqrt(lam[0] / m) * m
        scale[n] = math.sqrt(lam[n] / m) * m
        self._scale = scale
        self._r = autocovariances(hurst, n)

    def increments(self, head, body) -> np.ndarray:
        head = np.atleast_1d(np.asarray(head, dtype=np.float64))
        body = np.atleast_2d(np.asarray(body, dtype=np.float64))
        n = self.n
        spec = np.empty((body.shape[0], n + 1), dtype=np.complex128)
        spec[:, 0] = body[:, 0]
        spec[:, n] = body[:, 1]
        spec[:, 1:n].real = body[:, 2:2 * n:2]
        spec[:, 1:n].imag = body[:, 3:2 * n:2]
        spec *= self._scale
        free = scipy.fft.irfft(spec, n=self.m, axis=1, workers=1)[:, :n]
        return free + self._r * (head - free[:, 0])[:, None]

    def paths(self, head, body) -> np.ndarray:
        x = self.increments(head, body)
        z = np.zeros((x.shape[0], self.n + 1))
        np.cumsum(x, axis=1, out=z[:, 1:])
        return z


@njit(cache=True)
def _head_normals(mkey, start, count):
    out = np.empty(count)
    for i in range(count):
        tkey = keyed_bits(mkey, U64(start + i))
        skey = keyed_bits(tkey, U64(STREAM_GAUSS_HEAD))
        out[i] = keyed_normal(keyed_bits(skey, U64(0)), keyed_bits(skey, U64(1)), U64(0))
    return out


def _head_normal(seed: int) -> float:
    skey = derive(seed, STREAM_GAUSS_HEAD)
    return float(keyed_normal(U64(derive(skey, 0)), U64(derive(skey, 1)), U64(0)))


def _body_normals(seed: int, m: int, out: np.ndarray) -> None:
    gen = np.random.Generator(np.random.Philox(key=derive(seed, STREAM_GAUSS_BODY)))
    gen.standard_normal(m, out=out)


def sample_fgn(spec: FgnSpec, seed: int) -> PathSample:
    """Z_0..Z_n with Z_k the sum of the first k fGN increments.

    ``seed`` is a trial seed; ``sample_fgn(spec, trial_seed(master, t))``
    reproduces trial ``t`` of the batch estimators.
    """
    sampler = FgnSampler(spec.hurst, spec.length)
    body = np.empty((1, sampler.m))
    _body_normals(seed, sampler.m, body[0])
    z = sampler.paths([_head_normal(seed)], body)[0]
    return PathSample(z)


def _run_batches(sampler: FgnSampler, seed: int, trials_idx: np.ndarray, heads: np.ndarray,
                 reduce, out: np.ndarray, workers: int) -> None:
    mkey = master_key(seed)

    def job(lo: int) -> None:
        idx = trials_idx[lo:lo + BATCH]
        body = np.empty((idx.size, sampler.m))
        for row, t in enumerate(idx):
            _body_normals(derive(mkey, int(t)), sampler.m, body[row])
        out[lo:lo + idx.size] = reduce(sampler.paths(heads[lo:lo + idx.size], body))

    starts = range(0, trials_idx.size, BATCH)
    if workers <= 1:
        for lo in starts:
            job(lo)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(job, starts))


def fgn_first_exit(spec: FgnSpec, level: float, trials: int, seed: int,
                   workers: int = 1) -> np.ndarray:
    """First k >= 1 with Z_k > level for each trial; ``n + 1`` when censored."""
    n = spec.length
    heads = _head_normals(U64(master_key(seed)), 0, trials)
    exits = np.ones(trials, dtype=np.int64)
    alive = np.flatnonzero(heads <= level)
    if alive.size == 0:
        return exits
    sampler = FgnSampler(spec.hurst, n)

    def reduce(z: np.ndarray) -> np.ndarray:
        above = z[:, 1:] > level
        first = above.argmax(axis=1) + 1
        first[~above.any(axis=1)] = n + 1
        return first

    found = np.empty(alive.size, dtype=np.int64)
    _run_batches(sampler, seed, alive, heads[alive], reduce, found, workers)
    exits[alive] = found
    return exits


def fgn_running_max(spec: FgnSpec, checkpoints, trials: int, seed: int,
                    workers: int = 1) -> np.ndarray:
    """max_{1..c} Z for each trial (rows) and checkpoint c (columns)."""
    checkpoints = np.asarray(checkpoints, dtype=np.int64)
    sampler = FgnSampler(spec.hurst, spec.length)
    heads = _head_normals(U64(master_key(seed)), 0, trials)

    def reduce(z: np.ndarray) -> np.ndarray:
        run = np.maximum.accumulate(z[:, 1:], axis=1)
        return run[:, checkpoints - 1]

    out = np.empty((trials, checkpoints.size))
    _run_batches(sampler, seed, np.arange(trials), heads, reduce, out, workers)
    return out


def cholesky_fgn(hurst: float, normals: np.ndarray) -> np.ndarray:
    """Dense-Cholesky fGN increments, one path per row of ``normals``.

    Reference sampler for cross-validation; O(n^3), keep n <= 2048.
    """
    normals = np.atleast_2d(normals)
    n = normals.shape[1]
    cov = scipy.linalg.toeplitz(autocovariances(hurst, n))
    chol = np.linalg.cholesky(cov)
    return normals @ chol.T

