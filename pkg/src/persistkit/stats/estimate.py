"""Monte Carlo persistence and mean-maximum estimators.

Every estimator is a reduction over per-trial outcomes indexed by trial
number, so results do not depend on the worker count.  Grid estimators reuse
one batch of paths at the largest horizon: the prefix of a path of length N
is a path of length n <= N for all generators here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Union

import numpy as np
from statsmodels.stats.proportion import proportion_confint

from ..core import PathSample
from ..gaussian import FgnSpec, fgn_first_exit, fgn_running_max, sample_fgn
from ..lattice import WalkSpec, sample_walk
from ..mdm import MdmSpec, mdm_event_times, mdm_path, mdm_running_extremes
from ..rwrs import RwrsSpec, first_event_times, running_extremes, sample_rwrs, scaling_sequence

ProcessSpec = Union[FgnSpec, WalkSpec, RwrsSpec, MdmSpec]
MIN_TRIALS = 100


@dataclass(frozen=True)
class PersistenceEstimate:
    n: int
    level: float
    p_hat: float
    trials: int
    ci_low: float
    ci_high: float
    hits: int = -1
    event: str = "max"


def wilson_interval(hits, trials, confidence: float = 0.95):
    return proportion_confint(hits, trials, alpha=1.0 - confidence, method="wilson")


def make_estimate(n: int, level: float, hits: int, trials: int,
                  event: str = "max") -> PersistenceEstimate:
    lo, hi = wilson_interval(hits, trials)
    return PersistenceEstimate(int(n), float(level), hits / trials, int(trials),
                               float(lo), float(hi), int(hits), event)


def with_length(spec: ProcessSpec, n: int) -> ProcessSpec:
    if isinstance(spec, RwrsSpec):
        return spec.with_length(n)
    if isinstance(spec, (FgnSpec, WalkSpec, MdmSpec)):
        return replace(spec, length=n)
    raise ValueError(f"unknown generator spec {type(spec).__name__}")


def event_times(spec: ProcessSpec, trials: int, seed: int, level: float = -1.0,
                event: str = "max", workers: int = 1) -> np.ndarray:
    """Per-trial first time the event fails, ``n + 1`` if it held through ``spec.length``.

    ``event="max"``: first k with Z_k > level, so ``times > n`` is the event
    max_{1..n} Z <= level.  ``event="return"``: first return time T_0, so
    ``times > n`` is T_0 > n.
    """
    if event not in ("max", "return"):
        raise ValueError(f"unknown event {event!r}")
    if isinstance(spec, FgnSpec):
        if event == "return":
            raise ValueError("return times need an integer-valued process")
        return fgn_first_exit(spec, level, trials, seed, workers)
    if isinstance(spec, (WalkSpec, RwrsSpec)):
        kind = "above" if event == "max" else "return"
        return first_event_times(spec, trials, seed, level, kind, workers)
    if isinstance(spec, MdmSpec):
        t0, above = mdm_event_times(spec, trials, seed, level, workers=workers)
        return above if event == "max" else t0
    raise ValueError(f"unknown generator spec {type(spec).__name__}")


def persistence_grid(spec: ProcessSpec, ns, level: float, trials: int, seed: int,
                     event: str = "max", workers: int = 1) -> list[PersistenceEstimate]:
    """Estimates at every horizon in ``ns`` from one batch of ``max(ns)``-step paths."""
    if trials < MIN_TRIALS:
        raise ValueError(f"need at least {MIN_TRIALS} trials, got {trials}")
    ns = sorted(int(n) for n in ns)
    times = event_times(with_length(spec, ns[-1]), trials, seed, level, event, workers)
    return [make_estimate(n, level, int(np.count_nonzero(times > n)), trials, event) for n in ns]


def estimate_persistence(spec: ProcessSpec, n: int, level: float, trials: int, seed: int,
                         event: str = "max", workers: int = 1) -> PersistenceEstimate:
    """P(max_{1..n} Z <= level) (or P(T_0 > n) with ``event="return"``)."""
    return persistence_grid(spec, [n], level, trials, seed, event, workers)[0]


def scale_sequence(spec: ProcessSpec):
    """a_n for the process: the normalisation of max_{1..n} Z."""
    if isinstance(spec, FgnSpec):
        return lambda n: n**spec.hurst
    if isinstance(spec, WalkSpec):
        return lambda n: n ** (1.0 / spec.index)
    if isinstance(spec, RwrsSpec):
        return scaling_sequence(spec.walk, spec.scenery).a
    if isinstance(spec, MdmSpec):
        return lambda n: n**0.75
    raise ValueError(f"unknown generator spec {type(spec).__name__}")


def running_max(spec: ProcessSpec, ns, trials: int, seed: int, workers: int = 1) -> np.ndarray:
    """max_{1..n} Z per trial (rows) and horizon (columns)."""
    ns = np.asarray(sorted(int(n) for n in ns), dtype=np.int64)
    spec = with_length(spec, int(ns[-1]))
    if isinstance(spec, FgnSpec):
        return fgn_running_max(spec, ns, trials, seed, workers)
    if isinstance(spec, (WalkSpec, RwrsSpec)):
        return running_extremes(spec, ns, trials, seed, workers)[0]
    if isinstance(spec, MdmSpec):
        return mdm_running_extremes(spec, ns, trials, seed, workers)[0]
    raise ValueError(f"unknown generator spec {type(spec).__name__}")


@dataclass(frozen=True)
class MeanMaxEstimate:
    n: int
    trials: int
    a_n: float
    b_hat: float
    stderr: float


def mean_max_grid(spec: ProcessSpec, ns, trials: int, seed: int,
                  workers: int = 1) -> list[MeanMaxEstimate]:
    a = scale_sequence(spec)
    ns = sorted(int(n) for n in ns)
    top = running_max(spec, ns, trials, seed, workers)
    out = []
    for j, n in enumerate(ns):
        x = top[:, j] / a(n)
        out.append(MeanMaxEstimate(n, trials, a(n), math.fsum(x) / trials,
                                   float(np.std(x, ddof=1) / math.sqrt(trials))))
    return out


def estimate_mean_max(spec: ProcessSpec, n: int, trials: int, seed: int,
                      workers: int = 1) -> tuple[float, float]:
    """(B_hat, stderr) with B_hat the sample mean of max_{1..n} Z / a_n."""
    est = mean_max_grid(spec, [n], trials, seed, workers)[0]
    return est.b_hat, est.stderr


def sample_path(spec: ProcessSpec, seed: int) -> PathSample:
    """One path of ``spec.length`` steps for trial seed ``seed``."""
    if isinstance(spec, FgnSpec):
        return sample_fgn(spec, seed)
    if isinstance(spec, WalkSpec):
        if spec.dimension != 1:
            raise ValueError("a walk used directly as the process must be one-dimensional")
        return PathSample(sample_walk(spec, seed)[:, 0], integer_valued=True)
    if isinstance(spec, RwrsSpec):
        return sample_rwrs(spec, seed)
    if isinstance(spec, MdmSpec):
        return PathSample(mdm_path(spec, seed)[0], integer_valued=True)
    raise ValueError(f"unknown generator spec {type(spec).__name__}")


def unit_increments(spec: ProcessSpec) -> bool:
    """Whether increments lie in {-1, 0, 1} almost surely."""
    if isinstance(spec, WalkSpec):
        return spec.dimension == 1 and spec.kind in ("simple", "lazy")
    if isinstance(spec, RwrsSpec):
        return spec.scenery.unit_increments
    return isinstance(spec, MdmSpec)


def integer_valued(spec: ProcessSpec) -> bool:
    if isinstance(spec, RwrsSpec):
        return spec.scenery.integer_valued
    return isinstance(spec, (WalkSpec, MdmSpec))
