"""Weighted log-log fit of the persistence exponent."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .estimate import PersistenceEstimate

Z95 = 1.959963984540054
MIN_POINTS = 4
# the smallest n is dropped when its residual exceeds this many RMS of the rest
TRIM_FACTOR = 3.0


@dataclass(frozen=True)
class ExponentFit:
    theta_hat: float
    intercept: float
    stderr: float
    grid: tuple[PersistenceEstimate, ...]
    log_correction: float | None = None
    residual_rms: float = 0.0
    trimmed: bool = False


def _sigma(e: PersistenceEstimate) -> float:
    # Wilson half-width turned into a standard error on log p
    return (e.ci_high - e.ci_low) / (2.0 * Z95 * e.p_hat)


def _wls(grid, with_log):
    n = np.array([e.n for e in grid], dtype=float)
    y = np.log([e.p_hat for e in grid])
    cols = [np.ones_like(n), np.log(n)]
    if with_log:
        cols.append(np.log(np.log(n)))
    x = np.column_stack(cols)
    sw = 1.0 / np.array([_sigma(e) for e in grid])
    coef, *_ = np.linalg.lstsq(x * sw[:, None], y * sw, rcond=None)
    cov = np.linalg.pinv((x * sw[:, None] ** 2).T @ x)
    return coef, cov, y - x @ coef


def fit_exponent(grid, with_log_correction: bool = False) -> ExponentFit:
    """Fit log p_n = c - theta log n (+ lambda log log n) by weighted least squares.

    Weights are 1/sigma_i^2 with sigma_i the Wilson half-width divided by
    1.96 p_i.  With five or more points the smallest n is dropped when it is
    an outlier against the fit of the others (pre-asymptotic transient).
    """
    grid = tuple(sorted(grid, key=lambda e: e.n))
    if len(grid) < MIN_POINTS:
        raise ValueError(f"need at least {MIN_POINTS} grid points, got {len(grid)}")
    if any(e.p_hat <= 0.0 for e in grid):
        raise ValueError("underpowered grid: some p_hat is 0")
    ns = [e.n for e in grid]
    if len(set(ns)) != len(ns):
        raise ValueError("grid horizons must be distinct")
    if with_log_correction and ns[0] < 3:
        raise ValueError("log correction needs n >= 3")
    if any(_sigma(e) <= 0.0 for e in grid):
        raise ValueError("grid entries need a confidence interval of positive width")

    trimmed = False
    if len(grid) >= MIN_POINTS + 1:
        coef, _, res = _wls(grid[1:], with_log_correction)
        x0 = [1.0, math.log(ns[0])] + ([math.log(math.log(ns[0]))] if with_log_correction else [])
        r0 = math.log(grid[0].p_hat) - float(np.dot(x0, coef))
        rms = float(np.sqrt(np.mean(res**2)))
        trimmed = abs(r0) > TRIM_FACTOR * rms and abs(r0) > 1e-12
    used = grid[1:] if trimmed else grid
    coef, cov, res = _wls(used, with_log_correction)
    return ExponentFit(
        theta_hat=float(-coef[1]),
        intercept=float(coef[0]),
        stderr=float(math.sqrt(max(cov[1, 1], 0.0))),
        grid=grid,
        log_correction=float(coef[2]) if with_log_correction else None,
        residual_rms=float(np.sqrt(np.mean(res**2))),
        trimmed=trimmed,
    )
