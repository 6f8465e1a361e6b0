"""Exact and Monte Carlo checks of the range, return-time and persistence identities.

Identities (level -1 throughout):

* ``range``: #{Z_0..Z_n} = max - min + 1 path by path (unit increments).
* ``event``: {max_{1..n} Z <= -1} = {T_0 > n, Z_1 <= -1} path by path.
* ``half``: P(max_{1..n} Z <= -1) = P(T_0 > n) / 2 (symmetric unit increments).
* ``range_return``: E[#{Z_0..Z_n}] = sum_{k=0..n} P(T_0 > k) (integer paths).
* ``upper_bound``: n P(max_{1..n} Z <= -1) <= E[max_{0..n} Z].
* ``monotone``: k -> P(T_0 > k) is non-increasing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..core import CENSORED, path_stats
from ..mdm import MdmSpec, paired_counts
from ..rng import trial_seed
from .estimate import integer_valued, sample_path, unit_increments, with_length
from .oracle import DEFAULT_BUDGET, exact_law

PASS, FAIL, NOT_APPLICABLE = "PASS", "FAIL", "NOT APPLICABLE"
IDENTITIES = ("range", "event", "half", "range_return", "upper_bound", "monotone")
# statistical checks fail beyond this many standard errors
Z_TOL = 4.0


@dataclass(frozen=True)
class IdentityResult:
    name: str
    status: str
    lhs: object = None
    rhs: object = None
    detail: str = ""

    def as_dict(self) -> dict:
        def enc(v):
            return str(v) if isinstance(v, Fraction) else v
        return {"name": self.name, "status": self.status, "lhs": enc(self.lhs),
                "rhs": enc(self.rhs), "detail": self.detail}


@dataclass(frozen=True)
class IdentityReport:
    system: str
    n: int
    mode: str
    results: tuple[IdentityResult, ...]

    @property
    def failures(self) -> list[IdentityResult]:
        return [r for r in self.results if r.status == FAIL]

    @property
    def all_pass(self) -> bool:
        return not self.failures

    def status(self, name: str) -> str:
        return next(r.status for r in self.results if r.name == name)

    def as_dict(self) -> dict:
        return {"system": self.system, "n": self.n, "mode": self.mode,
                "identities": [r.as_dict() for r in self.results]}


def _na(name: str, why: str) -> IdentityResult:
    return IdentityResult(name, NOT_APPLICABLE, detail=why)


def _verdict(ok: bool) -> str:
    return PASS if ok else FAIL


def _brute_force(system, n: int, budget: int) -> list[IdentityResult]:
    law = exact_law(system, n, -1, budget)
    out = []
    if law.unit_steps:
        out.append(IdentityResult("range", _verdict(law.range_violations == 0),
                                  law.leaves - law.range_violations, law.leaves,
                                  "paths with range = max - min + 1 / all paths"))
        out.append(IdentityResult("event", _verdict(law.event_violations == 0),
                                  law.p_event, law.p_survive_down,
                                  f"{law.event_violations} paths disagree"))
        half = law.survival[n] / 2
        out.append(IdentityResult("half", _verdict(law.p_event == half), law.p_event, half))
    else:
        out += [_na(k, "increments outside {-1, 0, 1}") for k in ("range", "event", "half")]
    total = sum(law.survival, Fraction(0))
    out.append(IdentityResult("range_return", _verdict(law.mean_range == total),
                              law.mean_range, total))
    out.append(IdentityResult("upper_bound", _verdict(n * law.p_event <= law.mean_max0),
                              n * law.p_event, law.mean_max0))
    mono = all(a >= b for a, b in zip(law.survival, law.survival[1:]))
    out.append(IdentityResult("monotone", _verdict(mono), law.survival[0], law.survival[n]))
    return out


def _monte_carlo(system, n: int, trials: int, seed: int, workers: int) -> list[IdentityResult]:
    spec = with_length(system, n)
    unit = unit_increments(spec)
    integer = integer_valued(spec)
    range_ok = event_ok = below = survivors = 0
    ranges = np.zeros(trials)
    clipped_t0 = np.zeros(trials)
    max0 = np.zeros(trials)
    for t in range(trials):
        path = sample_path(spec, trial_seed(seed, t))
        st = path_stats(path)
        max0[t] = max(st.max_1n, 0.0)
        is_below = bool(st.max_1n <= -1)
        below += is_below
        if not integer:
            continue
        survived = st.first_return is CENSORED
        survivors += survived
        ranges[t] = st.range_count
        clipped_t0[t] = n + 1 if survived else st.first_return
        if unit:
            range_ok += int(st.range_count == max(st.max_1n, 0) - min(st.min_1n, 0) + 1)
            event_ok += int(is_below == (survived and bool(path.values[1] <= -1)))

    out = []
    if unit:
        out.append(IdentityResult("range", _verdict(range_ok == trials), range_ok, trials,
                                  "paths with range = max - min + 1 / all paths"))
        out.append(IdentityResult("event", _verdict(event_ok == trials), event_ok, trials,
                                  "paths where both events agree / all paths"))
        if isinstance(system, MdmSpec):
            c = paired_counts(spec, trials, seed, workers)
            lhs = c["below_original"] + c["below_flipped"]
            out.append(IdentityResult("half", _verdict(lhs == c["survivors_original"]), lhs,
                                      c["survivors_original"],
                                      "orientation-flip pairs: below counts vs survivors"))
        else:
            z = (below - survivors / 2) / math.sqrt(max(survivors, 1) / 4)
            out.append(IdentityResult("half", _verdict(abs(z) <= Z_TOL), below, survivors / 2,
                                      f"statistical, z = {z:.2f}"))
    else:
        out += [_na(k, "increments outside {-1, 0, 1}") for k in ("range", "event", "half")]
    if integer:
        # sum_{k=0..n} 1{T_0 > k} = min(T_0, n + 1) per path
        d = ranges - clipped_t0
        se = float(np.std(d, ddof=1)) / math.sqrt(trials)
        mean = float(np.mean(d))
        ok = mean == 0.0 or abs(mean) <= Z_TOL * se
        out.append(IdentityResult("range_return", _verdict(ok), float(np.mean(ranges)),
                                  float(np.mean(clipped_t0)), f"statistical, diff = {mean:.4g}"))
    else:
        out.append(_na("range_return", "path is not integer-valued"))
    p = below / trials
    se = math.sqrt(n * n * p * (1 - p) / trials + np.var(max0, ddof=1) / trials)
    lhs, rhs = n * p, float(np.mean(max0))
    out.append(IdentityResult("upper_bound", _verdict(lhs <= rhs + Z_TOL * se), lhs, rhs,
                              "statistical"))
    out.append(_na("monotone", "exact check only"))
    return out


def verify_identities(system, n: int, trials: int | None = None, seed: int = 0,
                      workers: int = 1, budget: int = DEFAULT_BUDGET) -> IdentityReport:
    """Check every identity; brute force when ``trials`` is None, Monte Carlo otherwise."""
    if trials is None:
        results = _brute_force(system, n, budget)
        mode = "brute_force"
    else:
        results = _monte_carlo(system, n, trials, seed, workers)
        mode = "monte_carlo"
    return IdentityReport(type(system).__name__, n, mode, tuple(results))
