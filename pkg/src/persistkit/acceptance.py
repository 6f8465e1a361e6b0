"""The acceptance suite: every criterion as a function with a pinned seed.

``run_suite`` is what ``persistkit reproduce-paper`` executes.  The QUICK
profile shrinks every trial count and grid so the whole suite runs in
seconds; its statuses are smoke-level only, but its outputs are still
bit-reproducible, which is what the determinism criterion checks.
"""
from __future__ import annotations

import filecmp
import math
import sys
import tempfile
import time
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from . import __version__
from .experiments import write_csv, write_json
from .gaussian import FgnSpec, autocovariances, covariance_sum, fgn_autocovariance
from .lattice import WalkSpec
from .mdm import MdmSpec, mdm_constants, paired_counts
from .rng import derive
from .rwrs import RwrsSpec, ScenerySpec
from .scenery_limit import DeltaSpec, estimate_sup_delta
from .stats import (
    PASS,
    brute_force_persistence,
    estimate_mean_max,
    fit_exponent,
    persistence_grid,
    verify_identities,
)

DEFAULT_SEED = 20240917


@dataclass(frozen=True)
class Profile:
    name: str
    exact_n: int
    range_paths: int
    range_n: int
    pairs: int
    pair_n: int
    exponents: tuple[int, ...]
    trials: int
    mean_trials: int
    delta_steps: int
    delta_trials: int

    @property
    def grid(self) -> list[int]:
        return [2**k for k in self.exponents]


FULL = Profile("full", 6, 100_000, 256, 10_000, 2**10, tuple(range(8, 17)), 100_000, 10_000,
               2**14, 10_000)
QUICK = Profile("quick", 4, 2_000, 64, 1_000, 2**8, tuple(range(6, 11)), 2_000, 500,
                2**10, 500)
PROFILES = {"full": FULL, "quick": QUICK}


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    measured: dict
    target: str
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def line(self) -> str:
        shown = ", ".join(f"{k}={_fmt(v)}" for k, v in self.measured.items())
        return f"{self.status} criterion {self.number:2d} {self.title}: {shown} (target {self.target})"


def _fmt(v) -> str:
    return f"{v:.4g}" if isinstance(v, float) else str(v)


def _seed(seed: int, number: int) -> int:
    return derive(seed, number)


def _within(x: float, target: float, rel: float) -> bool:
    return abs(x - target) <= rel * abs(target)


EXACT_SYSTEMS = {
    "simple walk": WalkSpec(1, "simple"),
    "lazy walk": WalkSpec(1, "lazy", hold=1 / 3),
    "rademacher rwrs": RwrsSpec(WalkSpec(1, "simple"), ScenerySpec("rademacher")),
    "lazy_rademacher rwrs": RwrsSpec(WalkSpec(1, "lazy", hold=0.5),
                                     ScenerySpec("lazy_rademacher", q=1 / 3)),
    "mdm": MdmSpec(1 / 3),
}


def criterion_1(profile: Profile = FULL, seed: int = DEFAULT_SEED, workers: int = 1):
    failures = []
    checked = 0
    for name, system in EXACT_SYSTEMS.items():
        for n in range(1, profile.exact_n + 1):
            report = verify_identities(system, n)
            for r in report.results:
                checked += 1
                if r.status != PASS:
                    failures.append(f"{name} n={n} {r.name}: {r.status}")
    # fixed points of the oracle itself
    quarter = brute_force_persistence(EXACT_SYSTEMS["simple walk"], 2).probability
    rq = brute_force_persistence(EXACT_SYSTEMS["rademacher rwrs"], 2).probability
    ok = not failures and quarter == rq == 0.25
    return CriterionResult(1, "exact oracle identities", ok,
                           {"checks": checked, "failures": len(failures)},
                           "all PASS, exact rationals", {"failures": failures})


def criterion_2(profile: Profile = FULL, seed: int = DEFAULT_SEED, workers: int = 1):
    system = RwrsSpec(WalkSpec(1, "lazy", hold=0.3), ScenerySpec("lazy_rademacher", q=1 / 3))
    report = verify_identities(system, profile.range_n, profile.range_paths, _seed(seed, 2),
                               workers)
    r = next(x for x in report.results if x.name == "range")
    ok = r.status == PASS and r.lhs == r.rhs == profile.range_paths
    return CriterionResult(2, "range = max - min + 1 per path", ok,
                           {"paths": r.rhs, "agreeing": r.lhs, "n": profile.range_n},
                           "every path", {"report": report.as_dict()})


def criterion_3(profile: Profile = FULL, seed: int = DEFAULT_SEED, workers: int = 1):
    c = paired_counts(MdmSpec(1 / 3, profile.pair_n), profile.pairs, _seed(seed, 3), workers)
    lhs = c["below_original"] + c["below_flipped"]
    ok = lhs == c["survivors_original"] == c["survivors_flipped"]
    return CriterionResult(3, "MdM paired half identity", ok,
                           {"below_pairs": lhs, "survivors": c["survivors_original"]},
                           "exact equality", c)


def criterion_4(profile: Profile = FULL, seed: int = DEFAULT_SEED, workers: int = 1):
    worst_r = worst_sum = 0.0
    for h in (0.25, 0.5, 0.75):
        spec = FgnSpec(h)
        arr = autocovariances(h, 65)
        for j in range(65):
            ref = 0.5 * (abs(j + 1) ** (2 * h) - 2 * abs(j) ** (2 * h) + abs(j - 1) ** (2 * h))
            worst_r = max(worst_r, abs(fgn_autocovariance(spec, j) - ref), abs(arr[j] - ref))
        for n in range(1, 65):
            worst_sum = max(worst_sum, abs(covariance_sum(h, n) - n ** (2 * h)))
    ok = worst_r <= 1e-12 and worst_sum <= 1e-12
    return CriterionResult(4, "fGN covariance", ok,
                           {"max_r_error": worst_r, "max_sum_error": worst_sum}, "<= 1e-12")


def criterion_5(profile: Profile = FULL, seed: int = DEFAULT_SEED, workers: int = 1):
    # two QUICK reproductions with different worker counts, compared byte by byte
    with tempfile.TemporaryDirectory() as tmp:
        a, b = Path(tmp, "a"), Path(tmp, "b")
        run_suite(QUICK, seed, 1, a, skip=(5,), log=None)
        run_suite(QUICK, seed, max(2, workers), b, skip=(5,), log=None)
        names = sorted(p.name for p in a.iterdir())
        same_names = names == sorted(p.name for p in b.iterdir())
        _, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
    ok = same_names and not mismatch and not errors
    return CriterionResult(5, "determinism across runs and workers", ok,
                           {"files": len(names), "mismatched": len(mismatch) + len(errors)},
                           "byte-identical")


def _theta_criterion(number, title, spec, lo, hi, profile, seed, workers, event="max",
                     with_log=False):
    grid = persistence_grid(spec, profile.grid, -1.0, profile.trials, _seed(seed, number),
                            event, workers)
    fit = fit_exponent(grid)
    measured = {"theta": fit.theta_hat, "stderr": fit.stderr}
    details = {"grid": [[e.n, e.p_hat, e.ci_low, e.ci_high] for e in grid],
               "trimmed": fit.trimmed}
    if with_log:
        lf = fit_exponent(grid, with_log_correction=True)
        measured["theta_log_fit"] = lf.theta_hat
        measured["log_exponent"] = lf.log_correction
    ok = lo <= fit.theta_hat <= hi
    return grid, fit, CriterionResult(number, title, ok, measured, f"[{lo}, {hi}]", details)


def criterion_6(profile: Profile = FULL, seed: int = DEFAULT_SEED, workers: int = 1):
    return _theta_criterion(6, "fGN H = 0.5 exponent", FgnSpec(0.5), 0.45, 0.55,
                            profile, seed, workers)[2]


def criterion_7(profile: Profile = FULL, seed: int = DEFAULT_SEED, workers: int = 1):
    return _theta_criterion(7, "fGN H = 0.75 exponent", FgnSpec(0.75), 0.20, 0.30,
                            profile, seed, workers)[2]


def criterion_8(profile: Profile = FULL, seed: int = DEFAULT_SEED, workers: int = 1):
    spec = RwrsSpec(WalkSpec(1, "simple"), ScenerySpec("rademacher"))
    grid, fit, res = _theta_criterion(8, "RWRS d = 1 exponent and constant", spec, 0.20, 0.30,
                                      profile, seed, workers)
    n = grid[-1].n
    b_hat, b_se = estimate_mean_max(spec, n, profile.mean_trials, _seed(seed, 80), workers)
    scaled = n**0.25 * grid[-1].p_hat
    ratio = scaled / (0.375 * b_hat)
    ok = res.passed and _within(scaled, 0.375 * b_hat, 0.20)
    measured = {**res.measured, "n^(1/4) p_hat": scaled, "B_hat": b_hat,
                "ratio_to_3/8_B": ratio, "ratio_to_3/4_B": scaled / (0.75 * b_hat)}
    return CriterionResult(8, res.title, ok, measured,
                           f"theta {res.target}, n^(1/4) p_hat within 20% of (3/8) B_hat",
                           {**res.details, "b_stderr": b_se})


def criterion_9(profile: Profile = FULL, seed: int = DEFAULT_SEED, workers: int = 1):
    d3 = _theta_criterion(9, "RWRS d = 3", RwrsSpec(WalkSpec(3), ScenerySpec()),
                          0.45, 0.55, profile, seed, workers)[2]
    d2 = _theta_criterion(90, "RWRS d = 2", RwrsSpec(WalkSpec(2), ScenerySpec()),
                          0.43, 0.57, profile, seed, workers, with_log=True)[2]
    measured = {"theta_d3": d3.measured["theta"], "theta_d2": d2.measured["theta"],
                "theta_d2_log_fit": d2.measured["theta_log_fit"],
                "log_exponent_d2": d2.measured["log_exponent"]}
    return CriterionResult(9, "RWRS d = 3 and d = 2 exponents", d3.passed and d2.passed,
                           measured, "d3 [0.45, 0.55], d2 [0.43, 0.57]",
                           {"d3": d3.details, "d2": d2.details})


def criterion_10(profile: Profile = FULL, seed: int = DEFAULT_SEED, workers: int = 1):
    spec = RwrsSpec(WalkSpec(1, "stable", alpha=1.5), ScenerySpec("gaussian"))
    return _theta_criterion(10, "stable walk in Gaussian scenery", spec, 0.28, 0.39,
                            profile, seed, workers)[2]


@lru_cache(maxsize=8)
def _sup_delta(profile: Profile, seed: int, workers: int):
    spec = DeltaSpec(2.0, profile.delta_steps, profile.delta_trials)
    return estimate_sup_delta(spec, _seed(seed, 11), workers=workers)


def criterion_11(profile: Profile = FULL, seed: int = DEFAULT_SEED, workers: int = 1):
    est = _sup_delta(profile, seed, workers)
    ok = abs(est.mean - 0.54) <= 0.04 and est.stderr <= 0.01
    return CriterionResult(11, "E sup Delta", ok,
                           {"mean": est.mean, "stderr": est.stderr, "N": est.inner_steps},
                           "0.54 +/- 0.04, stderr <= 0.01")


def criterion_12(profile: Profile = FULL, seed: int = DEFAULT_SEED, workers: int = 1):
    grid, fit, res = _theta_criterion(12, "MdM survival exponent and constant", MdmSpec(1 / 3),
                                      0.20, 0.30, profile, seed, workers, event="return")
    sup = _sup_delta(profile, seed, workers).mean
    _, kappa = mdm_constants(1 / 3, sup)
    scaled = grid[-1].n ** 0.25 * grid[-1].p_hat
    ok = res.passed and _within(scaled, kappa, 0.20)
    measured = {**res.measured, "n^(1/4) p_hat": scaled, "kappa": kappa}
    return CriterionResult(12, res.title, ok, measured,
                           f"theta {res.target}, within 20% of kappa", res.details)


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}


def run_suite(profile: Profile, seed: int, workers: int, out: Path | None,
              only=None, skip=(), log=sys.stdout) -> list[CriterionResult]:
    """Run the criteria, print one PASS/FAIL line each, write acceptance.{csv,json}."""
    results = []
    for number, fn in CRITERIA.items():
        if number in skip or (only and number not in only):
            continue
        t = time.perf_counter()
        try:
            res = fn(profile, seed, workers)
        except (ValueError, RuntimeError) as exc:
            res = CriterionResult(number, fn.__name__, False, {"error": str(exc)}, "no error")
        results.append(res)
        if log is not None:
            print(f"{res.line()} [{time.perf_counter() - t:.1f} s]", file=log, flush=True)
    if out is not None:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(out / "acceptance.csv", ("criterion", "title", "status", "measured", "target"),
                  [(r.number, r.title, r.status,
                    "; ".join(f"{k}={_fmt(v)}" for k, v in r.measured.items()), r.target)
                   for r in results])
        write_json(out / "acceptance.json", {
            "profile": profile.name, "seed": seed, "toolkit_version": __version__,
            "criteria": [{"number": r.number, "title": r.title, "status": r.status,
                          "measured": _plain(r.measured), "target": r.target,
                          "details": _plain(r.details)} for r in results]})
    return results


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if hasattr(obj, "item"):
        return obj.item()
    return obj
