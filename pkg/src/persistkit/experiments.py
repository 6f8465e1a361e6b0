"""Dispatch a validated configuration to the estimators and write its artifacts."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .config import ExperimentConfig, build_delta, build_generator
from .scenery_limit import estimate_sup_delta
from .stats import (
    FAIL,
    brute_force_persistence,
    fit_exponent,
    mean_max_grid,
    persistence_grid,
    verify_identities,
)

GRID_HEADER = ("n", "level", "trials", "p_hat", "ci_low", "ci_high")
MEAN_MAX_HEADER = ("n", "trials", "a_n", "b_hat", "stderr")
SUP_DELTA_HEADER = ("inner_steps", "trials", "mean", "stderr", "extrapolated")
IDENTITY_HEADER = ("n", "identity", "status", "lhs", "rhs", "detail")
BRUTE_HEADER = ("n", "level", "probability", "probability_float", "enumerated_states")
EXIT_OK, EXIT_CONFIG, EXIT_IDENTITY = 0, 1, 2


@dataclass
class ExperimentResult:
    header: tuple[str, ...]
    rows: list[tuple]
    summary: dict
    exit_code: int = EXIT_OK
    fit: object = None
    grid: list = field(default_factory=list)


def _summary(cfg: ExperimentConfig, grid_rows: list[dict], fit=None, **extra) -> dict:
    out = {
        "experiment": cfg.experiment,
        "generator": cfg.generator or None,
        "theta_hat": fit.theta_hat if fit else None,
        "theta_stderr": fit.stderr if fit else None,
        "intercept": fit.intercept if fit else None,
        "log_correction": fit.log_correction if fit else None,
        "grid": grid_rows,
        "seed": cfg.seed,
        "toolkit_version": __version__,
    }
    out.update(extra)
    return out


def _persistence(cfg: ExperimentConfig) -> ExperimentResult:
    spec = build_generator(cfg.generator)
    grid = persistence_grid(spec, cfg.n_grid, cfg.level, cfg.trials, cfg.seed, cfg.event,
                            cfg.workers)
    fit = None
    extra = {}
    if len(grid) >= 4 and all(e.p_hat > 0 for e in grid):
        fit = fit_exponent(grid, cfg.log_correction)
        extra = {"trimmed": fit.trimmed, "residual_rms": fit.residual_rms}
    else:
        extra = {"fit_skipped": "need at least 4 grid points with p_hat > 0"}
    rows = [(e.n, e.level, e.trials, e.p_hat, e.ci_low, e.ci_high) for e in grid]
    summary = _summary(cfg, [dict(zip(GRID_HEADER, r)) for r in rows], fit,
                       event=cfg.event, **extra)
    return ExperimentResult(GRID_HEADER, rows, summary, fit=fit, grid=grid)


def _mean_max(cfg: ExperimentConfig) -> ExperimentResult:
    spec = build_generator(cfg.generator)
    est = mean_max_grid(spec, cfg.n_grid, cfg.trials, cfg.seed, cfg.workers)
    rows = [(e.n, e.trials, e.a_n, e.b_hat, e.stderr) for e in est]
    summary = _summary(cfg, [dict(zip(MEAN_MAX_HEADER, r)) for r in rows],
                       b_hat=est[-1].b_hat, b_stderr=est[-1].stderr)
    return ExperimentResult(MEAN_MAX_HEADER, rows, summary, grid=est)


def _sup_delta(cfg: ExperimentConfig) -> ExperimentResult:
    spec = build_delta(cfg)
    est = estimate_sup_delta(spec, cfg.seed, cfg.sup_delta.get("extrapolate", False),
                             cfg.workers)
    rows = [(est.inner_steps, est.trials, est.mean, est.stderr, est.extrapolated)]
    summary = _summary(cfg, [dict(zip(SUP_DELTA_HEADER, r)) for r in rows],
                       sup_delta={"driving_alpha": spec.driving_alpha, "mean": est.mean,
                                  "stderr": est.stderr})
    return ExperimentResult(SUP_DELTA_HEADER, rows, summary)


def _identities(cfg: ExperimentConfig) -> ExperimentResult:
    spec = build_generator(cfg.generator)
    trials = cfg.trials if cfg.method == "monte_carlo" else None
    rows, reports = [], []
    for n in cfg.n_grid:
        report = verify_identities(spec, n, trials, cfg.seed, cfg.workers)
        reports.append(report.as_dict())
        for r in report.results:
            d = r.as_dict()
            rows.append((n, d["name"], d["status"], d["lhs"], d["rhs"], d["detail"]))
    statuses = [r[2] for r in rows]
    summary = _summary(cfg, [dict(zip(IDENTITY_HEADER, r)) for r in rows],
                       identities="FAIL" if FAIL in statuses else "all PASS",
                       reports=reports)
    code = EXIT_IDENTITY if FAIL in statuses else EXIT_OK
    return ExperimentResult(IDENTITY_HEADER, rows, summary, exit_code=code)


def _brute_force(cfg: ExperimentConfig) -> ExperimentResult:
    spec = build_generator(cfg.generator)
    rows = []
    for n in cfg.n_grid:
        res = brute_force_persistence(spec, n, int(cfg.level))
        rows.append((n, int(cfg.level), str(res.probability), float(res.probability),
                     res.enumerated_states))
    summary = _summary(cfg, [dict(zip(BRUTE_HEADER, r)) for r in rows])
    return ExperimentResult(BRUTE_HEADER, rows, summary)


RUNNERS = {
    "persistence_grid": _persistence,
    "mean_max": _mean_max,
    "sup_delta": _sup_delta,
    "identities": _identities,
    "brute_force": _brute_force,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    return RUNNERS[cfg.experiment](cfg)


def write_csv(path: Path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")


def write_outputs(cfg: ExperimentConfig, result: ExperimentResult) -> list[Path]:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    written = [out / "results.csv", out / "summary.json"]
    write_csv(written[0], result.header, result.rows)
    write_json(written[1], result.summary)
    if cfg.plot and cfg.experiment in ("persistence_grid", "mean_max"):
        from .plotting import plot_mean_max, plot_persistence

        path = out / "plot.svg"
        if cfg.experiment == "persistence_grid":
            plot_persistence(result.grid, result.fit, path)
        else:
            plot_mean_max(result.grid, path)
        written.append(path)
    return written
