"""Deterministic SVG log-log plots."""
from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_RC = {"svg.hashsalt": "persistkit", "svg.fonttype": "none", "font.size": 10}


def _save(fig, path: Path) -> None:
    # no Date metadata and a fixed hash salt keep reruns byte-identical
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_persistence(grid, fit, path: Path) -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5.5, 4.0))
        ns = [e.n for e in grid]
        p = [e.p_hat for e in grid]
        err = [[e.p_hat - e.ci_low for e in grid], [e.ci_high - e.p_hat for e in grid]]
        ax.errorbar(ns, p, yerr=err, fmt="o", ms=4, capsize=2, color="k", label="estimate")
        if fit is not None:
            def model(n):
                y = fit.intercept - fit.theta_hat * math.log(n)
                if fit.log_correction is not None:
                    y += fit.log_correction * math.log(math.log(n))
                return math.exp(y)
            ax.plot(ns, [model(n) for n in ns], "-", color="tab:red",
                    label=f"fit, theta = {fit.theta_hat:.3f} +/- {fit.stderr:.3f}")
        ax.set_xscale("log", base=2)
        ax.set_yscale("log")
        ax.set_xlabel("n")
        ax.set_ylabel("persistence probability")
        ax.legend(frameon=False)
        fig.tight_layout()
        _save(fig, path)


def plot_mean_max(est, path: Path) -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5.5, 4.0))
        ax.errorbar([e.n for e in est], [e.b_hat for e in est],
                    yerr=[2 * e.stderr for e in est], fmt="o-", ms=4, capsize=2, color="k")
        ax.set_xscale("log", base=2)
        ax.set_xlabel("n")
        ax.set_ylabel("E[max Z] / a_n")
        fig.tight_layout()
        _save(fig, path)
