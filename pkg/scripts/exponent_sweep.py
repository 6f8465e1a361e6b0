"""Persistence exponents for a handful of generators on one dyadic grid.

    python3 scripts/exponent_sweep.py --trials 20000 --max-exp 14
"""
import argparse

from persistkit.gaussian import FgnSpec
from persistkit.lattice import WalkSpec
from persistkit.mdm import MdmSpec
from persistkit.rwrs import RwrsSpec, ScenerySpec
from persistkit.stats import fit_exponent, persistence_grid

SYSTEMS = {
    "fgn H=0.3": (FgnSpec(0.3), "max", 0.7),
    "fgn H=0.5": (FgnSpec(0.5), "max", 0.5),
    "fgn H=0.75": (FgnSpec(0.75), "max", 0.25),
    "walk d=1": (WalkSpec(1), "max", 0.5),
    "rwrs d=1": (RwrsSpec(WalkSpec(1), ScenerySpec("rademacher")), "max", 0.25),
    "rwrs d=3": (RwrsSpec(WalkSpec(3), ScenerySpec()), "max", 0.5),
    "rwrs stable 1.5": (RwrsSpec(WalkSpec(1, "stable", alpha=1.5), ScenerySpec("gaussian")),
                        "max", 1 / 3),
    "mdm p=1/3": (MdmSpec(1 / 3), "return", 0.25),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=20_000)
    ap.add_argument("--min-exp", type=int, default=6)
    ap.add_argument("--max-exp", type=int, default=14)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    ns = [2**k for k in range(args.min_exp, args.max_exp + 1)]
    print(f"{'system':18s} {'theta':>8s} {'stderr':>8s} {'expected':>8s}")
    for name, (spec, event, expected) in SYSTEMS.items():
        grid = persistence_grid(spec, ns, -1.0, args.trials, args.seed, event, args.workers)
        fit = fit_exponent(grid)
        print(f"{name:18s} {fit.theta_hat:8.4f} {fit.stderr:8.4f} {expected:8.4f}")


if __name__ == "__main__":
    main()
