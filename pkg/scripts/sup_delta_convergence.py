"""E sup Delta against the inner discretisation, with and without extrapolation."""
import argparse

from persistkit.mdm import mdm_constants
from persistkit.scenery_limit import DeltaSpec, estimate_sup_delta


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--max-exp", type=int, default=14)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    print(f"{'N':>7s} {'raw':>8s} {'extrap':>8s} {'stderr':>8s} {'kappa':>8s}")
    for k in range(8, args.max_exp + 1, 2):
        spec = DeltaSpec(2.0, 2**k, args.trials)
        raw = estimate_sup_delta(spec, args.seed, extrapolate=False, workers=args.workers)
        ext = estimate_sup_delta(spec, args.seed, extrapolate=True, workers=args.workers)
        kappa = mdm_constants(1 / 3, ext.mean)[1]
        print(f"{2**k:7d} {raw.mean:8.4f} {ext.mean:8.4f} {ext.stderr:8.4f} {kappa:8.4f}")


if __name__ == "__main__":
    main()
