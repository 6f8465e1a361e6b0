"""Exact level -1 identities and P(max <= 0) for small horizons."""
import argparse

from persistkit.lattice import WalkSpec
from persistkit.mdm import MdmSpec
from persistkit.rwrs import RwrsSpec, ScenerySpec
from persistkit.stats import brute_force_persistence, verify_identities

SYSTEMS = {
    "simple walk": WalkSpec(1),
    "rademacher rwrs": RwrsSpec(WalkSpec(1), ScenerySpec("rademacher")),
    "lazy rwrs": RwrsSpec(WalkSpec(1, "lazy", hold=0.5), ScenerySpec("lazy_rademacher", q=0.5)),
    "mdm p=1/3": MdmSpec(1 / 3),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6)
    args = ap.parse_args()
    for name, spec in SYSTEMS.items():
        print(name)
        for n in range(1, args.max_n + 1):
            rep = verify_identities(spec, n)
            p = brute_force_persistence(spec, n).probability
            status = "ok" if rep.all_pass else "FAIL " + ", ".join(rep.failures)
            print(f"  n={n}  P(max <= 0) = {str(p):>14s}  identities {status}")


if __name__ == "__main__":
    main()
