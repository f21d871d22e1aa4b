"""Relative error of importance sampling and crude Monte Carlo across n.

    python3 scripts/relative_error_study.py --a 20 --n 20 50 100 500 2000 --samples 100000
"""

import argparse
import sys

from largeclaim.config import ScenarioConfig, SimControls
from largeclaim.experiments import simulate_point, sweep_point
from largeclaim.riskpath import Treaty

SCENARIOS = [(Treaty.LCR, 0)] + [(t, r) for r in (1, 2, 3) for t in Treaty]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", type=float, default=20.0)
    ap.add_argument("--n", type=int, nargs="+", default=[20, 50, 100, 500, 2000])
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=20240501)
    ap.add_argument("--skip-crude", action="store_true")
    args = ap.parse_args(argv)
    controls = SimControls(samples=args.samples, seed=args.seed)
    print("treaty,r,n,method,estimate,ci95,rel_err", flush=True)
    for treaty, r in SCENARIOS:
        base = ScenarioConfig(r=r, a=args.a, treaty=treaty, n=20.0)
        for method in ("is",) if args.skip_crude else ("is", "crude"):
            for n in args.n:
                row = simulate_point(sweep_point(base, n), controls, method)
                print(f"{treaty.value},{r},{n},{method},{row.estimate:.6e},{row.ci95:.6e},"
                      f"{row.relative_error:.6e}", flush=True)


if __name__ == "__main__":
    sys.exit(main())
