"""IS estimate / asymptote ratio for the premium-table scenarios over a few levels a.

    python3 scripts/convergence_study.py --a 20 80 300 --n 20 500 --samples 100000
"""

import argparse
import sys
import time

from largeclaim.config import ScenarioConfig, SimControls
from largeclaim.experiments import SWEEP_HEADER, format_sweep, simulate_point, sweep_point
from largeclaim.riskpath import Treaty

SCENARIOS = [(Treaty.LCR, 0)] + [(t, r) for r in (1, 2, 3) for t in Treaty]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", type=float, nargs="+", default=[20.0, 80.0, 300.0])
    ap.add_argument("--n", type=int, nargs="+", default=[20, 500])
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=20240501)
    args = ap.parse_args(argv)
    controls = SimControls(samples=args.samples, seed=args.seed)
    print(",".join(SWEEP_HEADER + ["rel_err", "seconds"]), flush=True)
    for a in args.a:
        for treaty, r in SCENARIOS:
            base = ScenarioConfig(r=r, a=a, treaty=treaty, n=20.0)
            for n in args.n:
                t0 = time.time()
                row = simulate_point(sweep_point(base, n), controls)
                line = format_sweep([row]).splitlines()[1]
                print(f"{line},{row.relative_error:.3f},{time.time() - t0:.1f}", flush=True)


if __name__ == "__main__":
    sys.exit(main())
