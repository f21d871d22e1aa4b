"""Simulation estimates and asymptote over the default n grid, one CSV per
(treaty, r, a): data for log-log plots of estimate (points) against the
large-deviations approximation (line).

    python3 scripts/figure_sweeps.py --out results/sweeps --a 20 80 300 --samples 20000
"""

import argparse
import sys
from pathlib import Path

from largeclaim.config import ExperimentSpec, ScenarioConfig, SimControls
from largeclaim.experiments import default_n_grid, run_sweep
from largeclaim.riskpath import Treaty


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results/sweeps"))
    ap.add_argument("--a", type=float, nargs="+", default=[20.0, 80.0, 300.0])
    ap.add_argument("--r", type=int, nargs="+", default=[0, 1, 2, 3])
    ap.add_argument("--samples", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=20240501)
    ap.add_argument("--n-grid", type=int, nargs="+", default=list(default_n_grid()))
    args = ap.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    controls = SimControls(samples=args.samples, seed=args.seed)
    for a in args.a:
        for r in args.r:
            for treaty in (Treaty.LCR,) if r == 0 else tuple(Treaty):
                spec = ExperimentSpec(ScenarioConfig(r=r, a=a, treaty=treaty, n=20.0),
                                      tuple(args.n_grid), controls)
                target = args.out / f"{treaty.value}_r{r}_a{a:g}.csv"
                target.write_text(run_sweep(spec))
                print(f"wrote {target}", flush=True)


if __name__ == "__main__":
    sys.exit(main())
