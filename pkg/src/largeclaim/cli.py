"""Command line: ``largeclaim {premiums,asymptote,simulate,sweep,validate}``.

Exit codes: 0 ok, 1 usage error, 2 domain error, 3 validation failure.
A ``--config`` file holds ``key = value`` lines named after the flags;
flags given explicitly override it.
"""

import argparse
import sys

from .asymptotics import asymptotic_ruin_probability
from .config import ExperimentSpec, build_spec, load_config
from .experiments import (FMT, default_n_grid, run_asymptote, run_sweep, run_table1,
                          run_validate, simulate_point)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VALIDATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# argparse checks the types; values are handed on as strings so that flags and
# config files go through the same parser
_TYPES = {"r": int, "samples": int, "seed": int, "batch": int, "workers": int, "treaty": str}
_SCENARIO_FLAGS = ["treaty", "r", "alpha", "lambda", "theta", "theta-re", "a", "n", "contract-years"]
_SIM_FLAGS = ["samples", "delta", "w", "seed", "batch", "workers"]


def _checked(kind):
    def convert(text):
        kind(text)  # raises ValueError -> argparse usage error
        return text
    convert.__name__ = kind.__name__
    return convert


def _add(parser, names, **extra):
    for name in names:
        kind = _TYPES.get(name, float)
        kw = dict(default=None, dest=name.replace("-", "_"), type=_checked(kind))
        if name == "treaty":
            kw["choices"] = ["lcr", "ecomor"]
        parser.add_argument(f"--{name}", **kw, **extra)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="largeclaim", description="Ruin probabilities under LCR and ECOMOR reinsurance")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def command(name, help_, scenario=True, sim=False, grid=False):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", default=None, help="key = value file; flags override it")
        p.add_argument("--output", default=None, help="write CSV here instead of stdout")
        if scenario:
            _add(p, _SCENARIO_FLAGS)
        if sim:
            _add(p, _SIM_FLAGS)
            p.add_argument("--method", choices=["is", "crude"], default="is")
        if grid:
            p.add_argument("--n-grid", default=None, dest="n_grid",
                           help="comma or space separated horizons (default: 13 log-spaced 20..3000)")
        return p

    command("premiums", "expected reinsured amounts and premiums for r = 0..3")
    command("asymptote", "large-deviations approximation over an n grid", grid=True)
    command("simulate", "one Monte Carlo estimate", sim=True)
    command("sweep", "simulation estimates and asymptote over an n grid", sim=True, grid=True)
    v = command("validate", "run every cross-form oracle", scenario=False)
    v.add_argument("--seed", default=None)
    v.add_argument("--quick", action="store_true", help="smaller sample counts")
    return ap


def _spec(args) -> ExperimentSpec:
    base = load_config(args.config) if args.config else ExperimentSpec()
    values = {}
    for name in _SCENARIO_FLAGS + _SIM_FLAGS + ["n-grid", "output"]:
        v = getattr(args, name.replace("-", "_"), None)
        if v is not None:
            values[name] = v
    return build_spec(values, base)


def _emit(text: str, spec: ExperimentSpec) -> None:
    if spec.output:
        with open(spec.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dispatch(args) -> int:
    spec = _spec(args)
    if args.command == "premiums":
        _emit(run_table1(spec), spec)
    elif args.command == "asymptote":
        _emit(run_asymptote(spec), spec)
    elif args.command == "sweep":
        if not spec.n_grid:
            spec = ExperimentSpec(spec.scenario, default_n_grid(), spec.controls, spec.output)
        _emit(run_sweep(spec, args.method), spec)
    elif args.command == "simulate":
        row = simulate_point(spec.scenario, spec.controls, args.method)
        pct = 100.0 * row.relative_error
        line = ",".join([str(row.n), FMT % row.estimate, FMT % row.ci95, FMT % row.ld_approx, FMT % pct])
        _emit("n,estimate,ci95,ld_approx,rel_err_pct\n" + line + "\n", spec)
    elif args.command == "validate":
        checks = run_validate(seed=spec.controls.seed, quick=args.quick)
        text = "".join(c.line() + "\n" for c in checks)
        _emit(text, spec)
        return EXIT_OK if all(c.passed for c in checks) else EXIT_VALIDATION
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        return _dispatch(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
