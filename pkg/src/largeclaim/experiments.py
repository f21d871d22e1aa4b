"""Experiment drivers behind the command line: premium table, asymptote
curves, simulation sweeps over n and the oracle validation suite."""

import io
import math
from dataclasses import dataclass, replace

import numpy as np

from .asymptotics import (PreconstantInputs, asymptotic_ruin_probability, preconstant,
                          preconstant_gamma_form, preconstant_quadrature, no_reinsurance_constant)
from .config import ExperimentSpec, ScenarioConfig, SimControls
from .montecarlo import crude_mc, importance_sampling
from .premiums import premium_table
from .riskpath import SamplePath, Treaty, TreatySpec, reinsured_series, ruin_functional, step_path_phi_oracle

FMT = "%.6e"


def default_n_grid(lo=20, hi=3000, points=13) -> tuple[int, ...]:
    """13 log-spaced integers from 20 to 3000 (reconstructed sweep range)."""
    return tuple(int(round(v)) for v in np.geomspace(lo, hi, points))


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else str(v) if isinstance(v, int) else FMT % v
                           for v in row) + "\n")
    return buf.getvalue()


def run_table1(spec: ExperimentSpec | None = None) -> str:
    base = (spec or ExperimentSpec()).scenario
    rows = premium_table(base)
    return _csv(["r", "pi_L", "pi_E", "q_L", "q_E", "c_L", "c_E"],
                [(p.r, p.pi_L, p.pi_E, p.q_L, p.q_E, p.c_L, p.c_E) for p in rows])


def run_asymptote(spec: ExperimentSpec) -> str:
    grid = spec.n_grid or default_n_grid()
    sc = spec.scenario
    rows = [(n, asymptotic_ruin_probability(sweep_point(sc, n))) for n in grid]
    return _csv(["n", "psi_approx"], rows)


def sweep_point(scenario: ScenarioConfig, n: float) -> ScenarioConfig:
    """Scenario at horizon ``n`` with premiums still set over the base contract."""
    return scenario.with_(n=float(n), contract_years=scenario.premium_years)


@dataclass(frozen=True)
class SweepRow:
    treaty: Treaty
    r: int
    a: float
    n: int
    estimate: float
    ci95: float
    ld_approx: float

    @property
    def ratio(self) -> float:
        return self.estimate / self.ld_approx if self.ld_approx > 0 else math.nan

    @property
    def relative_error(self) -> float:
        return self.ci95 / self.estimate if self.estimate > 0 else math.inf


def simulate_point(scenario: ScenarioConfig, controls: SimControls, method="is") -> SweepRow:
    if method == "is":
        res = importance_sampling(scenario, controls)
    elif method == "crude":
        res = crude_mc(scenario, controls)
    else:
        raise ValueError(f"unknown method {method!r}")
    return SweepRow(scenario.treaty, scenario.r, scenario.a, int(scenario.n), res.estimate,
                    res.ci95_halfwidth, asymptotic_ruin_probability(scenario))


SWEEP_HEADER = ["treaty", "r", "a", "n", "estimate", "ci95", "ld_approx", "ratio"]


def sweep_rows(spec: ExperimentSpec, method="is") -> list[SweepRow]:
    grid = spec.n_grid or default_n_grid()
    rows = []
    for n in grid:
        try:
            rows.append(simulate_point(sweep_point(spec.scenario, n), spec.controls, method))
        except Exception as exc:
            raise RuntimeError(f"simulation failed at n={n}: {exc}") from exc
    return rows


def format_sweep(rows) -> str:
    return _csv(SWEEP_HEADER, [(r.treaty.value, r.r, r.a, r.n, r.estimate, r.ci95, r.ld_approx, r.ratio)
                               for r in rows])


def run_sweep(spec: ExperimentSpec, method="is") -> str:
    return format_sweep(sweep_rows(spec, method))


# ---------------------------------------------------------------- validation

@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: float
    tolerance: float

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict} {self.name}: measured {FMT % self.measured} (tolerance {FMT % self.tolerance})"


PRECONSTANT_GRID = [(kind, r, alpha, ca) for kind in Treaty for r in range(4)
                    for alpha in (1.1, 1.5, 2.5) for ca in (-0.9, -0.5, 0.01, 0.2, 1.0, 5.0)]


def preconstant_spread(pre=preconstant, a=10.0) -> float:
    """Worst relative disagreement between the three pre-constant forms."""
    worst = 0.0
    for kind, r, alpha, ca in PRECONSTANT_GRID:
        inp = PreconstantInputs(kind, r, alpha, a, ca * a)
        ref = pre(inp)
        others = [preconstant_quadrature(inp)]
        if inp.c > 0:
            others.append(preconstant_gamma_form(inp))
        worst = max(worst, *(abs(v / ref - 1.0) for v in others))
    return worst


def r0_collapse_error(points=100, seed=11) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(points):
        a = rng.uniform(0.5, 200.0)
        c = a * 10.0 ** rng.uniform(-6.0, 1.0)
        alpha = rng.uniform(1.05, 4.0)
        got = preconstant(PreconstantInputs(Treaty.LCR, 0, alpha, a, c))
        ref = no_reinsurance_constant(a, c, alpha)
        worst = max(worst, abs(got / ref - 1.0))
    return worst


def step_oracle_error(paths=10_000, seed=12) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(paths):
        r = int(rng.integers(0, 4))
        kind = Treaty.LCR if i % 2 == 0 else Treaty.ECOMOR
        c = rng.uniform(-5.0, 5.0)
        k = int(rng.integers(0, r + 2))
        times = np.sort(rng.uniform(1e-3, 1.0, k))
        jumps = rng.uniform(0.05, 20.0, k)
        got = ruin_functional(SamplePath(1.0, times, jumps), TreatySpec(kind, r), c)
        worst = max(worst, abs(got - step_path_phi_oracle(jumps, times, r, c, kind)))
    return worst


def ecomor_identity_error(multisets=100_000, seed=13) -> float:
    """ECOMOR cover vs L - r X_(r+1), plus violations of the monotonicity laws."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(multisets):
        r = int(rng.integers(0, 4))
        size = int(rng.integers(1, 12))
        x = (1.0 - rng.random(size)) ** (-1 / 1.5) - 1.0
        p = SamplePath(1.0, np.arange(1, size + 1) / (size + 1), x)
        lcr = np.array([v for _, v in reinsured_series(p, TreatySpec(Treaty.LCR, r))])
        eco = np.array([v for _, v in reinsured_series(p, TreatySpec(Treaty.ECOMOR, r))])
        s = np.sort(x)[::-1]
        kth = s[r] if size > r else 0.0
        scale = max(1.0, float(s.sum()))
        expect = float(np.maximum(s - kth, 0.0).sum())
        worst = max(worst, abs(eco[-1] - expect) / scale)
        if size > r:
            worst = max(worst, abs(eco[-1] - (lcr[-1] - r * kth)) / scale)
        # ECOMOR <= LCR, and the retained part A - R never decreases
        retained = np.cumsum(x) - eco
        worst = max(worst, float(np.max(eco - lcr, initial=0.0)) / scale,
                    float(np.max(-np.diff(retained), initial=0.0)) / scale)
    return worst


def run_validate(seed: int = 20240501, quick: bool = False, pre=preconstant) -> list[Check]:
    checks = [
        Check("preconstant three-way agreement", *_le(preconstant_spread(pre), 1e-9)),
        Check("r = 0 collapse", *_le(r0_collapse_error(), 1e-12)),
        Check("step-path functional oracle", *_le(step_oracle_error(2_000 if quick else 10_000), 1e-12)),
        Check("ECOMOR identity and monotonicity",
              *_le(ecomor_identity_error(5_000 if quick else 100_000), 1e-12)),
    ]
    # IS against crude MC on a non-rare case
    sc = ScenarioConfig(r=1, n=20.0, a=5.0, treaty=Treaty.LCR)
    m_is, m_crude = (20_000, 100_000) if quick else (100_000, 1_000_000)
    a = importance_sampling(sc, SimControls(samples=m_is, seed=seed))
    b = crude_mc(sc, SimControls(samples=m_crude, seed=seed + 1))
    gap = abs(a.estimate - b.estimate)
    checks.append(Check("IS vs crude MC overlap", gap <= a.ci95_halfwidth + b.ci95_halfwidth,
                        gap, a.ci95_halfwidth + b.ci95_halfwidth))
    return checks


def _le(value, tol):
    return value <= tol, value, tol
