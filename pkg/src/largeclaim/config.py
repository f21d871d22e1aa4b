"""Scenario and simulation settings, plus the flat ``key = value`` file format
used to archive experiments.

Keys in a config file are the CLI flag names without the leading dashes
(``theta-re``, ``samples``, ...); flags given on the command line override
file values.
"""

from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from .riskpath import Treaty, TreatySpec

@dataclass(frozen=True)
class ScenarioConfig:
    """One risk scenario.

    ``n`` is both the horizon in years and the large-deviations scaling
    parameter (initial capital ``n * a``).  Premiums are computed over a
    contract of ``contract_years`` (default ``n``); sweeps over ``n`` keep
    the contract fixed so the drift stays at its tabulated value.
    """

    r: int = 0
    alpha: float = 1.5
    lam: float = 10.0
    theta: float = 0.2
    theta_re: float = 0.3
    n: float = 20.0
    a: float = 20.0
    treaty: Treaty = Treaty.LCR
    contract_years: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "treaty", Treaty(self.treaty))
        if self.r < 0 or int(self.r) != self.r:
            raise ValueError(f"r must be a nonnegative integer, got {self.r}")
        object.__setattr__(self, "r", int(self.r))
        if not self.alpha > 1:
            raise ValueError(f"alpha must exceed 1, got {self.alpha}")
        if not self.lam > 0:
            raise ValueError(f"claim rate must be positive, got {self.lam}")
        if self.theta < 0 or self.theta_re < 0:
            raise ValueError("safety loadings must be nonnegative")
        if not self.n > 0:
            raise ValueError(f"n must be positive, got {self.n}")
        if not self.a > 0:
            raise ValueError(f"capital level a must be positive, got {self.a}")
        if self.contract_years is not None and not self.contract_years > 0:
            raise ValueError("contract_years must be positive")

    @property
    def treaty_spec(self) -> TreatySpec:
        return TreatySpec(self.treaty, self.r)

    @property
    def premium_years(self) -> float:
        return self.n if self.contract_years is None else self.contract_years

    def with_(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class SimControls:
    """Monte Carlo controls; ``delta=None`` picks the treaty-aware default
    (:func:`largeclaim.montecarlo.treaty_delta`)."""

    samples: int = 100_000
    delta: float | None = None
    w: float = 0.5
    seed: int = 20240501
    batch: int = 50_000
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError(f"need at least one sample, got {self.samples}")
        if not 0 < self.w <= 1:
            raise ValueError(f"mixture weight must be in (0, 1], got {self.w}")
        if self.delta is not None and not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.batch < 1 or self.workers < 1:
            raise ValueError("batch and workers must be positive")


@dataclass(frozen=True)
class ExperimentSpec:
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    n_grid: tuple[int, ...] = ()
    controls: SimControls = field(default_factory=SimControls)
    output: str | None = None


# flag name -> (section, attribute, parser)
_KEYS = {
    "treaty": ("scenario", "treaty", str),
    "r": ("scenario", "r", int),
    "alpha": ("scenario", "alpha", float),
    "lambda": ("scenario", "lam", float),
    "theta": ("scenario", "theta", float),
    "theta-re": ("scenario", "theta_re", float),
    "a": ("scenario", "a", float),
    "n": ("scenario", "n", float),
    "contract-years": ("scenario", "contract_years", float),
    "samples": ("controls", "samples", int),
    "delta": ("controls", "delta", float),
    "w": ("controls", "w", float),
    "seed": ("controls", "seed", int),
    "batch": ("controls", "batch", int),
    "workers": ("controls", "workers", int),
    "n-grid": ("experiment", "n_grid", lambda s: tuple(int(v) for v in s.replace(",", " ").split())),
    "output": ("experiment", "output", str),
}


def parse_config_text(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        out[key] = value
    return out


def build_spec(values: dict[str, str], base: ExperimentSpec | None = None) -> ExperimentSpec:
    """Apply string ``values`` keyed by flag name on top of ``base``."""
    base = base or ExperimentSpec()
    parts = {
        "scenario": {},
        "controls": {},
        "experiment": {},
    }
    for key, raw in values.items():
        section, attr, parse = _KEYS[key]
        parts[section][attr] = None if raw in ("", "none", "None") else parse(raw)
    scenario = replace(base.scenario, **parts["scenario"])
    controls = replace(base.controls, **parts["controls"])
    return replace(base, scenario=scenario, controls=controls, **parts["experiment"])


def load_config(path: str | Path, base: ExperimentSpec | None = None) -> ExperimentSpec:
    return build_spec(parse_config_text(Path(path).read_text()), base)


def dump_config(spec: ExperimentSpec) -> str:
    """Serialise ``spec`` so that :func:`load_config` reproduces it exactly."""
    lines = []
    for key, (section, attr, _) in _KEYS.items():
        obj = spec if section == "experiment" else getattr(spec, section)
        value = getattr(obj, attr)
        if value is None:
            continue
        if isinstance(value, Treaty):
            text = value.value
        elif isinstance(value, tuple):
            text = " ".join(str(v) for v in value)
            if not text:
                continue
        elif isinstance(value, float):
            text = repr(value)
        else:
            text = str(value)
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"


def as_dict(spec: ExperimentSpec) -> dict:
    return asdict(spec)


__all__ = [
    "ScenarioConfig",
    "SimControls",
    "ExperimentSpec",
    "parse_config_text",
    "build_spec",
    "load_config",
    "dump_config",
]
