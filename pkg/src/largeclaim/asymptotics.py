"""Large-deviations approximation of the finite-horizon ruin probability.

With initial capital ``n a``, horizon ``n`` and drift ``c``, ruin needs
r + 1 claims of order n, and

    psi(n a, n) ~ C (lambda n P(X > n))^{r+1}

where ``C`` is the measure of the set of (r+1)-jump step paths that cause
ruin.  For LCR

    C = (1/r!) int_0^1 t^r (a + c t)^{-(r+1) alpha} dt,

which is ``a^{-(r+1)alpha} 2F1(r+1, (r+1)alpha; r+2; -c/a) / (r+1)!`` when
c > 0 and collapses to ``(a + c)^{-(r+1)alpha} / (r+1)!`` when c < 0 (the
drift then only matters at the horizon).  The ECOMOR constant is the LCR one
times ``(r+1)^{(r+1)alpha}``.
"""

import math
from dataclasses import dataclass

from scipy import integrate

from .claims import ShiftedPareto
from .config import ScenarioConfig
from .premiums import scenario_drift
from .riskpath import Treaty
from .specfun import gamma_sum_integral, hyp2f1_ruin


class LLNRegimeError(ValueError):
    """a + c <= 0: the loss drifts past the capital and ruin probability tends to one."""


@dataclass(frozen=True)
class PreconstantInputs:
    treaty: Treaty
    r: int
    alpha: float
    a: float
    c: float

    def __post_init__(self):
        object.__setattr__(self, "treaty", Treaty(self.treaty))
        if self.r < 0 or int(self.r) != self.r:
            raise ValueError(f"r must be a nonnegative integer, got {self.r}")
        if not self.alpha > 1:
            raise ValueError(f"alpha must exceed 1, got {self.alpha}")
        if not self.a > 0:
            raise ValueError(f"level a must be positive, got {self.a}")
        if not self.a + self.c > 0:
            raise LLNRegimeError(
                f"a + c = {self.a + self.c:.6g} <= 0: ruin probability tends to one")

    @property
    def k(self) -> float:
        return (self.r + 1) * self.alpha

    @property
    def treaty_factor(self) -> float:
        return 1.0 if self.treaty is Treaty.LCR else float(self.r + 1) ** self.k


def preconstant(p: PreconstantInputs) -> float:
    """Pre-constant C for either treaty, in the hypergeometric / closed form."""
    r, k, a, c = p.r, p.k, p.a, p.c
    fact = math.factorial(r + 1)
    if c > 0:
        base = a ** (-k) * hyp2f1_ruin(r, p.alpha, -c / a) / fact
    elif c < 0:
        base = (a + c) ** (-k) / fact
    else:
        base = a ** (-k) / fact
    return p.treaty_factor * base


def preconstant_gamma_form(p: PreconstantInputs) -> float:
    """Pre-constant through the finite Gamma sum (c > 0 only)."""
    if not p.c > 0:
        raise ValueError(f"finite-sum form needs c > 0, got {p.c}")
    return p.treaty_factor * float(gamma_sum_integral(p.r, p.k, p.a, p.c))


def preconstant_quadrature(p: PreconstantInputs) -> float:
    """Pre-constant by adaptive quadrature of the defining integral (oracle)."""
    r, k = p.r, p.k
    # a negative drift only acts at the horizon: the level becomes a - c_-
    level, slope = p.a - max(-p.c, 0.0), max(p.c, 0.0)
    val, _ = integrate.quad(lambda t: t**r * (level + slope * t) ** (-k), 0.0, 1.0,
                            epsabs=0.0, epsrel=1e-12, limit=200)
    return p.treaty_factor * val / math.factorial(r)


def no_reinsurance_constant(a: float, c: float, alpha: float) -> float:
    """Closed form without reinsurance (r = 0, c >= 0).

    ``(a^{1-alpha} - (a+c)^{1-alpha}) / (c (alpha - 1))``, evaluated with
    expm1/log1p so small c/a does not cancel.
    """
    if c < 0:
        raise ValueError("closed form integrates the c >= 0 ruin set; use preconstant for c < 0")
    if c == 0:
        return a ** (-alpha)
    return -(a ** (1 - alpha)) * math.expm1((1 - alpha) * math.log1p(c / a)) / (c * (alpha - 1))


def inputs_for(config: ScenarioConfig) -> PreconstantInputs:
    return PreconstantInputs(config.treaty, config.r, config.alpha, config.a,
                             scenario_drift(config))


def ld_scale(config: ScenarioConfig) -> float:
    """(lambda n P(X > n))^{r+1} with the exact tail."""
    n = config.n
    if not n >= 1:
        raise ValueError(f"asymptote needs n >= 1, got {n}")
    tail = ShiftedPareto(config.alpha).tail(n)
    return (config.lam * n * tail) ** (config.r + 1)


def asymptotic_ruin_probability(config: ScenarioConfig, c: float | None = None) -> float:
    """psi(n a, n) ~ C (lambda n P(X > n))^{r+1}.

    ``c`` overrides the premium-implied drift.
    """
    inputs = inputs_for(config) if c is None else PreconstantInputs(
        config.treaty, config.r, config.alpha, config.a, c)
    return preconstant(inputs) * ld_scale(config)
