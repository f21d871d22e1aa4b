"""Expected reinsured amounts and expected-value-principle premiums.

For a Poisson(lambda t) number of shifted Pareto claims the expected sum of
the r largest claims is

    E L = (lambda t)^{1/alpha} sum_{i=1}^r gamma(i - 1/alpha, lambda t) / Gamma(i)
          - sum_{i=1}^r gamma(i, lambda t) / Gamma(i)

and the ECOMOR cover subtracts ``r`` copies of the (r+1)-th largest claim,
which adds the ``i = r + 1`` terms with weight ``-r``.
"""

import math
from dataclasses import dataclass

from .config import ScenarioConfig
from .riskpath import Treaty
from .specfun import lower_incomplete_gamma


def _check(r, lam, t, alpha):
    if r < 0 or int(r) != r:
        raise ValueError(f"r must be a nonnegative integer, got {r}")
    if not alpha > 1:
        raise ValueError(f"alpha must exceed 1, got {alpha}")
    if lam < 0 or t < 0:
        raise ValueError("claim rate and horizon must be nonnegative")


def _terms(i: int, mu: float, alpha: float) -> tuple[float, float]:
    # gamma(i - 1/alpha, mu)/Gamma(i) and gamma(i, mu)/Gamma(i)
    g = math.lgamma(i)
    return (lower_incomplete_gamma(i - 1.0 / alpha, mu) / math.exp(g),
            lower_incomplete_gamma(float(i), mu) / math.exp(g))


def expected_lcr(r: int, lam: float, t: float, alpha: float) -> float:
    """Expected sum of the r largest claims up to time t."""
    _check(r, lam, t, alpha)
    mu = lam * t
    if r == 0 or mu == 0:
        return 0.0
    first = second = 0.0
    for i in range(1, r + 1):
        a, b = _terms(i, mu, alpha)
        first += a
        second += b
    return mu ** (1.0 / alpha) * first - second


def expected_ecomor(r: int, lam: float, t: float, alpha: float) -> float:
    """Expected ECOMOR cover: sum of the r largest minus r times the (r+1)-th."""
    _check(r, lam, t, alpha)
    mu = lam * t
    if r == 0 or mu == 0:
        return 0.0
    a, b = _terms(r + 1, mu, alpha)
    return expected_lcr(r, lam, t, alpha) - r * (mu ** (1.0 / alpha) * a - b)


def expected_reinsured(treaty, r: int, lam: float, t: float, alpha: float) -> float:
    if Treaty(treaty) is Treaty.LCR:
        return expected_lcr(r, lam, t, alpha)
    return expected_ecomor(r, lam, t, alpha)


def drift(q: float, lam: float, alpha: float) -> float:
    """c = q - lambda E X for shifted Pareto claims."""
    if not alpha > 1:
        raise ValueError(f"alpha must exceed 1, got {alpha}")
    return q - lam / (alpha - 1.0)


@dataclass(frozen=True)
class Premiums:
    """Premium quantities of one scenario, all per year.

    ``annual_cover`` is E R / years, the figure tabulated as pi; the premium
    the reinsurer actually charges is ``reinsurance_premium``, which
    includes the loading ``1 + theta_re``.
    """

    annual_cover: float
    reinsurance_premium: float
    gross_premium: float
    q: float
    c: float


def premiums(config: ScenarioConfig) -> Premiums:
    years = config.premium_years
    cover = expected_reinsured(config.treaty, config.r, config.lam, years, config.alpha) / years
    gross = (1.0 + config.theta) * config.lam / (config.alpha - 1.0)
    loaded = (1.0 + config.theta_re) * cover
    q = gross - loaded
    return Premiums(cover, loaded, gross, q, drift(q, config.lam, config.alpha))


def net_premium(config: ScenarioConfig) -> float:
    """Annual retained premium q = (1+theta) lambda E X - (1+theta') E R / n."""
    return premiums(config).q


def reinsurance_premium(config: ScenarioConfig) -> float:
    """Annual loaded reinsurance premium (1+theta') E R / n."""
    return premiums(config).reinsurance_premium


def scenario_drift(config: ScenarioConfig) -> float:
    return premiums(config).c


def require_valid_level(config: ScenarioConfig) -> None:
    """Fail unless a exceeds max(-c_L, -c_E, 0), so both treaties' asymptotes apply."""
    worst = max(0.0, *(-scenario_drift(config.with_(treaty=t)) for t in Treaty))
    if not config.a > worst:
        raise ValueError(f"level a={config.a} must exceed {worst:.6g} for both asymptotes to hold")


@dataclass(frozen=True)
class PremiumRow:
    r: int
    pi_L: float
    pi_E: float
    q_L: float
    q_E: float
    c_L: float
    c_E: float


def premium_table(base: ScenarioConfig, r_values=range(4)) -> list[PremiumRow]:
    rows = []
    for r in r_values:
        lcr = premiums(base.with_(r=r, treaty=Treaty.LCR))
        eco = premiums(base.with_(r=r, treaty=Treaty.ECOMOR))
        rows.append(PremiumRow(r, lcr.annual_cover, eco.annual_cover,
                               lcr.q, eco.q, lcr.c, eco.c))
    return rows
