"""Crude Monte Carlo and importance sampling for psi(n a, n).

The importance sampler mixes the original measure with the law of the path
conditioned on

    B = {at least r + 1 claims of size >= n delta},

drawing an unconditional path with probability ``w`` and a conditioned one
otherwise.  The likelihood ratio of the mixture is

    Z = 1{ruin} / (w + (1 - w) 1{B} / P(B)),

which takes only three values (0, ``1/w`` off B, ``P(B)/(w P(B) + 1 - w)``
on B).  Replicates are therefore reduced to two integer hit counts, which
makes the aggregate exact and independent of batching and ordering.

Each replicate has its own random stream keyed by (seed, replicate index).
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import _kernels
from .claims import ClaimModel, ShiftedPareto
from .config import ScenarioConfig, SimControls
from .premiums import premiums
from .riskpath import SamplePath, Treaty
from .specfun import regularized_lower_gamma


@dataclass(frozen=True)
class EstimatorResult:
    estimate: float
    variance: float
    ci95_halfwidth: float
    samples: int
    hits: int
    delta: float | None = None
    w: float = 1.0
    p_big: float | None = None

    @property
    def relative_error(self) -> float:
        """CI half-width over the estimate; inf without any hit."""
        if self.estimate == 0:
            return math.inf
        return self.ci95_halfwidth / self.estimate

    def interval(self) -> tuple[float, float]:
        return self.estimate - self.ci95_halfwidth, self.estimate + self.ci95_halfwidth


def prob_big_jump_set(lam: float, n: float, model: ClaimModel, delta: float, r: int) -> float:
    """P(at least r + 1 claims >= n delta on [0, n]) = P(Poisson(mu) >= r + 1)."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    mu = big_jump_rate(lam, n, model, delta)
    return regularized_lower_gamma(r + 1.0, mu) if mu > 0 else 0.0


def big_jump_rate(lam: float, n: float, model: ClaimModel, delta: float) -> float:
    # mean number of claims of size >= n delta; the tail is continuous so >= and > agree
    return lam * n * model.tail(n * delta)


def default_delta(a: float, c: float, r: int) -> float:
    """(a - c_-) / (3 (r + 1)): below the minimal ruin-causing jump for both treaties."""
    level = a - max(-c, 0.0)
    if not level > 0:
        raise ValueError(f"a - c_- = {level:.6g} must be positive")
    return level / (3.0 * (r + 1))


def treaty_delta(a: float, c: float, r: int, treaty) -> float:
    """Engine default: ``(a - c_-) / (r + 2)`` for LCR, ``(a - c_-) / (2 (r + 1))`` for ECOMOR.

    Outside B at most r claims reach ``n delta``.  For LCR the retained
    claims then all sit below ``n delta``, so ruin needs more than
    ``(a - c_-) / delta`` of them on top of the r largest; for ECOMOR the
    retention itself is below ``n delta``.  These choices are the largest
    ``delta`` for which every ruin path outside B uses more than ``2 (r + 1)``
    claims of order n, which keeps the relative error bounded, while P(B)
    stays as close to the ruin probability as that allows.
    """
    level = a - max(-c, 0.0)
    if not level > 0:
        raise ValueError(f"a - c_- = {level:.6g} must be positive")
    if Treaty(treaty) is Treaty.LCR:
        return level / (r + 2.0)
    return level / (2.0 * (r + 1))


def _truncated_poisson(rng, mu, m, tail):
    # K = min{k : P(Poisson > k) < V} with V uniform on (0, tail] has law Poisson | K >= m
    v = (1.0 - rng.random()) * tail
    return max(m, int(stats.poisson.isf(v, mu)))


def sample_path_conditional(rng: np.random.Generator, lam: float, n: float,
                            model: ClaimModel, delta: float, r: int) -> SamplePath:
    """Exact draw of the claim path on (0, n] given at least r + 1 claims >= n delta.

    Poisson thinning at ``b = n delta`` splits the path into independent big
    and small parts; only the big count is conditioned.
    """
    b = n * delta
    tail_b = model.tail(b)
    mu = lam * n * tail_b
    p_big = prob_big_jump_set(lam, n, model, delta, r)
    if not p_big > 0:
        raise ValueError("conditioning event has probability zero")
    k = _truncated_poisson(rng, mu, r + 1, p_big)
    big_t = n * (1.0 - rng.random(k))
    big_x = model.sample_above(rng, b, k)
    m = rng.poisson(lam * n * (1.0 - tail_b))
    small_t = n * (1.0 - rng.random(m))
    small_x = model.sample_below(rng, b, m)
    t = np.concatenate([big_t, small_t])
    x = np.concatenate([big_x, small_x])
    order = np.argsort(t, kind="stable")
    return SamplePath(n, t[order], x[order])


@dataclass(frozen=True)
class _Problem:
    """Everything the kernel needs, in unscaled units."""

    lam: float
    T: float
    alpha: float
    q: float
    u: float
    r: int
    factor: int
    w: float
    b: float
    tail_b: float
    mu: float
    p_big: float
    delta: float | None

    def kernel_args(self):
        return (self.lam, self.T, self.alpha, self.q, self.u, self.r, self.factor,
                self.w, self.b, self.tail_b, self.mu, self.p_big)


def _problem(config: ScenarioConfig, controls: SimControls, crude: bool, q=None) -> _Problem:
    if q is None:
        q = premiums(config).q
    c = q - config.lam / (config.alpha - 1.0)
    model = ShiftedPareto(config.alpha)
    n = config.n
    base = dict(lam=config.lam, T=n, alpha=config.alpha, q=q, u=n * config.a,
                r=config.r, factor=config.treaty_spec.retention_factor)
    if crude or controls.w == 1.0:
        return _Problem(**base, w=1.0, b=math.inf, tail_b=0.0, mu=0.0, p_big=0.0,
                        delta=None)
    delta = controls.delta
    if delta is None:
        delta = treaty_delta(config.a, c, config.r, config.treaty)
    b = n * delta
    tail_b = model.tail(b)
    mu = config.lam * n * tail_b
    p_big = prob_big_jump_set(config.lam, n, model, delta, config.r)
    if not p_big > 0:
        raise ValueError(f"P(B) underflows to 0 for delta={delta}; choose a smaller delta")
    return _Problem(**base, w=controls.w, b=b, tail_b=tail_b, mu=mu, p_big=p_big, delta=delta)


def _run_flags(prob: _Problem, controls: SimControls) -> np.ndarray:
    flags = np.empty(controls.samples, dtype=np.int8)
    seed = np.uint64(controls.seed)
    args = prob.kernel_args()
    chunks = [(s, min(s + controls.batch, controls.samples))
              for s in range(0, controls.samples, controls.batch)]

    def work(chunk):
        lo, hi = chunk
        _kernels.simulate_flags(seed, np.uint64(lo), *args, flags[lo:hi])

    if controls.workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(controls.workers) as pool:
            list(pool.map(work, chunks))
    else:
        for chunk in chunks:
            work(chunk)
    return flags


def likelihood_weights(prob: _Problem) -> tuple[float, float]:
    """Z on a ruined path: (in B, outside B)."""
    if prob.w == 1.0:
        return 1.0, 1.0
    p = prob.p_big
    return p / (prob.w * p + 1.0 - prob.w), 1.0 / prob.w


def _aggregate(prob: _Problem, flags: np.ndarray) -> EstimatorResult:
    ruin = (flags & _kernels.RUIN) != 0
    in_b = (flags & _kernels.IN_B) != 0
    hits_b = int(np.count_nonzero(ruin & in_b))
    hits_off = int(np.count_nonzero(ruin & ~in_b))
    z_b, z_off = likelihood_weights(prob)
    m = flags.size
    mean = math.fsum([hits_b * z_b, hits_off * z_off]) / m
    if m > 1:
        second = math.fsum([hits_b * z_b * z_b, hits_off * z_off * z_off])
        var = max(0.0, (second - m * mean * mean) / (m - 1))
    else:
        var = 0.0
    half = 1.96 * math.sqrt(var / m)
    return EstimatorResult(mean, var, half, m, hits_b + hits_off, prob.delta, prob.w,
                           prob.p_big if prob.w < 1.0 else None)


def importance_sampling(config: ScenarioConfig, controls: SimControls, q=None) -> EstimatorResult:
    """Mixture importance-sampling estimate of psi(n a, n).

    ``q`` overrides the premium-implied annual retained premium.
    """
    prob = _problem(config, controls, crude=False, q=q)
    return _aggregate(prob, _run_flags(prob, controls))


def crude_mc(config: ScenarioConfig, controls: SimControls, q=None) -> EstimatorResult:
    """Plain mean of ruin indicators over unconditional paths."""
    prob = _problem(config, controls, crude=True, q=q)
    return _aggregate(prob, _run_flags(prob, controls))


def replicate_weights(config: ScenarioConfig, controls: SimControls, crude=False, q=None):
    """Per-replicate Z values (for diagnostics and support checks)."""
    prob = _problem(config, controls, crude=crude, q=q)
    flags = _run_flags(prob, controls)
    z_b, z_off = likelihood_weights(prob)
    ruin = (flags & _kernels.RUIN) != 0
    in_b = (flags & _kernels.IN_B) != 0
    return np.where(ruin, np.where(in_b, z_b, z_off), 0.0), flags


def trace_replicate(config: ScenarioConfig, controls: SimControls, index: int,
                    crude=False, q=None) -> tuple[SamplePath, int]:
    """Replay replicate ``index`` and return its full path and flags."""
    prob = _problem(config, controls, crude=crude, q=q)
    size = max(64, int(2 * prob.lam * prob.T) + 64)
    while True:
        rec_t = np.empty(size)
        rec_x = np.empty(size)
        flags, count = _kernels.trace_replicate(
            np.uint64(controls.seed), np.uint64(index), *prob.kernel_args(), rec_t, rec_x)
        if count <= size:
            return SamplePath(prob.T, rec_t[:count].copy(), rec_x[:count].copy()), int(flags)
        size = count
