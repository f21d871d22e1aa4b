import math

import numpy as np
import pytest
from scipy import stats

from largeclaim import _kernels
from largeclaim.asymptotics import asymptotic_ruin_probability
from largeclaim.claims import ShiftedPareto
from largeclaim.config import ScenarioConfig, SimControls
from largeclaim.montecarlo import (crude_mc, default_delta, importance_sampling, likelihood_weights,
                                   prob_big_jump_set, replicate_weights, sample_path_conditional,
                                   trace_replicate, treaty_delta, _problem)
from largeclaim.premiums import premiums
from largeclaim.riskpath import is_ruin
from largeclaim.rng import uniforms

PARETO = ShiftedPareto(1.5)


def lam_for(mu, n, delta):
    return mu / (n * PARETO.tail(n * delta))


def test_prob_big_jump_set_examples():
    assert prob_big_jump_set(lam_for(math.log(2), 10, 0.5), 10, PARETO, 0.5, 0) == pytest.approx(0.5, rel=1e-12)
    assert prob_big_jump_set(lam_for(1.0, 10, 0.5), 10, PARETO, 0.5, 1) == pytest.approx(1 - 2 / math.e, rel=1e-12)
    assert prob_big_jump_set(10, 10, PARETO, 1e300, 2) == 0.0
    with pytest.raises(ValueError):
        prob_big_jump_set(10, 10, PARETO, 0.0, 1)


def test_default_delta_examples():
    assert default_delta(20, 4, 0) == pytest.approx(20 / 3)
    assert default_delta(20, -1.8902, 1) == pytest.approx(3.0183, abs=1e-4)
    assert default_delta(20, 1, 3) < default_delta(20, 1, 2) < default_delta(20, 1, 1)
    with pytest.raises(ValueError):
        default_delta(1, -2, 0)


def test_treaty_delta():
    assert treaty_delta(20, -4, 1, "lcr") == pytest.approx(16 / 3)
    assert treaty_delta(20, -4, 0, "lcr") == treaty_delta(20, -4, 0, "ecomor") == pytest.approx(8.0)
    assert treaty_delta(20, -4, 1, "ecomor") == pytest.approx(4.0)
    with pytest.raises(ValueError):
        treaty_delta(3, -4, 1, "lcr")


def test_conditional_sampler_law():
    rng = np.random.default_rng(5)
    lam, n, delta, r = 10.0, 5.0, 0.4, 1
    b = n * delta
    mu = lam * n * PARETO.tail(b)
    draws = 20_000
    ks = np.empty(draws, dtype=int)
    totals = np.empty(draws)
    for i in range(draws):
        p = sample_path_conditional(rng, lam, n, PARETO, delta, r)
        ks[i] = p.count_at_least(b)
        totals[i] = len(p)
    assert ks.min() >= r + 1
    # K ~ Poisson(mu) | K >= r + 1
    tail = stats.poisson.sf(r, mu)
    support = np.arange(r + 1, r + 8)
    expected = stats.poisson.pmf(support, mu) / tail * draws
    observed = np.array([np.sum(ks == k) for k in support[:-1]] + [np.sum(ks >= support[-1])])
    expected[-1] = stats.poisson.sf(support[-1] - 1, mu) / tail * draws
    assert stats.chisquare(observed, expected).pvalue > 1e-3
    mean_k = np.sum(np.arange(r + 1, 200) * stats.poisson.pmf(np.arange(r + 1, 200), mu)) / tail
    target = lam * n + mean_k - mu
    assert abs(totals.mean() - target) < 3 * totals.std(ddof=1) / math.sqrt(draws)


def test_kernel_truncated_poisson_law():
    import numba as nb
    from largeclaim.rng import stream_state

    @nb.njit
    def draw(mu, m, tail, size):
        st = stream_state(np.uint64(9), np.uint64(0))
        out = np.empty(size, dtype=np.int64)
        for i in range(size):
            out[i] = _kernels.truncated_poisson(st, mu, m, tail)
        return out

    for mu, m in [(0.05, 2), (3.0, 2), (0.7, 4)]:
        tail = stats.poisson.sf(m - 1, mu)
        ks = draw(mu, m, tail, 50_000)
        assert ks.min() >= m
        support = np.arange(m, m + 4)
        expected = stats.poisson.pmf(support, mu) / tail * ks.size
        expected[-1] = stats.poisson.sf(support[-1] - 1, mu) / tail * ks.size
        observed = np.array([np.sum(ks == k) for k in support[:-1]] + [np.sum(ks >= support[-1])])
        keep = expected > 5
        obs, exp = observed[keep], expected[keep]
        if keep.sum() > 1:
            assert stats.chisquare(obs, exp * obs.sum() / exp.sum()).pvalue > 1e-3


def test_uniform_stream_properties():
    u = uniforms(1, 0, 100_000)
    assert u.min() > 0 and u.max() <= 1
    assert stats.kstest(u, "uniform").pvalue > 1e-3
    assert not np.array_equal(u[:10], uniforms(1, 1, 10))
    assert np.array_equal(u[:10], uniforms(1, 0, 10))


SMALL = ScenarioConfig(r=1, n=20.0, a=5.0)


def test_kernel_ruin_matches_python_functional():
    controls = SimControls(samples=400, seed=3)
    prob = _problem(SMALL, controls, crude=False)
    fast = replicate_weights(SMALL, controls)[1]
    treaty = SMALL.treaty_spec
    in_b_agree = 0
    for i in range(controls.samples):
        path, flags = trace_replicate(SMALL, controls, i)
        assert bool(flags & _kernels.RUIN) == is_ruin(path, treaty, prob.q, prob.u)
        assert bool(fast[i] & _kernels.RUIN) == bool(flags & _kernels.RUIN)
        assert bool(flags & _kernels.IN_B) == (path.count_at_least(prob.b) >= SMALL.r + 1)
        if flags & _kernels.CONDITIONAL:
            assert path.count_at_least(prob.b) >= SMALL.r + 1
        in_b_agree += bool(fast[i] & _kernels.IN_B) == bool(flags & _kernels.IN_B)
    # after ruin the fast kernel redraws the tail of the path, so B can differ rarely
    assert in_b_agree >= 0.97 * controls.samples


def test_kernel_paths_have_the_right_law():
    # claim counts and sizes of unconditional traced paths
    controls = SimControls(samples=2000, seed=4, w=1.0)
    counts, sizes = [], []
    for i in range(controls.samples):
        path, _ = trace_replicate(SMALL, controls, i, crude=True)
        counts.append(len(path))
        sizes.append(path.sizes)
    counts = np.array(counts)
    assert abs(counts.mean() - 200) < 3 * math.sqrt(200 / controls.samples)
    assert stats.kstest(np.concatenate(sizes), PARETO.cdf).pvalue > 1e-3


def test_w_one_is_crude():
    controls = SimControls(samples=20_000, seed=8, w=1.0)
    assert importance_sampling(SMALL, controls) == crude_mc(SMALL, controls)


def test_support_bound():
    controls = SimControls(samples=20_000, seed=9, w=0.3)
    z, _ = replicate_weights(SMALL, controls)
    assert np.all(z >= 0) and np.all(z <= 1 / 0.3 + 1e-12)
    prob = _problem(SMALL, controls, crude=False)
    z_b, z_off = likelihood_weights(prob)
    assert set(np.unique(z)) <= {0.0, z_b, z_off}


def test_batching_and_threads_do_not_change_results():
    base = importance_sampling(SMALL, SimControls(samples=30_000, seed=10))
    assert importance_sampling(SMALL, SimControls(samples=30_000, seed=10, batch=777)) == base
    assert importance_sampling(SMALL, SimControls(samples=30_000, seed=10, batch=5000, workers=3)) == base
    assert importance_sampling(SMALL, SimControls(samples=30_000, seed=11)) != base


def test_near_certain_ruin():
    cfg = ScenarioConfig(r=0, n=20.0, a=20.0)
    res = crude_mc(cfg, SimControls(samples=1000), q=-1e6)
    assert res.estimate == 1.0
    assert res.ci95_halfwidth == 0.0


def test_zero_hits_reports_infinite_relative_error():
    cfg = ScenarioConfig(r=3, n=20.0, a=300.0)
    res = crude_mc(cfg, SimControls(samples=2000))
    assert res.estimate == 0.0
    assert math.isinf(res.relative_error)


def test_is_and_crude_agree_on_non_rare_case():
    a = importance_sampling(SMALL, SimControls(samples=50_000, seed=12))
    b = crude_mc(SMALL, SimControls(samples=200_000, seed=13))
    assert abs(a.estimate - b.estimate) <= a.ci95_halfwidth + b.ci95_halfwidth


def test_r0_estimate_near_asymptote():
    cfg = ScenarioConfig(r=0, n=100.0, a=20.0)
    res = importance_sampling(cfg, SimControls(samples=100_000))
    ld = asymptotic_ruin_probability(cfg)
    assert ld == pytest.approx(9.6e-3, rel=0.01)
    assert abs(res.estimate / ld - 1) < 0.10


def test_domain_errors():
    with pytest.raises(ValueError):
        importance_sampling(SMALL, SimControls(samples=10, delta=1e300))
