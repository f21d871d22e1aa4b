"""Jitted per-replicate path simulation and ruin evaluation.

A replicate streams one path of the compound Poisson claim process on
``(0, T]`` and evaluates ``sup_t {A(t) - q t - R(t)} >= u`` on the fly, so
memory per path is O(r) and the cost is O(N r) with r tiny.

Arrivals come from exponential inter-arrival times.  Under the conditional
measure the path is the superposition of two independent pieces (Poisson
thinning at level ``b``): small claims as a Poisson process of rate
``lam * F(b)`` with sizes below ``b``, and ``K >= r + 1`` big claims with
uniform epochs and sizes at least ``b``.

Flags written per replicate: bit 0 ruin, bit 1 path in B (at least
``r + 1`` claims of size >= b), bit 2 drawn from the conditional branch.
"""

import math

import numba as nb
import numpy as np

from .rng import initial_state, next_uniform, stream_state

RUIN = 1
IN_B = 2
CONDITIONAL = 4


@nb.njit(cache=True)
def truncated_poisson(st, mu, m, tail):
    """Poisson(mu) conditioned on being >= m; ``tail`` is P(K >= m)."""
    if tail >= 0.5:
        # mild conditioning: plain rejection, at most ~2 attempts on average
        while True:
            k = 0
            s = -math.log(next_uniform(st))
            while s <= mu:
                k += 1
                s -= math.log(next_uniform(st))
            if k >= m:
                return k
    target = next_uniform(st) * tail
    k = m
    p = math.exp(m * math.log(mu) - mu - math.lgamma(m + 1.0))
    cum = p
    kmax = m + 1000 + int(20.0 * mu)
    while cum < target and k < kmax:
        k += 1
        p *= mu / k
        cum += p
    return k


@nb.njit(cache=True)
def _replicate(st, lam, T, alpha, q, u, r, factor, w, b, tail_b, mu, p_b,
               top, bigt, stop_early, rec_t, rec_x):
    """Simulate one replicate; returns (flags, number of recorded claims).

    ``factor`` is 1 for LCR and r + 1 for ECOMOR: the retained loss is then
    ``low + factor * X_(r+1)`` where ``low`` sums every claim outside the
    r + 1 largest seen so far and X_(r+1) is 0 until r + 1 claims arrived.
    """
    m = r + 1
    neg_inv_alpha = -1.0 / alpha
    conditional = False
    if w < 1.0:
        conditional = next_uniform(st) > w

    K = 0
    if conditional:
        K = truncated_poisson(st, mu, m, p_b)
        if K > bigt.shape[0]:
            bigt = np.empty(K)
        for j in range(K):
            bigt[j] = T * next_uniform(st)
        for j in range(1, K):
            v = bigt[j]
            i = j
            while i > 0 and bigt[i - 1] > v:
                bigt[i] = bigt[i - 1]
                i -= 1
            bigt[i] = v
        rate = lam * (1.0 - tail_b)
        below = 1.0 - tail_b
    else:
        rate = lam
        below = 1.0

    record = rec_t.shape[0] > 0
    nrec = 0
    nbig = K
    for i in range(m):
        top[i] = 0.0
    nkept = 0
    low = 0.0
    d = 0.0
    ruined = u <= 0.0
    need_count = (not conditional) and w < 1.0

    if ruined and stop_early and not need_count:
        return RUIN | (IN_B if nbig >= m else 0) | (CONDITIONAL if conditional else 0), 0

    t_small = -math.log(next_uniform(st)) / rate if rate > 0.0 else math.inf
    j = 0
    while True:
        if j < K and bigt[j] <= t_small:
            t = bigt[j]
            j += 1
            x = (b + 1.0) * math.exp(neg_inv_alpha * math.log(next_uniform(st))) - 1.0
        elif t_small <= T:
            t = t_small
            if conditional:
                x = math.exp(neg_inv_alpha * math.log1p(-next_uniform(st) * below)) - 1.0
            elif ruined and not record:
                # only B membership is still needed: X >= b iff U <= tail(b)
                if next_uniform(st) <= tail_b:
                    nbig += 1
                    if nbig >= m:
                        break
                t_small -= math.log(next_uniform(st)) / rate
                continue
            else:
                x = math.exp(neg_inv_alpha * math.log(next_uniform(st))) - 1.0
                if x >= b:
                    nbig += 1
            t_small -= math.log(next_uniform(st)) / rate
        else:
            break

        if record:
            if nrec < rec_t.shape[0]:
                rec_t[nrec] = t
                rec_x[nrec] = x
            nrec += 1

        if ruined:
            continue
        if nkept < m:
            i = nkept
            while i > 0 and top[i - 1] < x:
                top[i] = top[i - 1]
                i -= 1
            top[i] = x
            nkept += 1
        elif x > top[r]:
            low += top[r]
            i = r
            while i > 0 and top[i - 1] < x:
                top[i] = top[i - 1]
                i -= 1
            top[i] = x
        else:
            low += x
        d = low + factor * top[r]
        if d - q * t >= u:
            ruined = True
            if stop_early and ((not need_count) or nbig >= m):
                break

    if not ruined and q < 0.0 and d - q * T >= u:
        ruined = True

    flags = 0
    if ruined:
        flags |= RUIN
    if nbig >= m:
        flags |= IN_B
    if conditional:
        flags |= CONDITIONAL
    return flags, nrec


@nb.njit(cache=True, nogil=True)
def simulate_flags(seed, start, lam, T, alpha, q, u, r, factor, w, b, tail_b,
                   mu, p_b, out):
    """Fill ``out[i]`` with the flags of replicate ``start + i``."""
    top = np.zeros(r + 1)
    bigt = np.empty(64 + r)
    empty = np.empty(0)
    st = np.empty(1, dtype=np.uint64)
    for i in range(out.shape[0]):
        st[0] = initial_state(seed, start + i)
        flags, _ = _replicate(st, lam, T, alpha, q, u, r, factor, w, b,
                              tail_b, mu, p_b, top, bigt, True, empty, empty)
        out[i] = flags


@nb.njit(cache=True)
def trace_replicate(seed, index, lam, T, alpha, q, u, r, factor, w, b,
                    tail_b, mu, p_b, rec_t, rec_x):
    """Replay replicate ``index`` in full, recording its claims.

    Returns (flags, claim count); if the count exceeds the buffers the
    caller must retry with larger ones.
    """
    top = np.zeros(r + 1)
    bigt = np.empty(64 + r)
    st = stream_state(seed, index)
    return _replicate(st, lam, T, alpha, q, u, r, factor, w, b, tail_b, mu,
                      p_b, top, bigt, False, rec_t, rec_x)
