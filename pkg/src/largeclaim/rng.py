"""Counter-based random streams keyed by (master seed, replicate index).

Every Monte Carlo replicate draws from its own SplitMix64 sequence whose
starting state is a hash of the master seed and the replicate index.  A
replicate therefore sees the same numbers no matter how replicates are
batched, ordered or spread over threads.

The stream state is a one-element ``uint64`` array so jitted kernels can
advance it in place.
"""

import numba as nb
import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


@nb.njit(cache=True)
def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@nb.njit(cache=True)
def initial_state(seed, index):
    """Starting state of the stream for replicate ``index`` under ``seed``."""
    k = mix64(np.uint64(seed) + GOLDEN)
    return mix64(k ^ mix64(np.uint64(index) * GOLDEN + _ONE))


@nb.njit(cache=True)
def stream_state(seed, index):
    st = np.empty(1, dtype=np.uint64)
    st[0] = initial_state(seed, index)
    return st


@nb.njit(cache=True)
def next_u64(st):
    st[0] += GOLDEN
    return mix64(st[0])


@nb.njit(cache=True)
def next_uniform(st):
    """Uniform on (0, 1] with 53 random bits; never returns 0."""
    return (float(next_u64(st) >> _S11) + 1.0) * _INV53


@nb.njit(cache=True)
def _fill_uniforms(seed, index, out):
    st = stream_state(seed, index)
    for i in range(out.shape[0]):
        out[i] = next_uniform(st)


def uniforms(seed: int, index: int, size: int) -> np.ndarray:
    """First ``size`` uniforms of stream ``(seed, index)``."""
    out = np.empty(size, dtype=np.float64)
    _fill_uniforms(np.uint64(seed), np.uint64(index), out)
    return out
