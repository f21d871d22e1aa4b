"""Sample paths of the claim process and the ruin functionals under LCR and
ECOMOR reinsurance.

Writing ``A(t)`` for the aggregate claims and ``R(t)`` for the currently
reinsured amount, the insurer's loss is ``A(t) - q t - R(t)``.  The retained
part ``D = A - R`` equals

* LCR: the sum of all claims except the r largest so far;
* ECOMOR: ``sum_i min(X_i, X_(r+1))``, with ``X_(r+1) = 0`` while at most r
  claims have arrived (the reinsurer then pays everything).

Both are nondecreasing pure-jump processes (a new claim either adds itself
or pushes a larger one out of the top r, and the ECOMOR retention only
grows).  Between epochs the loss moves with slope ``-q``, so its supremum
over [0, T] sits at t = 0, just after an arrival, or at T when q < 0.  The
functionals below therefore only look at arrival epochs and the endpoint,
which is exact rather than a grid approximation.
"""

import heapq
import io
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .claims import ClaimModel


class Treaty(str, Enum):
    LCR = "lcr"
    ECOMOR = "ecomor"


@dataclass(frozen=True)
class TreatySpec:
    kind: Treaty
    r: int

    def __post_init__(self):
        object.__setattr__(self, "kind", Treaty(self.kind))
        if self.r < 0 or int(self.r) != self.r:
            raise ValueError(f"r must be a nonnegative integer, got {self.r}")

    @property
    def retention_factor(self) -> int:
        """Multiplier of X_(r+1) in the retained loss (1 for LCR, r+1 for ECOMOR)."""
        return 1 if self.kind is Treaty.LCR else self.r + 1


@dataclass(frozen=True)
class SamplePath:
    """One realisation on (0, horizon]: arrival epochs and claim sizes."""

    horizon: float
    epochs: np.ndarray = field(repr=False)
    sizes: np.ndarray = field(repr=False)

    def __post_init__(self):
        epochs = np.asarray(self.epochs, dtype=float)
        sizes = np.asarray(self.sizes, dtype=float)
        if epochs.shape != sizes.shape or epochs.ndim != 1:
            raise ValueError("epochs and sizes must be 1-d arrays of equal length")
        if not self.horizon > 0:
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        if epochs.size:
            if np.any(np.diff(epochs) <= 0):
                raise ValueError("epochs must be strictly increasing")
            if epochs[0] <= 0 or epochs[-1] > self.horizon:
                raise ValueError("epochs must lie in (0, horizon]")
            if np.any(sizes <= 0):
                raise ValueError("claim sizes must be positive")
        object.__setattr__(self, "epochs", epochs)
        object.__setattr__(self, "sizes", sizes)

    def __len__(self):
        return self.epochs.size

    def count_at_least(self, b: float) -> int:
        return int(np.count_nonzero(self.sizes >= b))


def generate_path(rng: np.random.Generator, lam: float, horizon: float,
                  model: ClaimModel) -> SamplePath:
    """Compound Poisson path: Poisson(lam * horizon) claims at sorted uniform epochs."""
    if not lam > 0 or not horizon > 0:
        raise ValueError("rate and horizon must be positive")
    n = rng.poisson(lam * horizon)
    epochs = np.sort(horizon * (1.0 - rng.random(n)))
    sizes = model.sample(rng, n)
    return SamplePath(horizon, epochs, sizes)


class _RetainedLoss:
    """Running retained loss D after each claim, using a min-heap that keeps
    the r + 1 largest claims seen so far."""

    def __init__(self, treaty: TreatySpec):
        self.slots = treaty.r + 1
        self.factor = treaty.retention_factor
        self.heap: list[float] = []
        self.low = 0.0  # claims outside the top r + 1

    def push(self, x: float) -> float:
        if len(self.heap) < self.slots:
            heapq.heappush(self.heap, x)
        elif x > self.heap[0]:
            self.low += heapq.heapreplace(self.heap, x)
        else:
            self.low += x
        kth = self.heap[0] if len(self.heap) == self.slots else 0.0
        return self.low + self.factor * kth


def retained_series(path: SamplePath, treaty: TreatySpec) -> np.ndarray:
    """D = A - R just after each arrival."""
    acc = _RetainedLoss(treaty)
    return np.array([acc.push(x) for x in path.sizes.tolist()], dtype=float)


def reinsured_series(path: SamplePath, treaty: TreatySpec) -> list[tuple[float, float]]:
    """(epoch, R just after the epoch) for every arrival."""
    aggregate = np.cumsum(path.sizes)
    retained = retained_series(path, treaty)
    return list(zip(path.epochs.tolist(), (aggregate - retained).tolist()))


def ruin_functional(path: SamplePath, treaty: TreatySpec, q: float) -> float:
    """sup over [0, T] of ``A(t) - q t - R(t)`` (unscaled)."""
    best = 0.0
    d = 0.0
    if len(path):
        d_all = retained_series(path, treaty)
        best = max(best, float(np.max(d_all - q * path.epochs)))
        d = float(d_all[-1])
    if q < 0:
        best = max(best, d - q * path.horizon)
    return best


def is_ruin(path: SamplePath, treaty: TreatySpec, q: float, u: float) -> bool:
    """Whether the loss reaches the initial capital ``u`` on [0, T].

    Stops at the first epoch where it does; same answer as comparing
    :func:`ruin_functional` with ``u``.
    """
    if u < 0:
        raise ValueError(f"initial capital must be >= 0, got {u}")
    if u <= 0:
        return True
    acc = _RetainedLoss(treaty)
    d = 0.0
    for t, x in zip(path.epochs.tolist(), path.sizes.tolist()):
        d = acc.push(x)
        if d - q * t >= u:
            return True
    return q < 0 and d - q * path.horizon >= u


def step_path_phi_oracle(jumps, times, r: int, c: float, kind) -> float:
    """Closed-form ruin functional of a scaled step path with at most r + 1 jumps.

    For ``k <= r`` jumps everything is reinsured and only the drift can
    lift the supremum: the value is ``max(-c, 0)``.  With exactly r + 1
    jumps the smallest one ``y`` stays with the insurer once all have
    arrived (at ``t* = max(times)``) giving
    ``y - max(c, 0) t* + max(-c, 0)`` for LCR and
    ``(r + 1) y - max(c, 0) t* + max(-c, 0)`` for ECOMOR, floored at the
    value ``max(-c, 0)`` that the supremum already reaches at t = 0 or T.
    """
    kind = Treaty(kind)
    jumps = np.asarray(jumps, dtype=float)
    times = np.asarray(times, dtype=float)
    k = jumps.size
    if k > r + 1:
        raise ValueError(f"closed form only covers k <= r + 1 jumps, got k={k}, r={r}")
    c_plus, c_minus = max(c, 0.0), max(-c, 0.0)
    if k <= r:
        return c_minus
    y = float(np.min(jumps))
    mult = 1 if kind is Treaty.LCR else r + 1
    return max(c_minus, mult * y - c_plus * float(np.max(times)) + c_minus)


def dump_path_csv(path: SamplePath, treaty: TreatySpec, q: float, out=None) -> str:
    """Debug dump: one line ``epoch,size,A,R,loss`` per claim."""
    buf = out if out is not None else io.StringIO()
    aggregate = np.cumsum(path.sizes)
    retained = retained_series(path, treaty) if len(path) else np.empty(0)
    buf.write("epoch,size,A,R,loss\n")
    for t, x, a, d in zip(path.epochs, path.sizes, aggregate, retained):
        buf.write(f"{t:.6e},{x:.6e},{a:.6e},{a - d:.6e},{d - q * t:.6e}\n")
    return buf.getvalue() if out is None else ""
