"""Claim-size distributions with regularly varying tails.

Only the shifted Pareto law ``P(X > x) = (x + 1)^{-alpha}`` ships, but the
simulation and premium code talk to the :class:`ClaimModel` interface so
other regularly varying families can be dropped in.

Samplers take a :class:`numpy.random.Generator` and draw ``U`` from (0, 1]
so inverse transforms never hit an infinite quantile.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np


def _unit_interval_open_left(rng: np.random.Generator, size=None):
    # Generator.random is on [0, 1); flip it onto (0, 1]
    return 1.0 - rng.random(size)


class ClaimModel(ABC):
    """Interface for a positive claim-size law with a regularly varying tail."""

    alpha: float

    @abstractmethod
    def tail(self, x):
        """P(X > x)."""

    @abstractmethod
    def quantile(self, u):
        """Inverse CDF on [0, 1)."""

    @abstractmethod
    def mean(self) -> float:
        ...

    def cdf(self, x):
        return 1.0 - self.tail(x)

    @abstractmethod
    def sample(self, rng: np.random.Generator, size=None):
        ...

    @abstractmethod
    def sample_above(self, rng: np.random.Generator, b: float, size=None):
        """Draw from the law of X given X >= b."""

    @abstractmethod
    def sample_below(self, rng: np.random.Generator, b: float, size=None):
        """Draw from the law of X given X < b."""


@dataclass(frozen=True)
class ShiftedPareto(ClaimModel):
    """Pareto law shifted to start at 0: ``P(X > x) = (x + 1)^{-alpha}``.

    The slowly varying part of the tail is ``(x / (x + 1))^alpha``.
    """

    alpha: float

    def __post_init__(self):
        if not self.alpha > 1:
            raise ValueError(f"tail index must exceed 1 for a finite mean, got {self.alpha}")

    def tail(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise ValueError("claim sizes are nonnegative; tail needs x >= 0")
        out = (x + 1.0) ** (-self.alpha)
        return float(out) if out.ndim == 0 else out

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        if np.any((u < 0) | (u >= 1)):
            raise ValueError("quantile needs u in [0, 1)")
        out = (1.0 - u) ** (-1.0 / self.alpha) - 1.0
        return float(out) if out.ndim == 0 else out

    def mean(self) -> float:
        return 1.0 / (self.alpha - 1.0)

    def slowly_varying(self, x: float) -> float:
        return (x / (x + 1.0)) ** self.alpha

    def sample(self, rng, size=None):
        # U on (0, 1] plays the role of the tail probability: X = Q(1 - U)
        return _unit_interval_open_left(rng, size) ** (-1.0 / self.alpha) - 1.0

    def sample_above(self, rng, b, size=None):
        if b < 0:
            raise ValueError(f"threshold must be >= 0, got {b}")
        # P(X > x | X >= b) = ((x + 1) / (b + 1))^{-alpha}
        return (b + 1.0) * _unit_interval_open_left(rng, size) ** (-1.0 / self.alpha) - 1.0

    def sample_below(self, rng, b, size=None):
        if not b > 0:
            raise ValueError(f"F(b) = 0 for b = {b}; nothing to sample below it")
        u = _unit_interval_open_left(rng, size) * self.cdf(b)
        # quantile(u) written with log1p to keep precision for tiny F(b)
        return np.expm1(-np.log1p(-u) / self.alpha)
