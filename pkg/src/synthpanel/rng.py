"""Deterministic, hierarchically splittable random streams.

Every stochastic quantity in this package is drawn from an :class:`RngStream`.
A stream is identified by ``(master_seed, path)`` and the sequence it yields
is a pure function of that identity: derivation is counter-based (seed and
path are hashed into the bit generator's key), so results never depend on
thread schedule, platform, or the order in which sibling streams are used.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.special import ndtr, ndtri

_MAX_CHILD = 2**32

# Below this acceptance probability, rejection sampling of a truncated
# normal is hopeless and we switch to inverse-CDF sampling.
_REJECTION_FLOOR = 0.01
_REJECTION_CAP = 10_000


class RngStream:
    """A random stream addressed by ``(master_seed, path)``.

    Child streams are derived by index and never touch the parent's state.
    Sampling advances a locally owned generator; re-deriving a stream with
    the same identity replays the same sequence bit for bit.
    """

    __slots__ = ("master_seed", "path", "_gen")

    def __init__(self, master_seed: int, path: Sequence[int] = ()):
        self.master_seed = int(master_seed)
        self.path = tuple(int(i) for i in path)
        for i in self.path:
            if not 0 <= i < _MAX_CHILD:
                raise ValueError(f"stream path entry {i} outside [0, 2^32)")
        self._gen = None

    def __repr__(self) -> str:
        return f"RngStream(seed={self.master_seed}, path={list(self.path)})"

    @property
    def generator(self) -> np.random.Generator:
        if self._gen is None:
            seq = np.random.SeedSequence(self.master_seed, spawn_key=self.path)
            self._gen = np.random.Generator(np.random.Philox(seq))
        return self._gen

    def child(self, index: int) -> "RngStream":
        """Derive an independent child stream; the parent is unchanged."""
        if not 0 <= index < _MAX_CHILD:
            raise ValueError(f"child index {index} outside [0, 2^32)")
        return RngStream(self.master_seed, self.path + (int(index),))

    # -- samplers -----------------------------------------------------------

    def uniform(self, lo: float = 0.0, hi: float = 1.0, size=None):
        if not hi >= lo:
            raise ValueError(f"uniform bounds reversed: lo={lo}, hi={hi}")
        return self.generator.uniform(lo, hi, size=size)

    def normal(self, mu: float = 0.0, sigma: float = 1.0, size=None):
        if sigma < 0:
            raise ValueError(f"normal sigma must be >= 0, got {sigma}")
        return mu + sigma * self.generator.standard_normal(size=size)

    def trunc_normal(self, mu: float, sigma: float, lo: float, hi: float) -> float:
        """Normal restricted to ``[lo, hi]``.

        Rejection sampling while the acceptance rate permits; inverse-CDF
        otherwise, so far-tail truncations stay exact instead of spinning.
        """
        if not lo < hi:
            raise ValueError(f"truncation bounds must satisfy lo < hi, got [{lo}, {hi}]")
        if sigma < 0:
            raise ValueError(f"trunc_normal sigma must be >= 0, got {sigma}")
        if sigma == 0:
            return float(min(max(mu, lo), hi))
        a = (lo - mu) / sigma
        b = (hi - mu) / sigma
        accept = ndtr(b) - ndtr(a)
        if accept >= _REJECTION_FLOOR:
            for _ in range(_REJECTION_CAP):
                x = self.normal(mu, sigma)
                if lo <= x <= hi:
                    return float(x)
        u = self.uniform(float(ndtr(a)), float(ndtr(b)))
        x = mu + sigma * float(ndtri(u))
        return float(min(max(x, lo), hi))

    def beta(self, a: float, b: float, size=None):
        """Beta(a, b) via the ratio of two gamma draws."""
        if a <= 0 or b <= 0:
            raise ValueError(f"beta shapes must be positive, got a={a}, b={b}")
        x = self.generator.gamma(a, size=size)
        y = self.generator.gamma(b, size=size)
        return x / (x + y)

    def dirichlet(self, alpha) -> np.ndarray:
        """Dirichlet(alpha) via normalized gamma draws; weights sum to 1."""
        alpha = np.asarray(alpha, dtype=float)
        if alpha.ndim != 1 or alpha.size == 0:
            raise ValueError("dirichlet concentration must be a non-empty vector")
        if np.any(alpha <= 0):
            raise ValueError(f"dirichlet concentrations must be positive, got {alpha}")
        while True:
            g = self.generator.gamma(alpha)
            total = g.sum()
            if total > 0:
                return g / total

    def categorical(self, weights, size=None):
        """Index draw with probability proportional to ``weights``."""
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("categorical weights must be a non-empty vector")
        if np.any(w < 0):
            raise ValueError(f"categorical weights must be nonnegative, got {w}")
        cdf = np.cumsum(w)
        if cdf[-1] <= 0:
            raise ValueError("categorical weights sum to zero")
        u = self.generator.uniform(0.0, cdf[-1], size=size)
        idx = np.searchsorted(cdf, u, side="right")
        idx = np.minimum(idx, w.size - 1)
        return int(idx) if size is None else idx

    def integers(self, lo: int, hi: int, size=None):
        """Uniform integer in the half-open range [lo, hi)."""
        if hi <= lo:
            raise ValueError(f"integers range empty: [{lo}, {hi})")
        out = self.generator.integers(lo, hi, size=size)
        return int(out) if size is None else out

    def choice(self, options: Sequence):
        return options[self.integers(0, len(options))]


def derive_child(parent: RngStream, index: int) -> RngStream:
    """Functional alias for :meth:`RngStream.child`."""
    return parent.child(index)


def cross_correlation(a: np.ndarray, b: np.ndarray) -> float:
    """Pearson correlation between two equal-length draw sequences."""
    if len(a) != len(b):
        raise ValueError("sequences must have equal length")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    sa, sb = a.std(), b.std()
    if sa == 0 or sb == 0:
        return 0.0
    return float(np.mean((a - a.mean()) * (b - b.mean())) / (sa * sb))
