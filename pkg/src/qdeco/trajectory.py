"""Time series of reduced-state diagnostics shared by the model backends."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Trajectory:
    """Observables of the central system along an evolution.

    ``concurrence`` is None unless the central system is a qubit pair;
    ``offdiag`` tracks the coupled qubit's off-diagonal decay measure.  For
    ensemble averages ``averaged`` is True, the ``*_std`` arrays carry the
    sample standard deviation, and ``n_realizations`` the count.
    """

    times: np.ndarray
    purity: np.ndarray
    concurrence: np.ndarray | None = None
    entropy: np.ndarray | None = None
    offdiag: np.ndarray | None = None
    averaged: bool = False
    n_realizations: int = 1
    purity_std: np.ndarray | None = None
    concurrence_std: np.ndarray | None = None


class RunningMoments:
    """Streaming mean/variance over equally shaped arrays."""

    def __init__(self):
        self.n = 0
        self.mean = None
        self._m2 = None

    def add(self, x):
        x = np.asarray(x, dtype=float)
        if self.mean is None:
            self.mean = np.zeros_like(x)
            self._m2 = np.zeros_like(x)
        self.n += 1
        delta = x - self.mean
        self.mean = self.mean + delta / self.n
        self._m2 = self._m2 + delta * (x - self.mean)

    def merge(self, other: "RunningMoments"):
        if other.n == 0:
            return self
        if self.n == 0:
            self.n, self.mean, self._m2 = other.n, other.mean.copy(), other._m2.copy()
            return self
        n = self.n + other.n
        delta = other.mean - self.mean
        self.mean = self.mean + delta * (other.n / n)
        self._m2 = self._m2 + other._m2 + delta**2 * (self.n * other.n / n)
        self.n = n
        return self

    @property
    def std(self):
        if self.n < 2:
            return np.zeros_like(self.mean)
        return np.sqrt(self._m2 / (self.n - 1))


def merge_averaged(a: Trajectory, b: Trajectory) -> Trajectory:
    """Combine two averaged trajectories over disjoint realization sets."""
    if not (a.averaged and b.averaged):
        raise ValueError("merge needs averaged trajectories")
    if not np.array_equal(a.times, b.times):
        raise ValueError("time grids differ")

    def comb(ma, sa, na, mb, sb, nb):
        if ma is None:
            return None, None
        mom_a, mom_b = RunningMoments(), RunningMoments()
        mom_a.n, mom_a.mean = na, np.asarray(ma, dtype=float)
        mom_a._m2 = np.asarray(sa, dtype=float) ** 2 * max(na - 1, 0)
        mom_b.n, mom_b.mean = nb, np.asarray(mb, dtype=float)
        mom_b._m2 = np.asarray(sb, dtype=float) ** 2 * max(nb - 1, 0)
        mom_a.merge(mom_b)
        return mom_a.mean, mom_a.std

    p, ps = comb(a.purity, a.purity_std, a.n_realizations,
                 b.purity, b.purity_std, b.n_realizations)
    c, cs = comb(a.concurrence, a.concurrence_std, a.n_realizations,
                 b.concurrence, b.concurrence_std, b.n_realizations)
    n = a.n_realizations + b.n_realizations
    ent = None
    if a.entropy is not None:
        ent = (a.entropy * a.n_realizations + b.entropy * b.n_realizations) / n
    off = None
    if a.offdiag is not None:
        off = (a.offdiag * a.n_realizations + b.offdiag * b.n_realizations) / n
    return Trajectory(a.times, p, c, ent, off, True, n, ps, cs)
