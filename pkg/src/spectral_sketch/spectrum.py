"""Finite spectral distributions and the 1-D transport utilities used to
compare them."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpectralDistribution",
    "discretize_spectrum",
    "emd_w1",
    "sorted_vector_distance",
    "union_spectrum",
]

NORM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SpectralDistribution:
    """Point masses ``masses[i]`` at strictly increasing ``support[i]``."""

    support: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.support, dtype=float).ravel()
        w = np.asarray(self.masses, dtype=float).ravel()
        if s.shape != w.shape:
            raise ValueError("support and masses differ in length")
        if s.size and np.any(np.diff(s) <= 0):
            raise ValueError("support must be strictly increasing")
        if np.any(w < 0):
            raise ValueError("masses must be nonnegative")
        object.__setattr__(self, "support", s)
        object.__setattr__(self, "masses", w)

    @classmethod
    def from_points(cls, values, weights=None) -> "SpectralDistribution":
        """Merge (possibly repeated, unsorted) points; equal weights by default."""
        values = np.asarray(values, dtype=float).ravel()
        if weights is None:
            weights = np.full(values.size, 1.0 / max(values.size, 1))
        weights = np.asarray(weights, dtype=float).ravel()
        support, inverse = np.unique(values, return_inverse=True)
        masses = np.bincount(inverse.ravel(), weights=weights,
                             minlength=support.size)
        return cls(support, masses)

    @property
    def total(self) -> float:
        return math.fsum(self.masses)

    def mean(self) -> float:
        return math.fsum(self.support * self.masses) / self.total

    def normalized(self) -> "SpectralDistribution":
        return SpectralDistribution(self.support, self.masses / self.total)

    def pruned(self) -> "SpectralDistribution":
        keep = self.masses > 0
        return SpectralDistribution(self.support[keep], self.masses[keep])

    def moments(self, max_order: int) -> np.ndarray:
        return np.array([math.fsum(self.masses * self.support ** k)
                         for k in range(1, max_order + 1)])

    def __len__(self):
        return self.support.size

    def __repr__(self):
        return f"SpectralDistribution({self.support.size} atoms, mean={self.mean():.4g})"


def _check_normalized(d: SpectralDistribution, name: str):
    if abs(d.total - 1.0) > NORM_TOL:
        raise ValueError(f"{name} is not normalized (total mass {d.total!r})")


def emd_w1(p: SpectralDistribution, q: SpectralDistribution) -> float:
    """Wasserstein-1 distance between two finite distributions on the line.

    Integrates ``|F_p - F_q|`` over the merged support, where ``F`` is the
    right-continuous CDF.
    """
    _check_normalized(p, "p")
    _check_normalized(q, "q")
    xs = np.union1d(p.support, q.support)
    if xs.size < 2:
        return 0.0
    fp = np.concatenate([[0.0], np.cumsum(p.masses)])[
        np.searchsorted(p.support, xs, side="right")]
    fq = np.concatenate([[0.0], np.cumsum(q.masses)])[
        np.searchsorted(q.support, xs, side="right")]
    return math.fsum(np.abs(fp - fq)[:-1] * np.diff(xs))


def sorted_vector_distance(a, b) -> float:
    """``mean(|a_i - b_i|)`` for two sorted spectra of equal length."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"spectra differ in length: {a.size} vs {b.size}")
    if a.size == 0:
        return 0.0
    return math.fsum(np.abs(a - b)) / a.size


def discretize_spectrum(n: int, q: SpectralDistribution) -> np.ndarray:
    """``n`` equally weighted values summarizing ``q`` by quantile bands.

    Entry ``i`` is the mean of ``q`` restricted to the probability band
    ``[i/n, (i+1)/n]`` of its quantile function; atoms straddling a band edge
    are split between the neighbouring bands.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    _check_normalized(q, "q")
    q = q.pruned().normalized()
    # G(u) = integral_0^u f_q is piecewise linear with knots at the CDF levels
    levels = np.concatenate([[0.0], np.cumsum(q.masses)])
    levels[-1] = 1.0
    integral = np.concatenate([[0.0], np.cumsum(q.masses * q.support)])
    u = np.arange(n + 1) / n
    g = np.interp(u, levels, integral)
    v = np.diff(g) * n
    return np.maximum.accumulate(v)


def union_spectrum(a, b) -> np.ndarray:
    """Spectrum of a disjoint union: the merged multiset of both spectra."""
    return np.sort(np.concatenate([np.asarray(a, dtype=float).ravel(),
                                   np.asarray(b, dtype=float).ravel()]))
