"""Recover a distribution on a grid from (noisy) power moments.

The recovered masses ``p`` minimize ``sum_l |sum_j x_j**l p_j - m_l|`` over the
probability simplex. The absolute values are linearized with a pair of
nonnegative slacks per moment, giving a small dense LP solved by
:func:`spectral_sketch.lp.revised_simplex`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .lp import LPError, revised_simplex
from .moments import MomentVector
from .spectrum import SpectralDistribution

__all__ = [
    "GridSpec",
    "InversionResult",
    "average_distributions",
    "moment_inverse",
    "moment_residual",
    "walk_to_laplacian",
]

MAX_GRID_POINTS = 10_000
CERTIFICATE_TOL = 1e-8
# objective - dual bound beyond this is treated as a numerical breakdown
FAILURE_GAP = 1e-6
PERTURBATIONS = (0.0, 1e-9, 1e-7)


@dataclass(frozen=True)
class GridSpec:
    lo: float = -1.0
    hi: float = 1.0
    spacing: float = 0.01

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("grid needs lo < hi")
        if not self.spacing > 0:
            raise ValueError("grid spacing must be positive")

    @property
    def steps(self) -> int:
        return math.ceil((self.hi - self.lo) / self.spacing - 1e-9)

    def points(self) -> np.ndarray:
        t = self.steps
        if t + 1 > MAX_GRID_POINTS:
            raise ValueError(f"grid has {t + 1} points, limit is {MAX_GRID_POINTS}")
        x = np.round(self.lo + np.arange(t + 1) * self.spacing, 12)
        x[-1] = self.hi
        return x


@dataclass
class InversionResult:
    distribution: SpectralDistribution
    objective: float
    dual_bound: float
    iterations: int

    @property
    def gap(self) -> float:
        return self.objective - self.dual_bound


def moment_residual(support, masses, moments) -> float:
    """``sum_l |sum_j x_j**l p_j - m_l|`` with compensated sums."""
    support = np.asarray(support, dtype=float)
    masses = np.asarray(masses, dtype=float)
    moments = np.asarray(moments, dtype=float)
    total = []
    xp = np.ones_like(support)
    for m in moments:
        xp = xp * support
        total.append(abs(math.fsum(np.append(xp * masses, -m))))
    return math.fsum(total)


def moment_inverse(moments: MomentVector | np.ndarray,
                   grid: GridSpec = GridSpec()) -> InversionResult:
    """Distribution on ``grid`` whose power moments best match ``moments``
    in L1.

    Parameters
    ----------
    moments : MomentVector or array
        Estimated moments ``m_1..m_L``.
    grid : GridSpec
        Candidate support ``lo + i * spacing``, last point clamped to ``hi``.

    Returns
    -------
    InversionResult
        Zero-mass grid points are dropped from the distribution. ``objective``
        is the L1 moment residual recomputed from the returned masses, and
        ``dual_bound`` the simplex dual value certifying optimality.

    Raises
    ------
    LPError
        If every solve attempt fails, or the returned masses miss the dual
        bound by more than ``FAILURE_GAP``. A degenerate input is retried
        with a tiny deterministic jitter of the right-hand side.
    """
    alpha = np.asarray(getattr(moments, "values", moments), dtype=float)
    L = alpha.size
    if L < 1:
        raise ValueError("need at least one moment")
    x = grid.points()
    k = x.size
    V = np.cumprod(np.broadcast_to(x, (L, k)), axis=0)

    # columns: p (k), u_plus (L), u_minus (L)
    #   V p - u_plus + u_minus = alpha ;  1^T p = 1
    eye = np.eye(L)
    A = np.zeros((L + 1, k + 2 * L))
    A[:L, :k] = V
    A[:L, k:k + L] = -eye
    A[:L, k + L:] = eye
    A[L, :k] = 1.0
    b = np.append(alpha, 1.0)
    c = np.concatenate([np.zeros(k), np.ones(2 * L)])

    sol = None
    for shift in PERTURBATIONS:
        rhs = b.copy()
        if shift:
            # deterministic jitter breaks the degeneracy of exact-moment inputs
            rhs[:L] += shift * np.random.default_rng(L).uniform(-1.0, 1.0, L)
        start = int(np.argmin(np.abs(V - rhs[:L, None]).sum(axis=0)))
        resid = rhs[:L] - V[:, start]
        basis = np.where(resid >= 0, k + L + np.arange(L), k + np.arange(L))
        basis = np.append(basis, start)
        try:
            sol = revised_simplex(A, rhs, c, basis, max_iter=5000)
            break
        except LPError as exc:
            failure = exc
    if sol is None:
        raise failure

    p = _polish(A, b, sol, k)
    p /= math.fsum(p)
    objective = moment_residual(x, p, alpha)
    dual_bound = float(b @ sol.duals)
    if (sol.reduced_costs.min() < -CERTIFICATE_TOL
            or objective - dual_bound > FAILURE_GAP):
        raise LPError("optimality certificate failed",
                      {"objective": objective, "dual_bound": dual_bound,
                       "min_reduced_cost": float(sol.reduced_costs.min()),
                       "iterations": sol.iterations})
    dist = SpectralDistribution(x, p).pruned()
    return InversionResult(dist, objective, dual_bound, sol.iterations)


def _polish(A, b, sol, k):
    """Nonnegative grid masses from the final basis.

    Near-degenerate bases leave tiny negative basic values; plain clipping
    perturbs the moment residual by their size. A nonnegative least-squares
    re-solve on the same columns usually removes that error, and is kept
    only when it lowers the L1 residual.
    """
    alpha = b[:-1]
    clipped = np.maximum(sol.x[:k], 0.0)
    best = clipped
    if clipped.sum() > 0:
        best_obj = _l1(A[:-1, :k] @ (clipped / clipped.sum()), alpha)
    else:
        best_obj = math.inf
    cols = sol.basis
    try:
        vals, _ = nnls(A[:, cols], b, maxiter=20 * len(cols))
    except RuntimeError:
        return best
    cand = np.zeros(A.shape[1])
    cand[cols] = vals
    cand = cand[:k]
    if cand.sum() > 0 and _l1(A[:-1, :k] @ (cand / cand.sum()), alpha) < best_obj:
        best = cand
    if best.sum() <= 0:
        raise LPError("simplex returned no grid mass", {"iterations": sol.iterations})
    return best


def _l1(v, alpha):
    return math.fsum(np.abs(v - alpha))


def average_distributions(ds) -> SpectralDistribution:
    """Uniform mixture of the given distributions."""
    ds = list(ds)
    if not ds:
        raise ValueError("cannot average an empty list of distributions")
    support = np.concatenate([d.support for d in ds])
    masses = np.concatenate([d.masses for d in ds]) / len(ds)
    mix = SpectralDistribution.from_points(support, masses)
    return mix.normalized()


def walk_to_laplacian(d: SpectralDistribution) -> SpectralDistribution:
    """Map a walk-matrix spectrum on ``[-1, 1]`` to the Laplacian one via
    ``x -> 1 - x``."""
    if d.support.size and (d.support[0] < -1 - 1e-9 or d.support[-1] > 1 + 1e-9):
        raise ValueError("walk-matrix spectrum must lie in [-1, 1]")
    support = np.clip(1.0 - d.support[::-1], 0.0, 2.0)
    return SpectralDistribution.from_points(support, d.masses[::-1])
