"""Dense revised simplex for small standard-form linear programs.

    minimize c @ x  subject to  A @ x = b,  x >= 0

The caller supplies a feasible starting basis, which avoids a phase-one
problem for the moment-matching LPs this package solves.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

__all__ = ["LPError", "LPResult", "revised_simplex"]


class LPError(ArithmeticError):
    """Solver failure; ``diagnostics`` holds the last iterate's state."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass
class LPResult:
    x: np.ndarray
    objective: float
    duals: np.ndarray
    reduced_costs: np.ndarray
    basis: np.ndarray
    iterations: int
    # b @ duals: a lower bound on every feasible objective (reduced costs >= 0)
    dual_bound: float


def revised_simplex(A, b, c, basis, *, pivot_tol=1e-10, opt_tol=1e-10,
                    feas_tol=1e-9, max_iter=20000, bland_after=30) -> LPResult:
    """Solve a standard-form LP from a primal-feasible starting basis.

    Pricing is Dantzig's most-negative reduced cost. After ``bland_after``
    consecutive degenerate pivots the solver switches to Bland's
    smallest-index rule, which cannot cycle, and switches back after the
    first nondegenerate step.

    Raises
    ------
    LPError
        On an unbounded direction, a singular basis, or the iteration cap.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    basis = np.array(basis, dtype=np.int64)
    if basis.shape != (m,):
        raise ValueError("basis must name one column per row")

    degenerate_run = 0
    for it in range(max_iter):
        B = A[:, basis]
        try:
            lu = lu_factor(B, check_finite=False)
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise LPError("singular basis", {"iteration": it}) from exc
        xb = lu_solve(lu, b, check_finite=False)
        y = lu_solve(lu, c[basis], trans=1, check_finite=False)
        if not (np.all(np.isfinite(xb)) and np.all(np.isfinite(y))):
            raise LPError("singular basis", {"iteration": it, "basis": basis.copy()})
        reduced = c - A.T @ y
        reduced[basis] = 0.0

        if degenerate_run >= bland_after:
            candidates = np.flatnonzero(reduced < -opt_tol)
            entering = int(candidates[0]) if candidates.size else -1
        else:
            entering = int(np.argmin(reduced))
            if reduced[entering] >= -opt_tol:
                entering = -1
        if entering < 0:
            x = np.zeros(n)
            x[basis] = xb
            return LPResult(x, float(c[basis] @ xb), y, reduced, basis, it,
                            float(b @ y))

        d = lu_solve(lu, A[:, entering], check_finite=False)
        # relative pivot threshold keeps near-dependent columns out of the basis
        rows = np.flatnonzero(d > pivot_tol * max(1.0, np.abs(d).max()))
        if rows.size == 0:
            raise LPError("LP is unbounded",
                          {"iteration": it, "entering": entering})
        xr = np.maximum(xb[rows], 0.0)
        ratios = xr / d[rows]
        if degenerate_run >= bland_after:
            theta = ratios.min()
            ties = rows[ratios <= theta + pivot_tol]
            leave = int(ties[np.argmin(basis[ties])])
        else:
            # Harris two-pass test: bound the step allowing a small
            # infeasibility, then take the largest pivot within that bound
            theta_max = ((xr + feas_tol) / d[rows]).min()
            cand = np.flatnonzero(ratios <= theta_max)
            pick = cand[np.argmax(d[rows[cand]])]
            leave = int(rows[pick])
            theta = ratios[pick]
        degenerate_run = degenerate_run + 1 if theta <= pivot_tol else 0
        basis[leave] = entering

    raise LPError(f"simplex did not converge in {max_iter} iterations",
                  {"iteration": max_iter, "basis": basis.copy(),
                   "objective": float(c[basis] @ xb),
                   "min_reduced_cost": float(reduced.min())})
