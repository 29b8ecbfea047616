"""Dense ground truth: normalized Laplacian, full eigendecomposition, and the
walk-matrix moments implied by an exact spectrum."""
from __future__ import annotations

import math

import numpy as np

from .graph import Graph

__all__ = [
    "DENSE_LIMIT",
    "ConvergenceError",
    "DenseLimitError",
    "exact_moments",
    "exact_spectrum",
    "jacobi_eigh",
    "normalized_laplacian",
]

DENSE_LIMIT = 5000


class DenseLimitError(ValueError):
    pass


class ConvergenceError(ArithmeticError):
    pass


def normalized_laplacian(g: Graph, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """``I - D^{-1/2} A D^{-1/2}`` as a dense array.

    Rows and columns of isolated vertices are all zero, so each isolated
    vertex contributes the eigenvalue 0.
    """
    if g.n > dense_limit:
        raise DenseLimitError(
            f"graph has {g.n} vertices, above the dense limit of {dense_limit}; "
            "use the moment-based estimator instead")
    deg = g.degrees.astype(float)
    inv_sqrt = np.zeros_like(deg)
    nz = deg > 0
    inv_sqrt[nz] = 1.0 / np.sqrt(deg[nz])
    lap = np.diag(nz.astype(float))
    e = g.edges()
    w = inv_sqrt[e[:, 0]] * inv_sqrt[e[:, 1]]
    lap[e[:, 0], e[:, 1]] = -w
    lap[e[:, 1], e[:, 0]] = -w
    return lap


def jacobi_eigh(a: np.ndarray, tol: float = 1e-10, max_sweeps: int = 100,
                vectors: bool = False):
    """Cyclic Jacobi eigensolver for a dense symmetric matrix.

    Sweeps over all off-diagonal pairs until the off-diagonal Frobenius norm
    drops to ``tol`` (scaled by ``max(1, ||a||_F)``). Returns the eigenvalues
    in ascending order and, if requested, the matching orthonormal
    eigenvectors as columns.
    """
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    q = np.eye(n) if vectors else None
    scale = max(1.0, float(np.linalg.norm(a)))

    def off_norm():
        off = a.copy()
        np.fill_diagonal(off, 0.0)
        return float(np.linalg.norm(off))

    for _ in range(max_sweeps + 1):
        if off_norm() <= tol * scale:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                if apr == 0.0:
                    continue
                diff = a[r, r] - a[p, p]
                if abs(apr) < 1e-150 * max(abs(diff), 1.0):
                    a[p, r] = a[r, p] = 0.0
                    continue
                theta = diff / (2.0 * apr)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                row_p = a[p, :].copy()
                row_r = a[r, :]
                a[p, :] = c * row_p - s * row_r
                a[r, :] = s * row_p + c * row_r
                col_p = a[:, p].copy()
                col_r = a[:, r]
                a[:, p] = c * col_p - s * col_r
                a[:, r] = s * col_p + c * col_r
                a[p, r] = a[r, p] = 0.0
                if q is not None:
                    qp = q[:, p].copy()
                    q[:, p] = c * qp - s * q[:, r]
                    q[:, r] = s * qp + c * q[:, r]
    else:
        raise ConvergenceError(
            f"Jacobi did not converge in {max_sweeps} sweeps "
            f"(off-diagonal norm {off_norm():.3e})")
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    if q is None:
        return w[order]
    return w[order], q[:, order]


def exact_spectrum(g: Graph, method: str = "lapack",
                   dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """Sorted eigenvalues of the normalized Laplacian, clipped to ``[0, 2]``.

    ``method`` is ``"lapack"`` (symmetric LAPACK driver) or ``"jacobi"``
    (cyclic Jacobi rotations; practical only for a few hundred vertices).
    """
    lap = normalized_laplacian(g, dense_limit)
    if g.n == 0:
        return np.zeros(0)
    if method == "lapack":
        try:
            w = np.linalg.eigvalsh(lap)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(str(exc)) from exc
    elif method == "jacobi":
        w = jacobi_eigh(lap)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    return np.clip(np.sort(w), 0.0, 2.0)


def exact_moments(spectrum, max_order: int):
    """Walk-matrix moments ``mean((1 - lambda)^l)`` for ``l = 1..max_order``.

    Returns a :class:`~spectral_sketch.moments.MomentVector` with
    ``walks=None``.
    """
    from .moments import MomentVector

    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    mu = 1.0 - np.asarray(spectrum, dtype=float)
    powers = np.cumprod(np.broadcast_to(mu, (max_order, mu.size)), axis=0)
    vals = np.array([math.fsum(row) / mu.size for row in powers])
    return MomentVector(np.clip(vals, -1.0, 1.0), walks=None)
