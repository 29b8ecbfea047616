"""End-to-end estimator: walks -> moments -> LP inversion -> averaged spectrum."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .graph import Graph, RngStream, WalkOracle
from .inversion import GridSpec, InversionResult, average_distributions, \
    moment_inverse, walk_to_laplacian
from .moments import MomentVector, estimate_moments
from .spectrum import SpectralDistribution

__all__ = ["EstimateRun", "estimate_spectrum", "thread_count"]

THREADS_ENV = "SPECTRAL_SKETCH_THREADS"


def thread_count(default: int | None = None) -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return default or os.cpu_count() or 1


@dataclass
class EstimateRun:
    distribution: SpectralDistribution
    repeats: list[SpectralDistribution]
    moments: list[MomentVector]
    objectives: list[float]
    neighbor_queries: int
    vertex_queries: int


def estimate_spectrum(g: Graph, walks: int = 10_000, length: int = 20,
                      repeats: int = 20, spacing: float = 0.01, seed: int = 0,
                      threads: int | None = None) -> EstimateRun:
    """Estimate the normalized-Laplacian spectral distribution of ``g``.

    Each repeat ``r`` uses the random stream ``(seed, r)``, estimates
    ``length`` walk moments from ``walks`` walks, inverts them on a grid of
    the given spacing over ``[-1, 1]`` and maps the result to ``[0, 2]``.
    The repeats are averaged. Output does not depend on ``threads``.
    """
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    grid = GridSpec(-1.0, 1.0, spacing)
    grid.points()  # validate before spending queries

    def one(r: int):
        oracle = WalkOracle(g)
        mv = estimate_moments(oracle, length, walks, RngStream(seed, r))
        inv: InversionResult = moment_inverse(mv, grid)
        return (walk_to_laplacian(inv.distribution), mv, inv.objective,
                oracle.neighbor_queries, oracle.vertex_queries)

    workers = min(threads or thread_count(), repeats)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, range(repeats)))
    else:
        results = [one(r) for r in range(repeats)]
    dists = [r[0] for r in results]
    return EstimateRun(
        distribution=average_distributions(dists),
        repeats=dists,
        moments=[r[1] for r in results],
        objectives=[r[2] for r in results],
        neighbor_queries=sum(r[3] for r in results),
        vertex_queries=sum(r[4] for r in results),
    )
