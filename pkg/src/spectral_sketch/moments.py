"""Spectral moments of the random-walk matrix estimated from return events of
short random walks.

The ``l``-th moment ``(1/n) * sum_i mu_i**l`` of the walk matrix equals the
probability that an ``l``-step walk from a uniformly random vertex ends where
it started, so counting returns gives an unbiased estimate.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, WalkOracle, as_generator

__all__ = [
    "MomentVector",
    "approx_spectral_moment",
    "estimate_moments",
    "required_walks",
    "required_walks_joint",
]


@dataclass
class MomentVector:
    """Moments ``m_1..m_L``; ``walks`` is ``None`` for exact moments."""

    values: np.ndarray
    walks: int | None = None
    queries: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)

    @property
    def max_order(self) -> int:
        return len(self.values)

    def to_json(self) -> str:
        return json.dumps({"max_order": self.max_order, "walks": self.walks,
                           "moments": [float(v) for v in self.values]})

    @classmethod
    def from_json(cls, text: str) -> "MomentVector":
        d = json.loads(text)
        vals = d["moments"]
        if len(vals) != d["max_order"]:
            raise ValueError("max_order does not match number of moments")
        return cls(np.array(vals, dtype=float), walks=d.get("walks"))


def _oracle(g) -> WalkOracle:
    return g if isinstance(g, WalkOracle) else WalkOracle(g)


def approx_spectral_moment(g: Graph | WalkOracle, order: int, walks: int,
                           rng) -> float:
    """Fraction of ``walks`` independent ``order``-step walks that return home.

    Each walk starts at a fresh uniformly random vertex. Pass a
    :class:`WalkOracle` to accumulate query counts across calls.
    """
    if order < 1 or walks < 1:
        raise ValueError("order and walks must be positive")
    oracle = _oracle(g)
    gen = as_generator(rng)
    start = oracle.random_vertices(walks, gen)
    pos = start
    for _ in range(order):
        pos = oracle.random_neighbors(pos, gen)
    return float(np.count_nonzero(pos == start)) / walks


def estimate_moments(g: Graph | WalkOracle, max_order: int, walks: int, rng,
                     per_order: bool = False) -> MomentVector:
    """Estimate moments ``1..max_order`` from ``walks`` random walks.

    By default every walk has length ``max_order`` and reports a return
    indicator after each step, costing exactly ``walks * max_order`` neighbor
    queries. With ``per_order=True`` each order gets its own batch of walks
    instead (``walks * L * (L + 1) / 2`` queries), as in the textbook
    one-moment-at-a-time estimator.
    """
    if max_order < 1 or walks < 1:
        raise ValueError("max_order and walks must be positive")
    oracle = _oracle(g)
    before = oracle.neighbor_queries
    gen = as_generator(rng)
    if per_order:
        vals = [approx_spectral_moment(oracle, k, walks, gen)
                for k in range(1, max_order + 1)]
    else:
        start = oracle.random_vertices(walks, gen)
        pos = start
        hits = np.empty(max_order, dtype=np.int64)
        for k in range(max_order):
            pos = oracle.random_neighbors(pos, gen)
            hits[k] = np.count_nonzero(pos == start)
        vals = hits / walks
    return MomentVector(np.asarray(vals, dtype=float), walks=walks,
                        queries=oracle.neighbor_queries - before)


def required_walks(eps: float, delta: float) -> int:
    """Hoeffding sample size ``ceil(eps**-2 * ln(2/delta) / 2)``."""
    if not (0 < eps < 1) or not (0 < delta < 1):
        raise ValueError("eps and delta must lie in (0, 1)")
    s = 0.5 * math.log(2.0 / delta) / eps ** 2
    # absorb float noise when s is mathematically an integer
    return math.ceil(round(s, 9))


def required_walks_joint(eps: float, delta: float, max_order: int) -> int:
    """Walks per moment so that all ``max_order`` moments are within ``eps``
    simultaneously with probability ``1 - delta`` (union bound)."""
    return required_walks(eps, delta / max_order)
