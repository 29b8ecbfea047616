"""Immutable undirected graphs in compressed adjacency form, plus the two
query primitives the sampling algorithms rely on: a uniformly random vertex
and a uniformly random neighbor of a given vertex.
"""
from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

__all__ = [
    "Graph",
    "GraphError",
    "RngStream",
    "WalkOracle",
    "as_generator",
    "disjoint_union",
    "generate",
    "load_edge_list",
    "random_neighbor",
    "random_vertex",
    "write_edge_list",
]


class GraphError(ValueError):
    """Raised for malformed graph input or invalid generator parameters."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph stored as CSR arrays.

    ``indices[indptr[v]:indptr[v + 1]]`` holds the sorted neighbors of ``v``.
    Build instances with :meth:`from_edges` rather than directly.
    """

    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build a graph on vertices ``0..n-1``; self-loops and repeats are dropped."""
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise GraphError("edge endpoint out of range")
        e = e[e[:, 0] != e[:, 1]]
        both = np.concatenate([e, e[:, ::-1]])
        # unique (row, col) pairs; lexsort keeps neighbor lists sorted
        if both.size:
            keys = both[:, 0] * max(n, 1) + both[:, 1]
            keys = np.unique(keys)
            rows, cols = np.divmod(keys, max(n, 1))
        else:
            rows = cols = np.zeros(0, dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        indptr.setflags(write=False)
        cols = cols.astype(np.int64)
        cols.setflags(write=False)
        return cls(indptr, cols)

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def edges(self) -> np.ndarray:
        """Return an ``(m, 2)`` array of edges with ``u < v``."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        mask = rows < self.indices
        return np.column_stack([rows[mask], self.indices[mask]])

    def is_symmetric(self) -> bool:
        for v in range(self.n):
            for u in self.neighbors(v):
                nb = self.neighbors(int(u))
                i = np.searchsorted(nb, v)
                if i >= len(nb) or nb[i] != v:
                    return False
        return True

    def subgraph(self, vertices) -> "Graph":
        """Induced subgraph, vertices relabelled in the given order."""
        vertices = np.asarray(vertices, dtype=np.int64)
        relabel = np.full(self.n, -1, dtype=np.int64)
        relabel[vertices] = np.arange(len(vertices))
        e = self.edges()
        a, b = relabel[e[:, 0]], relabel[e[:, 1]]
        keep = (a >= 0) & (b >= 0)
        return Graph.from_edges(len(vertices), np.column_stack([a[keep], b[keep]]))

    def with_edges_removed(self, edges) -> "Graph":
        drop = {tuple(sorted(map(int, uv))) for uv in edges}
        kept = [tuple(uv) for uv in self.edges().tolist() if tuple(uv) not in drop]
        return Graph.from_edges(self.n, kept)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m}, max_degree={self.max_degree})"


def disjoint_union(a: Graph, b: Graph) -> Graph:
    """Vertices of ``b`` are shifted by ``a.n``."""
    eb = b.edges() + a.n
    return Graph.from_edges(a.n + b.n, np.concatenate([a.edges(), eb]))


# ---------------------------------------------------------------- edge lists

def _parse_edge_lines(lines: Iterable[str]):
    ids: dict[int, int] = {}
    edges = []
    for lineno, line in enumerate(lines, 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        tok = s.split()
        if len(tok) < 2:
            raise GraphError(f"line {lineno}: expected two vertex ids, got {s!r}")
        try:
            u, v = int(tok[0]), int(tok[1])
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer vertex id in {s!r}") from None
        if u < 0 or v < 0:
            raise GraphError(f"line {lineno}: negative vertex id in {s!r}")
        edges.append((ids.setdefault(u, len(ids)), ids.setdefault(v, len(ids))))
    if not ids:
        raise GraphError("edge list is empty")
    return len(ids), edges


def load_edge_list(source) -> Graph:
    """Read a SNAP-style edge list.

    ``source`` may be a path, an open text file, or the edge-list text itself
    (any string containing a newline or whitespace-separated pair). Vertex ids
    are compacted to ``0..n-1`` in order of first appearance.
    """
    if isinstance(source, os.PathLike) or (
            isinstance(source, str) and os.path.exists(source)):
        with open(source, encoding="utf-8") as fh:
            n, edges = _parse_edge_lines(fh)
    elif isinstance(source, str):
        n, edges = _parse_edge_lines(io.StringIO(source))
    else:
        n, edges = _parse_edge_lines(source)
    return Graph.from_edges(n, edges)


def _edge_lines(g: Graph):
    """Edge lines ordered so that reloading reproduces the vertex ids.

    Vertex ``v`` first appears on a line pairing it with a smaller, already
    written vertex. A vertex with no smaller neighbor is introduced with its
    successor when they are adjacent, and otherwise by a ``v v`` self-loop
    line, which the loader drops after registering the id.
    """
    done_with_next = False
    for v in range(g.n):
        nb = g.neighbors(v).tolist()
        smaller = [u for u in nb if u < v]
        if done_with_next:
            smaller = smaller[:-1]  # v - 1 is the largest smaller neighbor
            done_with_next = False
        elif not smaller:
            if v + 1 in nb:
                yield v, v + 1
                done_with_next = True
            else:
                yield v, v
            continue
        for u in smaller:
            yield u, v


def write_edge_list(g: Graph, dest) -> None:
    """Write one ``u v`` line per undirected edge (``u < v``) such that
    :func:`load_edge_list` reads back an identical graph."""
    text = "".join(f"{u} {v}\n" for u, v in _edge_lines(g))
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        dest.write(text)


# ---------------------------------------------------------------- generators

def _cycle(n):
    if n < 3:
        raise GraphError("cycle requires at least 3 vertices")
    i = np.arange(n)
    return Graph.from_edges(n, np.column_stack([i, (i + 1) % n]))


def _complete(n):
    if n < 1:
        raise GraphError("complete graph requires at least 1 vertex")
    iu = np.triu_indices(n, 1)
    return Graph.from_edges(n, np.column_stack(iu))


def _path(n):
    if n < 1:
        raise GraphError("path requires at least 1 vertex")
    i = np.arange(n - 1)
    return Graph.from_edges(n, np.column_stack([i, i + 1]))


def _grid2d(rows, cols=None):
    cols = rows if cols is None else cols
    if rows < 1 or cols < 1:
        raise GraphError("grid dimensions must be at least 1")
    idx = np.arange(rows * cols).reshape(rows, cols)
    horiz = np.column_stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()])
    vert = np.column_stack([idx[:-1, :].ravel(), idx[1:, :].ravel()])
    return Graph.from_edges(rows * cols, np.concatenate([horiz, vert]))


def _star(leaves):
    if leaves < 1:
        raise GraphError("star requires at least 1 leaf")
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def _preferential_attachment(n, attach=3, seed=0):
    """Barabasi-Albert style growth seeded from a clique on ``attach + 1`` vertices."""
    if attach < 1 or n < attach + 1:
        raise GraphError("preferential attachment needs attach >= 1 and n > attach")
    gen = np.random.default_rng(seed)
    core = attach + 1
    edges = [(u, v) for u in range(core) for v in range(u + 1, core)]
    # each vertex appears once per incident edge end
    ends = [x for e in edges for x in e]
    for v in range(core, n):
        targets: set[int] = set()
        while len(targets) < attach:
            targets.add(ends[gen.integers(len(ends))])
        for t in sorted(targets):
            edges.append((t, v))
            ends.extend((t, v))
    return Graph.from_edges(n, edges)


_GENERATORS = {
    "cycle": _cycle,
    "complete": _complete,
    "path": _path,
    "grid2d": _grid2d,
    "star": _star,
    "ba": _preferential_attachment,
}


def generate(kind: str, *sizes: int, **kwargs) -> Graph:
    """Canonical member of a graph family.

    ``cycle(n)``, ``complete(n)``, ``path(n)``, ``grid2d(rows, cols)``,
    ``star(leaves)`` (``leaves + 1`` vertices), and ``ba(n, attach, seed)``.
    """
    try:
        fn = _GENERATORS[kind]
    except KeyError:
        raise GraphError(f"unknown graph kind {kind!r}; "
                         f"expected one of {sorted(_GENERATORS)}") from None
    try:
        return fn(*(int(s) for s in sizes), **kwargs)
    except TypeError as exc:
        raise GraphError(f"bad size parameters for {kind}: {exc}") from None


# ---------------------------------------------------------------- randomness

@dataclass
class RngStream:
    """Deterministic random stream identified by ``(seed, stream_id)``."""

    seed: int
    stream_id: int = 0
    generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.PCG64(ss))


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


class WalkOracle:
    """Query interface to a graph that counts every query it answers.

    Only the two sampling primitives are exposed; everything built on top of
    the oracle therefore has an observable query cost.
    """

    def __init__(self, graph: Graph):
        self.graph = graph
        self.vertex_queries = 0
        self.neighbor_queries = 0

    @property
    def n(self) -> int:
        return self.graph.n

    def random_vertices(self, count: int, rng) -> np.ndarray:
        gen = as_generator(rng)
        self.vertex_queries += count
        return gen.integers(0, self.graph.n, size=count)

    def random_neighbors(self, vertices: np.ndarray, rng) -> np.ndarray:
        """One uniform neighbor per entry; isolated vertices map to themselves."""
        gen = as_generator(rng)
        g = self.graph
        vertices = np.asarray(vertices, dtype=np.int64)
        self.neighbor_queries += vertices.size
        deg = g.indptr[vertices + 1] - g.indptr[vertices]
        offset = gen.integers(0, np.maximum(deg, 1))
        if g.indices.size == 0:
            return vertices.copy()
        pos = np.minimum(g.indptr[vertices] + offset, g.indices.size - 1)
        return np.where(deg > 0, g.indices[pos], vertices)


def random_vertex(g: Graph, rng) -> int:
    return int(as_generator(rng).integers(0, g.n))


def random_neighbor(g: Graph, v: int, rng) -> int:
    d = g.degree(v)
    if d == 0:
        return v
    return int(g.indices[g.indptr[v] + as_generator(rng).integers(0, d)])
