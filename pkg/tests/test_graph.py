import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import chisquare

from spectral_sketch.graph import (Graph, GraphError, RngStream, WalkOracle,
                                   disjoint_union, generate, load_edge_list,
                                   random_neighbor, random_vertex, write_edge_list)

from oracles import random_graph


def test_triangle():
    g = load_edge_list("0 1\n1 2\n2 0")
    assert (g.n, g.m, g.max_degree) == (3, 3, 2)


def test_duplicates_and_self_loops_dropped():
    g = load_edge_list("0 1\n1 0\n0 0")
    assert (g.n, g.m) == (2, 1)
    np.testing.assert_array_equal(g.neighbors(0), [1])


def test_id_compaction_first_appearance():
    g = load_edge_list("# comment\n5 9")
    assert (g.n, g.m) == (2, 1)
    np.testing.assert_array_equal(g.edges(), [[0, 1]])
    g = load_edge_list("7 3\n3 100\n")
    np.testing.assert_array_equal(g.edges(), [[0, 1], [1, 2]])


def test_parse_error_reports_line():
    with pytest.raises(GraphError, match="line 3"):
        load_edge_list("0 1\n# c\n1 x\n")


def test_empty_input_rejected():
    with pytest.raises(GraphError):
        load_edge_list("# only a comment\n\n")


def test_load_from_file_object_and_path(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("1 2\n2 3\n")
    assert load_edge_list(p) == load_edge_list(io.StringIO("1 2\n2 3\n"))
    assert load_edge_list(str(p)).m == 2


@pytest.mark.parametrize("kind, sizes, n, m, degs", [
    ("cycle", (4,), 4, 4, {2}),
    ("complete", (5,), 5, 10, {4}),
    ("grid2d", (3, 3), 9, 12, {2, 3, 4}),
    ("path", (4,), 4, 3, {1, 2}),
    ("star", (4,), 5, 4, {1, 4}),
])
def test_generators(kind, sizes, n, m, degs):
    g = generate(kind, *sizes)
    assert (g.n, g.m) == (n, m)
    assert set(g.degrees.tolist()) == degs
    assert g.is_symmetric()


@pytest.mark.parametrize("kind, sizes", [("cycle", (2,)), ("complete", (0,)),
                                         ("grid2d", (0, 3)), ("star", (0,)),
                                         ("wheel", (5,))])
def test_generator_rejects_bad_sizes(kind, sizes):
    with pytest.raises(GraphError):
        generate(kind, *sizes)


def test_preferential_attachment_shape():
    g = generate("ba", 500, attach=3, seed=1)
    assert g.n == 500
    assert g.m == 6 + 3 * (500 - 4)
    assert g.is_symmetric()
    assert g.degrees.min() >= 3
    assert generate("ba", 500, attach=3, seed=1) == g


def test_disjoint_union():
    k2 = generate("path", 2)
    u = disjoint_union(k2, k2)
    np.testing.assert_array_equal(u.edges(), [[0, 1], [2, 3]])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_round_trip_and_symmetry(n, seed):
    g = random_graph(np.random.default_rng(seed), n)
    assert g.is_symmetric()
    assert g.degrees.sum() == 2 * g.m
    buf = io.StringIO()
    write_edge_list(g, buf)
    h = load_edge_list(buf.getvalue())
    assert h == g
    buf2 = io.StringIO()
    write_edge_list(h, buf2)
    assert buf2.getvalue() == buf.getvalue()


@pytest.mark.parametrize("kind, sizes, lines", [
    ("cycle", (4,), 4), ("complete", (3,), 3), ("grid2d", (2, 2), 4)])
def test_written_files_have_one_line_per_edge(kind, sizes, lines):
    buf = io.StringIO()
    write_edge_list(generate(kind, *sizes), buf)
    assert buf.getvalue().count("\n") == lines


def test_load_write_load_identical():
    text = "10 4\n4 7\n7 10\n10 2\n# c\n2 2\n9 9\n"
    g = load_edge_list(text)
    assert g.n == 5 and g.degree(4) == 0
    buf = io.StringIO()
    write_edge_list(g, buf)
    assert load_edge_list(buf.getvalue()) == g


def test_random_vertex_single():
    g = Graph.from_edges(1, [])
    rng = RngStream(3)
    assert all(random_vertex(g, rng) == 0 for _ in range(20))


def test_random_vertex_uniform():
    oracle = WalkOracle(generate("cycle", 4))
    draws = oracle.random_vertices(100_000, RngStream(11))
    counts = np.bincount(draws, minlength=4)
    sigma = np.sqrt(100_000 * 0.25 * 0.75)
    assert np.all(np.abs(counts - 25_000) <= 4 * sigma)


def test_rng_stream_determinism():
    a = [RngStream(42, 7).generator.integers(0, 10**9) for _ in range(2)]
    assert a[0] == a[1]
    assert RngStream(42, 7).generator.random() != RngStream(42, 8).generator.random()
    g = generate("complete", 6)
    x = WalkOracle(g).random_vertices(50, RngStream(1, 2))
    y = WalkOracle(g).random_vertices(50, RngStream(1, 2))
    np.testing.assert_array_equal(x, y)


def test_star_neighbors():
    g = generate("star", 4)
    rng = RngStream(0)
    draws = [random_neighbor(g, 0, rng) for _ in range(4000)]
    assert set(draws) == {1, 2, 3, 4}
    assert chisquare(np.bincount(draws, minlength=5)[1:]).pvalue > 0.001
    assert all(random_neighbor(g, 3, rng) == 0 for _ in range(50))


def test_isolated_vertex_stays():
    g = Graph.from_edges(3, [(0, 1)])
    assert random_neighbor(g, 2, RngStream(0)) == 2
    out = WalkOracle(g).random_neighbors(np.array([2, 2, 0]), RngStream(0))
    np.testing.assert_array_equal(out, [2, 2, 1])


@pytest.mark.parametrize("seed", range(3))
def test_neighbor_chi_square(seed):
    g = random_graph(np.random.default_rng(seed), 25, 0.3, connected=True)
    v = int(np.argmax(g.degrees))
    oracle = WalkOracle(g)
    draws = oracle.random_neighbors(np.full(100_000, v), RngStream(seed))
    nb = g.neighbors(v)
    counts = np.array([np.count_nonzero(draws == u) for u in nb])
    assert counts.sum() == 100_000
    assert chisquare(counts).pvalue > 0.001
    assert oracle.neighbor_queries == 100_000
