import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_pairs, brute_laplacian
from frechet_er.errors import DimensionMismatch, GraphFormatError, NotGraphical, TooLarge
from frechet_er.graph import (Graph, adjacency, check_same_order, complement, complete_graph,
                              cycle_graph, degrees, empty_graph, enumerate_graphs,
                              enumeration_table, format_graph, is_graphical, laplacian,
                              parse_graph, path_graph, positions_to_pairs, read_graph,
                              realize, write_graph, pairs_to_positions)


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    chosen = draw(st.lists(st.sampled_from(all_pairs(n)), unique=True)) if n > 1 else []
    return Graph(n, chosen)


def test_degrees_examples():
    assert degrees(complete_graph(3)).tolist() == [2, 2, 2]
    assert degrees(empty_graph(4)).tolist() == [0, 0, 0, 0]
    assert degrees(path_graph(4)).tolist() == [1, 2, 2, 1]


def test_laplacian_examples():
    assert laplacian(Graph(2, [(1, 2)])).tolist() == [[1, -1], [-1, 1]]
    assert not laplacian(empty_graph(3)).any()
    assert laplacian(complete_graph(3)).tolist() == [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]


def test_complement_examples():
    assert complement(empty_graph(3)) == complete_graph(3)
    assert complement(complete_graph(3)) == empty_graph(3)
    assert complement(Graph(3, [(1, 2)])).edge_set() == {(1, 3), (2, 3)}


@given(graphs())
def test_handshake_and_laplacian(g):
    assert degrees(g).sum() == 2 * g.edge_count
    lap = laplacian(g)
    assert np.array_equal(lap, lap.T)
    assert not lap.sum(axis=1).any()
    assert np.array_equal(lap, brute_laplacian(g.n, g.edges.tolist()))
    assert np.array_equal(np.diag(lap), degrees(g))
    assert np.array_equal(adjacency(g), np.diag(np.diag(lap)) - lap)


@given(graphs())
def test_complement_involution(g):
    c = complement(g)
    assert complement(c) == g
    assert np.array_equal(degrees(c), g.n - 1 - degrees(g))
    assert not g.edge_set() & c.edge_set()


@given(graphs())
def test_text_round_trip(g):
    assert parse_graph(format_graph(g)) == g


def test_file_round_trip(tmp_path):
    g = cycle_graph(6)
    write_graph(g, tmp_path / "g.txt")
    assert read_graph(tmp_path / "g.txt") == g
    assert (tmp_path / "g.txt").read_text().splitlines()[0] == "n 6 edges 6"


@pytest.mark.parametrize("text", [
    "n 3 edges 1\n1 1\n",
    "n 3 edges 2\n1 2\n2 1\n",
    "n 3 edges 1\n1 4\n",
    "n 3 edges 2\n1 2\n",
    "edges 1 n 3\n1 2\n",
    "",
    "n 3 edges 1\n1 2 3\n",
    "n x edges 0\n",
])
def test_parser_rejects(text):
    with pytest.raises(GraphFormatError):
        parse_graph(text)


def test_edges_sorted_and_one_indexed():
    g = Graph(4, [(4, 3), (2, 1), (3, 1)])
    assert g.edges.tolist() == [[1, 2], [1, 3], [3, 4]]


@pytest.mark.parametrize("n", [2, 3, 7, 12])
def test_position_bijection(n):
    pairs = np.array(all_pairs(n))
    pos = pairs_to_positions(n, pairs[:, 0], pairs[:, 1])
    assert pos.tolist() == list(range(len(pairs)))
    u, v = positions_to_pairs(n, pos)
    assert np.array_equal(np.stack([u, v], 1), pairs)


def test_check_same_order():
    with pytest.raises(DimensionMismatch):
        check_same_order(empty_graph(3), empty_graph(4))


def brute_graphical(d):
    """Search every graph on len(d) vertices for one with degrees d."""
    n = len(d)
    target = sorted(d)
    for g in enumerate_graphs(n):
        if sorted(degrees(g).tolist()) == target:
            return True
    return False


def test_is_graphical_examples():
    assert is_graphical([1, 1, 1, 1])
    assert not is_graphical([1, 1, 1])
    assert not is_graphical([3, 3, 3, 1])
    assert not brute_graphical([3, 3, 3, 1])


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_graphicality_exhaustive(n):
    realizable = {tuple(sorted(degrees(g).tolist())) for g in enumerate_graphs(n)}
    for d in itertools.product(range(n), repeat=n):
        expected = tuple(sorted(d)) in realizable
        assert is_graphical(d) == expected, d
        if expected:
            assert degrees(realize(d)).tolist() == list(d)
        else:
            with pytest.raises(NotGraphical):
                realize(d)


def test_realize_examples():
    assert realize([1, 1, 0]).edge_set() == {(1, 2)}
    path = realize([2, 2, 1, 1])
    assert degrees(path).tolist() == [2, 2, 1, 1]
    assert sorted(degrees(path).tolist()) == sorted(degrees(path_graph(4)).tolist())
    with pytest.raises(NotGraphical):
        realize([1, 1, 1])


@pytest.mark.parametrize("d", [[3, 2, 2, 2, 1], [4, 4, 4, 4, 4, 4], [2, 2, 2, 2, 2, 2, 1, 1]])
def test_realize_deterministic(d):
    assert realize(d) == realize(d)
    assert degrees(realize(d)).tolist() == d


def test_realize_large_regular():
    g = realize([5] * 40)
    assert np.all(degrees(g) == 5)


@pytest.mark.parametrize("n, count", [(1, 1), (2, 2), (3, 8), (4, 64), (5, 1024)])
def test_enumeration_counts(n, count):
    gs = list(enumerate_graphs(n))
    assert len(gs) == count
    assert len(set(gs)) == count
    assert [g.mask for g in gs] == list(range(count))


def test_enumeration_table_matches_stream():
    masks, bits, deg = enumeration_table(4)
    for g, m, b, d in zip(enumerate_graphs(4), masks, bits, deg):
        assert g.mask == m
        assert np.flatnonzero(b).tolist() == g.positions.tolist()
        assert np.array_equal(d, degrees(g))


def test_enumeration_cap():
    with pytest.raises(TooLarge):
        next(enumerate_graphs(8))
    with pytest.raises(TooLarge):
        enumeration_table(8)


def test_graph_validation():
    with pytest.raises(GraphFormatError):
        Graph(3, [(1, 1)])
    with pytest.raises(GraphFormatError):
        Graph(3, [(1, 2), (2, 1)])
    with pytest.raises(GraphFormatError):
        Graph(0)


@settings(max_examples=50)
@given(graphs())
def test_mask_round_trip(g):
    assert Graph.from_mask(g.n, g.mask) == g
    assert hash(Graph.from_mask(g.n, g.mask)) == hash(g)
