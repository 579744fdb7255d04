import math

import pytest

from frechet_er.er_model import ErParams
from frechet_er.errors import TooLarge
from frechet_er.frechet import construct_mean, is_frechet_mean
from frechet_er.graph import Graph, complement, cycle_graph, empty_graph, enumerate_graphs
from frechet_er.metric import frobenius_sq_laplacian
from frechet_er.oracle import (check_cell, exact_fn2_distribution, exact_fn2_moments,
                               exact_frechet_minimizers, frechet_values_direct,
                               oracle_sweep, probability_total)

MATCHING4 = Graph(4, [(1, 2), (3, 4)])
TWO_TRIANGLES = Graph(6, [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)])


def loop_moments(params, mean):
    """Plain loop over every graph, one weight per graph."""
    n, p = params.n, params.p
    big = n * (n - 1) // 2
    w, x = [], []
    for g in enumerate_graphs(n):
        w.append(p ** g.edge_count * (1 - p) ** (big - g.edge_count))
        x.append(frobenius_sq_laplacian(g, mean))
    mu = math.fsum(a * b for a, b in zip(w, x))
    return mu, math.fsum(a * (b - mu) ** 2 for a, b in zip(w, x))


def test_moment_examples():
    params = ErParams(4, 0.3)
    mu, var = loop_moments(params, MATCHING4)
    assert (mu, var) == pytest.approx((7.76, 8.0304), rel=1e-12)
    assert exact_fn2_moments(params, MATCHING4) == pytest.approx((7.76, 8.0304), rel=1e-12)


@pytest.mark.parametrize("n, p, mean", [
    (3, 0.4, Graph(3, [(1, 2)])),
    (5, 0.45, cycle_graph(5)),
    (4, 0.9, complement(MATCHING4)),
])
def test_fast_moments_match_loop(n, p, mean):
    params = ErParams(n, p)
    assert exact_fn2_moments(params, mean) == pytest.approx(loop_moments(params, mean), rel=1e-12)


@pytest.mark.parametrize("n, p, mean", [(4, 0.3, MATCHING4), (5, 0.2, cycle_graph(5)),
                                        (3, 0.4, Graph(3, [(1, 2)]))])
def test_complement_symmetry(n, p, mean):
    a = exact_fn2_moments(ErParams(n, p), mean)
    b = exact_fn2_moments(ErParams(n, 1 - p), complement(mean))
    assert a == pytest.approx(b, rel=1e-12)


def loop_distribution(params, mean):
    n, p = params.n, params.p
    big = n * (n - 1) // 2
    out = {}
    for g in enumerate_graphs(n):
        d2 = frobenius_sq_laplacian(g, mean)
        out[d2] = out.get(d2, 0.0) + p ** g.edge_count * (1 - p) ** (big - g.edge_count)
    return out


def test_mean_graph_invariance_n6():
    params = ErParams(6, 0.4)
    hexagon = cycle_graph(6)
    assert is_frechet_mean(hexagon, params) and is_frechet_mean(TWO_TRIANGLES, params)
    a = exact_fn2_moments(params, hexagon)
    b = exact_fn2_moments(params, TWO_TRIANGLES)
    assert a == pytest.approx(b, rel=1e-9)
    assert a == pytest.approx((21.6, 29.952), rel=1e-12)


def test_law_depends_on_mean_graph_n6():
    # only the first two moments are shared; the finite-n laws differ
    params = ErParams(6, 0.4)
    da = exact_fn2_distribution(params, cycle_graph(6))
    db = exact_fn2_distribution(params, TWO_TRIANGLES)
    for mean, dist in ((cycle_graph(6), da), (TWO_TRIANGLES, db)):
        slow = loop_distribution(params, mean)
        assert slow.keys() == dist.keys()
        assert all(dist[k] == pytest.approx(slow[k], rel=1e-9) for k in slow)
    tv = 0.5 * sum(abs(da.get(k, 0.0) - db.get(k, 0.0)) for k in da.keys() | db.keys())
    assert tv == pytest.approx(0.023011487907840005, rel=1e-9)


@pytest.mark.parametrize("n, p, count, value", [
    (3, 0.4, 3, 4.96),
    (4, 0.3, 3, None),
    (2, 0.3, 1, None),
])
def test_minimizer_examples(n, p, count, value):
    report = exact_frechet_minimizers(ErParams(n, p))
    assert len(report.minimizers) == count
    if value is not None:
        assert report.min_value == pytest.approx(value, rel=1e-12)
    if n == 3:
        assert all(g.edge_count == 1 for g in report.minimizers)
    if n == 4:
        assert all(g.degrees().tolist() == [1, 1, 1, 1] for g in report.minimizers)
    if n == 2:
        assert report.minimizers == [empty_graph(2)]


def test_minimizers_n6_closed_form_path():
    report = exact_frechet_minimizers(ErParams(6, 0.4))
    assert TWO_TRIANGLES in report.minimizers and cycle_graph(6) in report.minimizers
    # 2-regular labelled graphs on six vertices: 60 hexagons + 10 triangle pairs
    assert len(report.minimizers) == 70


@pytest.mark.parametrize("n, p", [(3, 0.4), (4, 0.15)])
def test_direct_values_match_loop(n, p):
    params = ErParams(n, p)
    vals = frechet_values_direct(params)
    big = n * (n - 1) // 2
    gs = list(enumerate_graphs(n))
    for g, v in zip(gs, vals):
        expect = math.fsum(p ** h.edge_count * (1 - p) ** (big - h.edge_count)
                           * frobenius_sq_laplacian(g, h) for h in gs)
        assert v == pytest.approx(expect, rel=1e-12)
    if n == 3:
        assert vals[[0, 1, 7]].tolist() == pytest.approx([5.76, 4.96, 9.36], rel=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_probabilities_sum_to_one(n):
    for p in (0.05, 0.5, 0.95):
        assert abs(probability_total(ErParams(n, p)) - 1) < 1e-12


def test_limits():
    with pytest.raises(TooLarge):
        exact_frechet_minimizers(ErParams(7, 0.3))
    with pytest.raises(TooLarge):
        exact_fn2_moments(ErParams(7, 0.3), construct_mean(ErParams(7, 0.3)))
    with pytest.raises(TooLarge):
        oracle_sweep(7, [0.5])


def test_check_cell_fields():
    cell = check_cell(4, 0.3)
    assert cell["passed"] and cell["mean_set_match"]
    assert cell["mean_rel_dev"] < 1e-12
    cell = check_cell(4, 0.5)
    assert cell["passed"] and "mean_rel_dev" not in cell
