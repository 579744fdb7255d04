import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frechet_er.er_model import ErParams
from frechet_er.errors import DegenerateVariance, InvalidParams, LengthMismatch, OutOfRange
from frechet_er.graph import enumerate_graphs, n_pairs
from frechet_er.stein import (EdgeOrder, PairedSample, delta_h, delta_h_prefix,
                              direct_differences, h_value, identity_deviations, paired_sample,
                              sigma2_h, stein_check, sweep, v_statistics, v_statistics_batch)


def brute_h(z, n, p):
    """Wedges as off-diagonal entries of A^2, edges from the matrix."""
    a = np.zeros((n, n), dtype=np.int64)
    for s, (i, j) in enumerate(itertools.combinations(range(n), 2)):
        a[i, j] = a[j, i] = z[s]
    a2 = a @ a
    wedges = int(a2.sum() - np.trace(a2))
    return wedges / 2 - 2 * (n - 2) * p * (int(a.sum()) // 2)


def replace(z, zp, idx):
    out = np.array(z, copy=True)
    out[idx] = zp[idx]
    return out


@pytest.mark.parametrize("n, s, pair", [(4, 1, (1, 2)), (4, 4, (2, 3)), (4, 6, (3, 4)),
                                        (3, 3, (2, 3))])
def test_edge_index_examples(n, s, pair):
    order = EdgeOrder(n)
    assert order.pair(s) == pair
    assert order.index(*pair) == s


@pytest.mark.parametrize("n", [2, 3, 7, 50])
def test_edge_index_round_trip(n):
    order = EdgeOrder(n)
    listed = list(itertools.combinations(range(1, n + 1), 2))
    assert order.size == len(listed)
    assert [order.pair(s) for s in range(1, order.size + 1)] == listed
    assert all(order.index(*order.pair(s)) == s for s in range(1, order.size + 1))


def test_edge_index_out_of_range():
    order = EdgeOrder(4)
    for s in (0, 7, -1):
        with pytest.raises(OutOfRange):
            order.pair(s)
    with pytest.raises(OutOfRange):
        order.index(2, 2)
    with pytest.raises(OutOfRange):
        order.index(3, 5)


def test_h_examples():
    params = ErParams(3, 0.4)
    assert h_value(np.zeros(3), params) == 0
    assert h_value(np.ones(3), params) == pytest.approx(0.6)
    assert h_value(np.ones(6), ErParams(4, 0.5)) == 0
    with pytest.raises(LengthMismatch):
        h_value(np.ones(4), params)


@settings(max_examples=40)
@given(st.integers(3, 12), st.floats(0.01, 0.99), st.data())
def test_h_matches_matrix_count(n, p, data):
    z = np.array(data.draw(st.lists(st.integers(0, 1), min_size=n_pairs(n),
                                    max_size=n_pairs(n))))
    assert h_value(z, ErParams(n, p)) == pytest.approx(brute_h(z, n, p), abs=1e-9)


def test_delta_hand_example():
    sample = PairedSample(np.zeros(3, np.uint8), np.ones(3, np.uint8), ErParams(3, 0.5))
    assert delta_h(sample, 1) == 1
    assert delta_h_prefix(sample, 1) == 1


def test_paired_sample_validation():
    params = ErParams(4, 0.3)
    with pytest.raises(LengthMismatch):
        PairedSample(np.zeros(5), np.zeros(6), params)
    with pytest.raises(InvalidParams):
        PairedSample(np.full(6, 2), np.zeros(6), params)
    sample = PairedSample(np.zeros(6), np.zeros(6), params)
    with pytest.raises(OutOfRange):
        delta_h(sample, 7)
    with pytest.raises(OutOfRange):
        delta_h_prefix(sample, 0)


@pytest.mark.parametrize("n, p", [(30, 0.3), (20, 0.5), (12, 0.1)])
def test_differences_match_recomputation(n, p):
    params = ErParams(n, p)
    for r in range(3):
        sample = paired_sample(params, 41, r)
        z, zp = sample.z, sample.z_prime
        plain, prefix = sweep(sample)
        big = n_pairs(n)
        for s in range(1, big + 1):
            want = brute_h(z, n, p) - brute_h(replace(z, zp, [s - 1]), n, p)
            hyb = replace(z, zp, list(range(s - 1)))
            want_pre = brute_h(hyb, n, p) - brute_h(replace(hyb, zp, [s - 1]), n, p)
            assert abs(delta_h(sample, s) - want) <= 1e-9
            assert abs(plain[s - 1] - want) <= 1e-9
            assert abs(delta_h_prefix(sample, s) - want_pre) <= 1e-9
            assert abs(prefix[s - 1] - want_pre) <= 1e-9
        assert delta_h_prefix(sample, 1) == delta_h(sample, 1)


@pytest.mark.parametrize("p", [0.1, 0.5])
def test_telescoping(p):
    params = ErParams(30, p)
    for r in range(100):
        sample = paired_sample(params, 7, r)
        plain_dev, prefix_dev, residual = identity_deviations(sample)
        assert plain_dev <= 1e-9 and prefix_dev <= 1e-9 and residual <= 1e-9


def test_equal_copies_give_zero():
    params = ErParams(25, 0.4)
    z = paired_sample(params, 3).z
    sample = PairedSample(z, z.copy(), params)
    assert not sweep(sample)[0].any() and not sweep(sample)[1].any()
    assert v_statistics(sample) == (0.0, 0.0)


def exact_var_h(params):
    n, p = params.n, params.p
    big = n_pairs(n)
    w, h = [], []
    for g in enumerate_graphs(n):
        z = np.zeros(big, np.uint8)
        z[g.positions] = 1
        w.append(p ** g.edge_count * (1 - p) ** (big - g.edge_count))
        h.append(h_value(z, params))
    mu = math.fsum(a * b for a, b in zip(w, h))
    return math.fsum(a * (b - mu) ** 2 for a, b in zip(w, h))


@pytest.mark.parametrize("n, p", [(3, 0.4), (4, 0.3), (5, 0.7), (5, 0.05)])
def test_sigma2_matches_enumeration(n, p):
    params = ErParams(n, p)
    assert sigma2_h(params) == pytest.approx(exact_var_h(params), rel=1e-9)


def test_sigma2_asymptotic_form():
    n, p = 2000, 0.3
    ratio = sigma2_h(ErParams(n, p)) / (n ** 3 * p * p * (1 - p) ** 2 / 2)
    assert abs(ratio - 1) < 0.1


def test_v_statistics_degenerate():
    sample = paired_sample(ErParams(10, 0.3), 1)
    with pytest.raises(DegenerateVariance):
        v_statistics(sample, sigma2=0.0)


def test_v_statistics_batch_matches_single():
    params = ErParams(40, 0.3)
    v, vs = v_statistics_batch(params, 9, 6, first=2)
    for k in range(6):
        one = v_statistics(paired_sample(params, 9, k + 2))
        assert one == pytest.approx((v[k], vs[k]), rel=1e-12, abs=1e-12)


def test_v_statistics_from_direct_differences():
    params = ErParams(30, 0.3)
    sample = paired_sample(params, 5)
    plain, prefix = direct_differences(sample)
    s2 = sigma2_h(params)
    v, vs = v_statistics(sample)
    assert v == pytest.approx(math.fsum(plain * prefix) / (2 * s2), rel=1e-9, abs=1e-12)
    assert vs == pytest.approx(math.fsum(plain * np.abs(prefix)) / s2, rel=1e-9, abs=1e-12)


def test_variance_shrinks_with_n():
    small = v_statistics_batch(ErParams(50, 0.3), 13, 400)
    large = v_statistics_batch(ErParams(200, 0.3), 13, 400)
    assert large[0].var() < small[0].var()
    assert large[1].var() < small[1].var()


def test_stein_check_fields():
    chk = stein_check(ErParams(30, 0.3), 2, replicas=200, identity_samples=3)
    assert chk.max_delta_dev <= 1e-9 and chk.telescoping_residual <= 1e-9
    assert abs(chk.v_mean - 1) < 4 * chk.v_se + 0.05
    assert set(chk.to_dict()) >= {"v_mean", "v_se", "v_star_mean", "v_star_se"}
    with pytest.raises(InvalidParams):
        stein_check(ErParams(30, 0.3), 2, replicas=1)
