"""Exhaustive ground truth over all labelled graphs on a few vertices.

Probabilities are ``p^k (1-p)^(N-k)`` with ``k`` the edge count, so any
expectation over ``G(n, p)`` is a sum over ``k = 0..N`` of that weight times an
integer total over the graphs with ``k`` edges. The integer totals are
computed once per ``n`` and reused for every ``p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .er_model import ErParams
from .errors import DimensionMismatch, OracleMismatch, TooLarge, UnsupportedCase
from .frechet import (construct_mean, degrees_admissible, frechet_value_from_degrees,
                      mean_set_spec)
from .graph import Graph, enumeration_table, n_pairs
from .moments import check_moment_case, moments

MAX_DIRECT_N = 5
MAX_MINIMIZER_N = 6
MAX_MOMENT_N = 6
MIN_TOL = 1e-9


def edge_count_weights(params: ErParams) -> np.ndarray:
    """``p^k (1-p)^(N-k)`` for ``k = 0..N`` (one graph's probability)."""
    big_n = n_pairs(params.n)
    k = np.arange(big_n + 1)
    return np.exp(k * math.log(params.p) + (big_n - k) * math.log1p(-params.p))


@lru_cache(maxsize=8)
def _table(n: int):
    masks, bits, deg = enumeration_table(n)
    return masks, bits.astype(np.int64), deg, bits.sum(axis=1).astype(np.int64)


@lru_cache(maxsize=4)
def pairwise_totals(n: int) -> np.ndarray:
    """``S[g, k] = sum of d_F^2(g, g')`` over graphs ``g'`` with ``k`` edges."""
    if n > MAX_DIRECT_N:
        raise TooLarge(f"direct expectation limited to n <= {MAX_DIRECT_N}")
    _, bits, deg, ecount = _table(n)
    sq = (deg * deg).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2 * deg @ deg.T
    d2 += 2 * (ecount[:, None] + ecount[None, :] - 2 * bits @ bits.T)
    onehot = np.zeros((ecount.size, n_pairs(n) + 1), dtype=np.int64)
    onehot[np.arange(ecount.size), ecount] = 1
    return d2 @ onehot


def frechet_values_direct(params: ErParams) -> np.ndarray:
    """``E[d_F^2(g, G_{n,p})]`` by enumeration, for every graph ``g``."""
    totals = pairwise_totals(params.n)
    w = edge_count_weights(params)
    return np.array([math.fsum(row) for row in totals * w])


def frechet_values_closed_all(params: ErParams) -> np.ndarray:
    _, _, deg, _ = _table(params.n)
    return np.array([frechet_value_from_degrees(d, params) for d in deg])


def probability_total(params: ErParams) -> float:
    counts = np.bincount(_table(params.n)[3], minlength=n_pairs(params.n) + 1)
    return math.fsum(counts * edge_count_weights(params))


def _fn2_all(n: int, mean_graph: Graph) -> np.ndarray:
    _, bits, deg, ecount = _table(n)
    rbits = np.zeros(n_pairs(n), dtype=np.int64)
    rbits[mean_graph.positions] = 1
    diff = deg - mean_graph.degrees()
    return (diff * diff).sum(axis=1) + 2 * (ecount + mean_graph.edge_count - 2 * bits @ rbits)


def exact_fn2_distribution(params: ErParams, mean_graph: Graph) -> dict[int, float]:
    """Exact law of ``d_F^2(G_{n,p}, mean_graph)`` as ``{value: probability}``."""
    _check_moment_n(params, mean_graph)
    x = _fn2_all(params.n, mean_graph)
    w = edge_count_weights(params)[_table(params.n)[3]]
    return {int(v): math.fsum(w[x == v]) for v in np.unique(x)}


def exact_fn2_moments(params: ErParams, mean_graph: Graph) -> tuple[float, float]:
    """Exact mean and variance of ``d_F^2(G_{n,p}, mean_graph)``."""
    _check_moment_n(params, mean_graph)
    x = _fn2_all(params.n, mean_graph).astype(np.float64)
    w = edge_count_weights(params)[_table(params.n)[3]]
    mean = math.fsum(w * x)
    return mean, math.fsum(w * (x - mean) ** 2)


def _check_moment_n(params, mean_graph):
    if params.n > MAX_MOMENT_N:
        raise TooLarge(f"exact moments limited to n <= {MAX_MOMENT_N}")
    if mean_graph.n != params.n:
        raise DimensionMismatch(f"mean graph has {mean_graph.n} vertices, params say {params.n}")


@dataclass
class OracleReport:
    n: int
    p: float
    minimizers: list[Graph]
    min_value: float
    exact_mean_fn2: float | None = None
    exact_var_fn2: float | None = None
    extras: dict = field(default_factory=dict)


def exact_frechet_minimizers(params: ErParams) -> OracleReport:
    """All minimisers of the Frechet function.

    Direct expectation for ``n <= 5``; for ``n = 6`` the closed form, after
    confirming it against the direct expectation at ``n = 5``.
    """
    n = params.n
    if n > MAX_MINIMIZER_N:
        raise TooLarge(f"minimiser search limited to n <= {MAX_MINIMIZER_N}")
    if n <= MAX_DIRECT_N:
        f = frechet_values_direct(params)
    else:
        probe = ErParams(MAX_DIRECT_N, params.p)
        dev = _max_rel_dev(frechet_values_closed_all(probe), frechet_values_direct(probe))
        if dev > MIN_TOL:
            raise OracleMismatch(f"closed form off by {dev:.3g} at n={MAX_DIRECT_N}")
        f = frechet_values_closed_all(params)
    best = float(f.min())
    masks = _table(n)[0][f <= best + MIN_TOL]
    report = OracleReport(n, params.p, [Graph.from_mask(n, int(s)) for s in masks], best)
    mean = construct_mean(params)
    report.exact_mean_fn2, report.exact_var_fn2 = exact_fn2_moments(params, mean)
    return report


def _max_rel_dev(a, b) -> float:
    a, b = np.asarray(a, float), np.asarray(b, float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def check_cell(n: int, p: float) -> dict:
    """Every exhaustive check at one ``(n, p)``; ``passed`` summarises them."""
    params = ErParams(n, p)
    spec = mean_set_spec(params)
    report = exact_frechet_minimizers(params)
    _, _, deg, _ = _table(n)
    predicted = {int(s) for s, d in zip(_table(n)[0], deg) if degrees_admissible(d, spec)}
    found = {g.mask for g in report.minimizers}
    cell = {
        "n": n,
        "p": p,
        "case": spec.case_tag,
        "minimizers": len(found),
        "mean_set_match": predicted == found,
        "prob_total_dev": abs(probability_total(params) - 1.0),
    }
    ok = cell["mean_set_match"] and cell["prob_total_dev"] < 1e-12
    if n <= MAX_DIRECT_N:
        dev = _max_rel_dev(frechet_values_closed_all(params), frechet_values_direct(params))
        cell["closed_form_rel_dev"] = dev
        ok = ok and dev <= MIN_TOL
    try:
        check_moment_case(params)
    except UnsupportedCase:
        pass
    else:
        rep = moments(params)
        cell["mean_rel_dev"] = abs(rep.mean_fn2 - report.exact_mean_fn2) / report.exact_mean_fn2
        cell["var_rel_dev"] = abs(rep.var_fn2 - report.exact_var_fn2) / report.exact_var_fn2
        ok = ok and cell["mean_rel_dev"] <= MIN_TOL and cell["var_rel_dev"] <= MIN_TOL
    cell["passed"] = bool(ok)
    return cell


def oracle_sweep(max_n: int, p_grid) -> list[dict]:
    if max_n > MAX_MINIMIZER_N:
        raise TooLarge(f"oracle sweep limited to n <= {MAX_MINIMIZER_N}")
    return [check_cell(n, float(p)) for n in range(2, max_n + 1) for p in p_grid]
