"""Erdos-Renyi sampling and the graph statistics in the expansion of F_n^2.

For a graph ``G`` with degrees ``X_i`` and edge indicators ``I_ij``, and an
``m``-regular reference graph ``R`` with adjacency ``m_ij``:

* ``E_n`` is the edge count and ``W_n = sum_i X_i (X_i - 1)``;
* ``U_n = sum_{i != j} (m - 1 + m_ij) I_ij``;
* ``U~_n = sum_{i != j} (m - np - 1 + m_ij + 2p) I_ij``;

so that ``d_F^2(G, R) = m(m+1)n - 2 U_n + W_n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, rng
from .errors import DimensionMismatch, InvalidParams, NotRegular
from .graph import Graph, check_same_order
from .metric import frobenius_sq_laplacian

INTEGER_TOL = 1e-12


@dataclass(frozen=True)
class ErParams:
    """Vertex count ``n >= 2`` and edge probability ``0 < p < 1``."""

    n: int
    p: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise InvalidParams(f"n must be an integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "p", float(self.p))
        if self.n < 2:
            raise InvalidParams(f"n must be >= 2, got {self.n}")
        if not (0.0 < self.p < 1.0):
            raise InvalidParams(f"p must lie strictly inside (0, 1), got {self.p}")

    @property
    def np_(self) -> float:
        return self.n * self.p

    @property
    def np_is_integer(self) -> bool:
        x = self.np_
        return abs(x - round(x)) < INTEGER_TOL

    @property
    def m(self) -> int:
        """``floor(np)``, snapping to the nearest integer inside the tolerance."""
        x = self.np_
        return int(round(x)) if self.np_is_integer else math.floor(x)

    @property
    def frac_np(self) -> float:
        return 0.0 if self.np_is_integer else self.np_ - self.m

    @property
    def q(self) -> float:
        return 1.0 - self.p


def sample(params: ErParams, seed: int, replica: int = 0) -> Graph:
    """One draw of ``G(n, p)``; replica ``r`` reads random stream ``r``."""
    key = rng.derive_key(seed, replica)
    return Graph.from_positions(params.n, kernels.edge_positions(params.n, params.p, key))


@dataclass(frozen=True)
class GraphStats:
    edge_count: int
    wedge_double_count: int
    u_n: int
    u_tilde: float
    common_edges: int


def wedge_double_count(g: Graph) -> int:
    x = g.degrees()
    return int(x @ (x - 1))


def regular_degree(g: Graph) -> int | None:
    d = g.degrees()
    if d.size and np.all(d == d[0]):
        return int(d[0])
    return None


def stats(g: Graph, mean_graph: Graph, params: ErParams) -> GraphStats:
    """Statistics of ``g`` relative to an ``floor(np)``-regular ``mean_graph``."""
    check_same_order(g, mean_graph)
    if g.n != params.n:
        raise DimensionMismatch(f"graph has {g.n} vertices, params say {params.n}")
    m = params.m
    if regular_degree(mean_graph) != m:
        raise NotRegular(f"reference graph is not {m}-regular")
    coef_off = m - params.np_ - 1 + 2 * params.p
    if params.p <= 0.5:
        # 0 <= np - m < 1 keeps both coefficients (m_ij = 0, 1) inside [-2, 2]
        assert max(abs(coef_off), abs(coef_off + 1)) <= 2 + 1e-12
    e = g.edge_count
    common = int(np.intersect1d(g.positions, mean_graph.positions, assume_unique=True).size)
    # each undirected edge appears twice in the ordered double sums
    u_n = 2 * (m - 1) * e + 2 * common
    u_tilde = 2 * coef_off * e + 2 * common
    return GraphStats(e, wedge_double_count(g), u_n, u_tilde, common)


def fn_squared(g: Graph, mean_graph: Graph) -> int:
    return frobenius_sq_laplacian(g, mean_graph)


def fn2_samples(params: ErParams, mean_graph: Graph, seed: int, replicas: int,
                first: int = 0) -> np.ndarray:
    """``d_F^2`` from replicas ``first .. first + replicas - 1`` to ``mean_graph``."""
    if mean_graph.n != params.n:
        raise DimensionMismatch(f"mean graph has {mean_graph.n} vertices, params say {params.n}")
    return kernels.fn2_batch(
        params.n, params.p, rng.normalize_seed(seed),
        mean_graph.degrees(), mean_graph.positions, first, replicas,
    )
