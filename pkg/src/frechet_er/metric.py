"""Squared Frobenius distances between graphs, and the Hamming distance.

Everything is computed from degree vectors and edge sets; no ``n x n``
matrix is formed. Because ``D - D'`` is diagonal and ``A - A'`` has zero
diagonal, the Laplacian distance splits into a degree part plus the
adjacency part, and the adjacency part is twice the size of the symmetric
difference of the edge sets.
"""

import numpy as np

from .graph import Graph, check_same_order


def _common_edges(g: Graph, h: Graph) -> int:
    return int(np.intersect1d(g.positions, h.positions, assume_unique=True).size)


def hamming(g: Graph, h: Graph) -> int:
    """Number of vertex pairs adjacent in exactly one of the graphs."""
    check_same_order(g, h)
    return g.edge_count + h.edge_count - 2 * _common_edges(g, h)


def frobenius_sq_adjacency(g: Graph, h: Graph) -> int:
    return 2 * hamming(g, h)


def degree_gap_sq(g: Graph, h: Graph) -> int:
    check_same_order(g, h)
    diff = g.degrees() - h.degrees()
    return int(diff @ diff)


def frobenius_sq_laplacian(g: Graph, h: Graph) -> int:
    """``||L_g - L_h||_F^2``; an integer, zero only when ``g == h``."""
    return degree_gap_sq(g, h) + frobenius_sq_adjacency(g, h)


def frobenius_laplacian(g: Graph, h: Graph) -> float:
    return float(np.sqrt(frobenius_sq_laplacian(g, h)))
