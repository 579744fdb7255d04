"""Simple labelled graphs, degree sequences and Laplacians.

Vertices are ``1..n``. Edges are stored once, as ``(u, v)`` with ``u < v``,
sorted lexicographically; that order is also the order of the edge
positions ``0 .. n(n-1)/2 - 1`` used by the samplers and the Stein module.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DimensionMismatch, GraphFormatError, NotGraphical, TooLarge

MAX_ENUM_N = 7


def n_pairs(n: int) -> int:
    return n * (n - 1) // 2


def row_starts(n: int) -> np.ndarray:
    """0-based position of pair ``(i, i+1)`` for each 0-based row ``i``."""
    rows = np.arange(n, dtype=np.int64)
    return rows * (2 * n - rows - 1) // 2


def pairs_to_positions(n: int, u, v) -> np.ndarray:
    """0-based lexicographic positions of 1-indexed pairs ``u < v``."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    return (u - 1) * (2 * n - u) // 2 + (v - u) - 1


def positions_to_pairs(n: int, pos) -> tuple[np.ndarray, np.ndarray]:
    pos = np.asarray(pos, dtype=np.int64)
    starts = row_starts(n)
    rows = np.searchsorted(starts, pos, side="right") - 1
    cols = rows + 1 + (pos - starts[rows])
    return rows + 1, cols + 1


class Graph:
    """Immutable simple undirected graph on vertices ``1..n``."""

    __slots__ = ("_n", "_pos", "_edges", "_deg")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        n = int(n)
        if n < 1:
            raise GraphFormatError(f"vertex count must be >= 1, got {n}")
        arr = np.array([tuple(e) for e in edges], dtype=np.int64).reshape(-1, 2)
        if arr.size:
            if np.any(arr[:, 0] == arr[:, 1]):
                raise GraphFormatError("loops are not allowed")
            if arr.min() < 1 or arr.max() > n:
                raise GraphFormatError(f"vertex out of range 1..{n}")
            arr.sort(axis=1)
        pos = pairs_to_positions(n, arr[:, 0], arr[:, 1])
        uniq = np.unique(pos)
        if uniq.size != pos.size:
            raise GraphFormatError("duplicate edges")
        self._set(n, uniq)

    def _set(self, n, pos):
        pos.setflags(write=False)
        self._n = n
        self._pos = pos
        self._edges = None
        self._deg = None

    @classmethod
    def from_positions(cls, n: int, positions) -> "Graph":
        """Build from sorted, distinct 0-based edge positions (trusted)."""
        g = cls.__new__(cls)
        g._set(int(n), np.array(positions, dtype=np.int64))
        return g

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "Graph":
        """Bit ``s`` of ``mask`` switches on the edge at position ``s``."""
        bits = [s for s in range(n_pairs(n)) if mask >> s & 1]
        return cls.from_positions(n, bits)

    @property
    def n(self) -> int:
        return self._n

    @property
    def positions(self) -> np.ndarray:
        return self._pos

    @property
    def edge_count(self) -> int:
        return int(self._pos.size)

    @property
    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of 1-indexed pairs, lexicographically sorted."""
        if self._edges is None:
            u, v = positions_to_pairs(self._n, self._pos)
            e = np.stack([u, v], axis=1)
            e.setflags(write=False)
            self._edges = e
        return self._edges

    @property
    def mask(self) -> int:
        return sum(1 << int(s) for s in self._pos)

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges}

    def degrees(self) -> np.ndarray:
        if self._deg is None:
            e = self.edges - 1
            d = np.bincount(e.ravel(), minlength=self._n).astype(np.int64)
            d.setflags(write=False)
            self._deg = d
        return self._deg

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._pos, other._pos)

    def __hash__(self):
        return hash((self._n, self._pos.tobytes()))

    def __repr__(self):
        shown = [tuple(int(x) for x in e) for e in self.edges[:6]]
        more = ", ..." if self.edge_count > 6 else ""
        return f"Graph(n={self._n}, edges={shown}{more})"


def empty_graph(n: int) -> Graph:
    return Graph.from_positions(n, [])


def complete_graph(n: int) -> Graph:
    return Graph.from_positions(n, np.arange(n_pairs(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])


def degrees(g: Graph) -> np.ndarray:
    return g.degrees()


def laplacian(g: Graph) -> np.ndarray:
    """Exact integer Laplacian ``D - A``."""
    lap = np.zeros((g.n, g.n), dtype=np.int64)
    e = g.edges - 1
    lap[e[:, 0], e[:, 1]] = -1
    lap[e[:, 1], e[:, 0]] = -1
    lap[np.diag_indices(g.n)] = g.degrees()
    return lap


def adjacency(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=np.int64)
    e = g.edges - 1
    a[e[:, 0], e[:, 1]] = 1
    a[e[:, 1], e[:, 0]] = 1
    return a


def complement(g: Graph) -> Graph:
    keep = np.ones(n_pairs(g.n), dtype=bool)
    keep[g.positions] = False
    return Graph.from_positions(g.n, np.flatnonzero(keep))


def check_same_order(g: Graph, h: Graph) -> None:
    if g.n != h.n:
        raise DimensionMismatch(f"graphs on {g.n} and {h.n} vertices")


def is_graphical(d: Sequence[int]) -> bool:
    """Erdos-Gallai test: even sum and, for the non-increasing rearrangement,
    ``sum_{i<=k} d_i <= k(k-1) + sum_{i>k} min(d_i, k)`` for every ``k``."""
    d = np.sort(np.asarray(d, dtype=np.int64))[::-1]
    if d.size == 0:
        return True
    if d[-1] < 0 or d.sum() % 2:
        return False
    n = d.size
    prefix = np.concatenate([[0], np.cumsum(d)])
    k = np.arange(1, n + 1)
    # number of entries >= k; they form a prefix of the sorted sequence
    at_least_k = np.searchsorted(-d, -k, side="right")
    split = np.maximum(at_least_k, k)
    tail = k * (split - k) + (prefix[-1] - prefix[split])
    return bool(np.all(prefix[1:] <= k * (k - 1) + tail))


def realize(d: Sequence[int]) -> Graph:
    """Deterministic Havel-Hakimi realisation.

    The vertex with the largest residual degree (lowest index on ties) is
    joined to the next-largest residual degrees (lowest index on ties).
    """
    res = np.array(d, dtype=np.int64)
    n = res.size
    if n == 0 or not is_graphical(res):
        raise NotGraphical(f"degree sequence {list(map(int, res))} is not graphical")
    edges = []
    while True:
        active = np.flatnonzero(res > 0)
        if active.size == 0:
            break
        order = active[np.lexsort((active, -res[active]))]
        v = order[0]
        want = res[v]
        targets = order[1 : want + 1]
        if targets.size < want:
            raise NotGraphical("Havel-Hakimi ran out of partners")
        res[v] = 0
        res[targets] -= 1
        lo = np.minimum(targets, v)
        hi = np.maximum(targets, v)
        edges.append(pairs_to_positions(n, lo + 1, hi + 1))
    pos = np.sort(np.concatenate(edges)) if edges else np.empty(0, np.int64)
    return Graph.from_positions(n, pos)


def enumerate_graphs(n: int) -> Iterator[Graph]:
    """Every labelled graph on ``n`` vertices, in edge-subset counter order."""
    if n > MAX_ENUM_N:
        raise TooLarge(f"enumeration capped at n={MAX_ENUM_N}, got {n}")
    if n < 1:
        raise GraphFormatError("n must be >= 1")
    size = n_pairs(n)
    for bits in itertools.product((0, 1), repeat=size):
        # product varies the last factor fastest; reverse so bit s is edge s
        yield Graph.from_positions(n, [s for s, b in enumerate(reversed(bits)) if b])


def enumeration_table(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(masks, edge_bits, degrees)`` for all graphs on ``n`` vertices, in
    ``enumerate_graphs`` order: shapes ``(G,)``, ``(G, N)``, ``(G, n)``."""
    if n > MAX_ENUM_N:
        raise TooLarge(f"enumeration capped at n={MAX_ENUM_N}, got {n}")
    size = n_pairs(n)
    masks = np.arange(1 << size, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(size)) & 1).astype(np.int8)
    u, v = positions_to_pairs(n, np.arange(size))
    incidence = np.zeros((size, n), dtype=np.int64)
    incidence[np.arange(size), u - 1] = 1
    incidence[np.arange(size), v - 1] = 1
    deg = bits.astype(np.int64) @ incidence
    return masks, bits, deg


def format_graph(g: Graph) -> str:
    lines = [f"n {g.n} edges {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GraphFormatError("empty graph file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "n" or head[2] != "edges":
        raise GraphFormatError(f"bad header line: {lines[0]!r}")
    try:
        n, m = int(head[1]), int(head[3])
        pairs = [tuple(int(tok) for tok in ln.split()) for ln in lines[1:]]
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None
    if any(len(pr) != 2 for pr in pairs):
        raise GraphFormatError("each edge line must hold two vertices")
    if len(pairs) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(pairs)}")
    return Graph(n, pairs)


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(g))
