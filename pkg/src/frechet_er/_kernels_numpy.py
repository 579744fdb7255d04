"""Pure-numpy fallback for the kernels in ``_kernels_numba``.

Same streams, same lexicographic edge positions, same integer outputs.
Vectorised per replica; replicas are looped in Python.
"""

import math

import numpy as np

from . import rng


def edge_positions(n, p, key):
    n_pairs = n * (n - 1) // 2
    log1mp = math.log1p(-p)
    expected = n_pairs * p
    chunk = int(min(n_pairs + 1, expected + 6.0 * math.sqrt(expected) + 64))
    parts = []
    cur = -1
    k = 1
    while True:
        u = rng.uniforms(key, k, chunk)
        g = np.floor(np.log(u) / log1mp)
        stop = np.flatnonzero(g >= n_pairs)
        if stop.size:
            g = g[: stop[0]]
        pos = cur + np.cumsum(g.astype(np.int64) + 1)
        beyond = np.flatnonzero(pos >= n_pairs)
        if beyond.size:
            parts.append(pos[: beyond[0]])
            break
        parts.append(pos)
        if stop.size:
            break
        if pos.size:
            cur = int(pos[-1])
        k += chunk
    return np.concatenate(parts) if parts else np.empty(0, np.int64)


def _row_starts(n):
    rows = np.arange(n, dtype=np.int64)
    return rows * (2 * n - rows - 1) // 2


def _fn2_from_positions(n, pos, ref_deg, ref_pos):
    starts = _row_starts(n)
    rows = np.searchsorted(starts, pos, side="right") - 1
    cols = rows + 1 + (pos - starts[rows])
    deg = np.bincount(rows, minlength=n) + np.bincount(cols, minlength=n)
    overlap = 0
    if ref_pos.size:
        idx = np.minimum(np.searchsorted(ref_pos, pos), ref_pos.size - 1)
        overlap = int(np.count_nonzero(ref_pos[idx] == pos))
    diff = deg.astype(np.int64) - ref_deg
    return int(diff @ diff) + 2 * (pos.size + ref_pos.size - 2 * overlap)


def fn2_batch(n, p, seed, ref_deg, ref_pos, first, count):
    out = np.empty(count, np.int64)
    for r in range(count):
        key = rng.derive_key(int(seed), first + r)
        out[r] = _fn2_from_positions(n, edge_positions(n, p, key), ref_deg, ref_pos)
    return out


def stein_terms(n, z, zp):
    iu, ju = np.triu_indices(n, 1)
    z = z.astype(np.int64)
    d = z - zp.astype(np.int64)
    x = np.bincount(iu, weights=z, minlength=n) + np.bincount(ju, weights=z, minlength=n)
    x = x.astype(np.int64)
    upper = np.zeros((n, n), np.int64)
    upper[iu, ju] = d
    # pairs of the form (k, i), k < i, all precede (i, j)
    into = upper.sum(axis=0)
    along_row = np.cumsum(upper, axis=1)
    down_col = np.cumsum(upper, axis=0)
    y_i = x[iu] - into[iu] - along_row[iu, ju - 1]
    y_j = x[ju] - np.where(iu > 0, down_col[np.maximum(iu - 1, 0), ju], 0)
    a = x[iu] + x[ju] - 2 * z
    b = y_i + y_j - 2 * z
    return d, a, b


def _stein_sums(n, c, z, zp):
    d, a, b = stein_terms(n, z, zp)
    nz = d != 0
    d, a, b = d[nz], a[nz], b[nz]
    e = d * np.sign(b - c).astype(np.int64)
    ab = a * b
    apb = a + b
    return np.array(
        [ab.sum(), apb.sum(), d.size, (e * ab).sum(), (e * apb).sum(), e.sum()],
        dtype=np.int64,
    )


def stein_batch(n, p, seed, first, count):
    n_pairs = n * (n - 1) // 2
    c = 2.0 * p * (n - 2)
    out = np.empty((count, 6), np.int64)
    for r in range(count):
        stream = 2 * (first + r)
        z = np.zeros(n_pairs, np.uint8)
        zp = np.zeros(n_pairs, np.uint8)
        z[edge_positions(n, p, rng.derive_key(int(seed), stream))] = 1
        zp[edge_positions(n, p, rng.derive_key(int(seed), stream + 1))] = 1
        out[r] = _stein_sums(n, c, z, zp)
    return out
