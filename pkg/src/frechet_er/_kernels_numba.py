"""numba implementations of the hot loops.

Must stay bit-for-bit equivalent to ``_kernels_numpy``; see ``rng`` for
the stream layout. Edges are visited in lexicographic order with 0-based
positions ``0 .. N-1``; inclusion uses geometric skipping, one uniform per
included edge (plus one terminal draw).
"""

import math

import numpy as np
from numba import njit, prange

_U = np.uint64
_GAMMA = _U(0x9E3779B97F4A7C15)
_MIX1 = _U(0xBF58476D1CE4E5B9)
_MIX2 = _U(0x94D049BB133111EB)
_INV_2_53 = 1.0 / 9007199254740992.0


@njit(inline="always", cache=True)
def _mix(z):
    z = (z ^ (z >> _U(30))) * _MIX1
    z = (z ^ (z >> _U(27))) * _MIX2
    return z ^ (z >> _U(31))


@njit(inline="always", cache=True)
def _key(seed, stream):
    return _mix(seed ^ _mix((_U(stream) + _U(1)) * _GAMMA))


@njit(inline="always", cache=True)
def _gap(key, k, log1mp):
    x = _mix(key + k * _GAMMA)
    u = (float(x >> _U(11)) + 1.0) * _INV_2_53
    return math.floor(math.log(u) / log1mp)


@njit(cache=True)
def _fill_indicators(n_pairs, log1mp, key, z):
    cur = -1
    k = _U(0)
    while True:
        k += _U(1)
        g = _gap(key, k, log1mp)
        if g >= n_pairs:
            break
        cur += int(g) + 1
        if cur >= n_pairs:
            break
        z[cur] = 1


@njit(cache=True)
def edge_positions(n, p, key):
    n_pairs = n * (n - 1) // 2
    log1mp = math.log1p(-p)
    cap = min(n_pairs, int(n_pairs * p * 1.1) + 64)
    out = np.empty(max(cap, 1), np.int64)
    cnt = 0
    cur = -1
    k = _U(0)
    while True:
        k += _U(1)
        g = _gap(key, k, log1mp)
        if g >= n_pairs:
            break
        cur += int(g) + 1
        if cur >= n_pairs:
            break
        if cnt == out.size:
            grown = np.empty(2 * out.size, np.int64)
            grown[:cnt] = out[:cnt]
            out = grown
        out[cnt] = cur
        cnt += 1
    return out[:cnt].copy()


@njit(cache=True)
def _fn2_one(n, log1mp, key, ref_deg, ref_pos, deg):
    n_pairs = n * (n - 1) // 2
    for a in range(n):
        deg[a] = 0
    n_ref = ref_pos.size
    cur = -1
    row = 0
    row_start = 0
    row_end = n - 1
    q = 0
    edges = 0
    overlap = 0
    k = _U(0)
    while True:
        k += _U(1)
        g = _gap(key, k, log1mp)
        if g >= n_pairs:
            break
        cur += int(g) + 1
        if cur >= n_pairs:
            break
        while cur >= row_end:
            row += 1
            row_start = row_end
            row_end = row_start + (n - 1 - row)
        col = row + 1 + (cur - row_start)
        deg[row] += 1
        deg[col] += 1
        edges += 1
        while q < n_ref and ref_pos[q] < cur:
            q += 1
        if q < n_ref and ref_pos[q] == cur:
            overlap += 1
    total = 0
    for a in range(n):
        diff = deg[a] - ref_deg[a]
        total += diff * diff
    return total + 2 * (edges + n_ref - 2 * overlap)


@njit(parallel=True, cache=True)
def fn2_batch(n, p, seed, ref_deg, ref_pos, first, count):
    out = np.empty(count, np.int64)
    log1mp = math.log1p(-p)
    for r in prange(count):
        deg = np.empty(n, np.int64)
        out[r] = _fn2_one(n, log1mp, _key(seed, first + r), ref_deg, ref_pos, deg)
    return out


@njit(cache=True)
def stein_terms(n, z, zp):
    """Per-pair integers ``d, a, b`` with ``Delta_s h = d (a - c)`` and
    ``Delta_s h(Z^{A_s}) = d (b - c)`` for ``c = 2p(n-2)``."""
    n_pairs = z.size
    x = np.zeros(n, np.int64)
    s = 0
    for i in range(n):
        for j in range(i + 1, n):
            if z[s]:
                x[i] += 1
                x[j] += 1
            s += 1
    y = x.copy()
    d = np.empty(n_pairs, np.int64)
    a = np.empty(n_pairs, np.int64)
    b = np.empty(n_pairs, np.int64)
    s = 0
    for i in range(n):
        for j in range(i + 1, n):
            zs = np.int64(z[s])
            ds = zs - np.int64(zp[s])
            d[s] = ds
            a[s] = x[i] + x[j] - 2 * zs
            b[s] = y[i] + y[j] - 2 * zs
            if ds != 0:
                y[i] -= ds
                y[j] -= ds
            s += 1
    return d, a, b


@njit(cache=True)
def _stein_sums(n, c, z, zp, out):
    d, a, b = stein_terms(n, z, zp)
    s_ab = 0
    s_apb = 0
    s_one = 0
    t_ab = 0
    t_apb = 0
    t_one = 0
    for s in range(d.size):
        ds = d[s]
        if ds == 0:
            continue
        s_ab += a[s] * b[s]
        s_apb += a[s] + b[s]
        s_one += 1
        if b[s] > c:
            e = ds
        elif b[s] < c:
            e = -ds
        else:
            e = 0
        t_ab += e * a[s] * b[s]
        t_apb += e * (a[s] + b[s])
        t_one += e
    out[0] = s_ab
    out[1] = s_apb
    out[2] = s_one
    out[3] = t_ab
    out[4] = t_apb
    out[5] = t_one


@njit(parallel=True, cache=True)
def stein_batch(n, p, seed, first, count):
    n_pairs = n * (n - 1) // 2
    log1mp = math.log1p(-p)
    c = 2.0 * p * (n - 2)
    out = np.empty((count, 6), np.int64)
    for r in prange(count):
        z = np.zeros(n_pairs, np.uint8)
        zp = np.zeros(n_pairs, np.uint8)
        stream = 2 * (first + r)
        _fill_indicators(n_pairs, log1mp, _key(seed, stream), z)
        _fill_indicators(n_pairs, log1mp, _key(seed, stream + 1), zp)
        _stein_sums(n, c, z, zp, out[r])
    return out
