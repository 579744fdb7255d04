"""Discrete differences of the wedge/edge functional used in the normal
approximation of F_n^2, evaluated on concrete paired samples.

With edge indicators ``Z`` (``N = n(n-1)/2`` pairs in lexicographic order),
degrees ``X_i`` and edge count ``E_n``,

    h(Z) = W_n / 2 - 2(n - 2) p E_n,    W_n = sum_i X_i (X_i - 1).

For an independent copy ``Z'`` and pair ``s = (i, j)``, replacing coordinate
``s`` changes ``h`` by

    Delta_s h(Z) = (I_ij - I'_ij) (X_i + X_j - 2 I_ij - 2p(n - 2)),

and the same holds on the hybrid vector ``Z^{A_s}`` (coordinates before
``s`` taken from ``Z'``) with its own degrees. The sums

    V_n  = sum_s Delta_s h(Z) Delta_s h(Z^{A_s}) / (2 sigma^2)
    V_n* = sum_s Delta_s h(Z) |Delta_s h(Z^{A_s})| / sigma^2

have means exactly 1 and 0, where ``sigma^2 = Var(h)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels, rng
from .er_model import ErParams
from .errors import DegenerateVariance, InvalidParams, LengthMismatch, OutOfRange
from .graph import n_pairs


@dataclass(frozen=True)
class EdgeOrder:
    """Bijection ``s <-> (i, j)`` between ``1..N`` and pairs ``i < j``."""

    n: int

    @property
    def size(self) -> int:
        return n_pairs(self.n)

    def pair(self, s: int) -> tuple[int, int]:
        n = self.n
        if not 1 <= s <= self.size:
            raise OutOfRange(f"s must lie in 1..{self.size}, got {s}")
        # smallest t with s <= (2n - t - 1) t / 2
        disc = (2 * n - 1) ** 2 - 8 * s
        t = max(1, math.ceil(((2 * n - 1) - math.isqrt(disc)) / 2) - 1)
        while (2 * n - t - 1) * t // 2 < s:
            t += 1
        i = t
        j = s + i - (2 * n - i) * (i - 1) // 2
        return i, j

    def index(self, i: int, j: int) -> int:
        n = self.n
        if not 1 <= i < j <= n:
            raise OutOfRange(f"need 1 <= i < j <= {n}, got ({i}, {j})")
        return (i - 1) * (2 * n - i) // 2 + (j - i)


@lru_cache(maxsize=16)
def _pair_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    iu, ju = np.triu_indices(n, 1)
    return iu.astype(np.int64), ju.astype(np.int64)


def edge_vector_degrees(z, n: int) -> np.ndarray:
    iu, ju = _pair_arrays(n)
    z = np.asarray(z, dtype=np.int64)
    return np.bincount(iu, weights=z, minlength=n).astype(np.int64) + np.bincount(
        ju, weights=z, minlength=n
    ).astype(np.int64)


@dataclass(frozen=True)
class PairedSample:
    z: np.ndarray
    z_prime: np.ndarray
    params: ErParams

    def __post_init__(self):
        big_n = n_pairs(self.params.n)
        for name in ("z", "z_prime"):
            v = np.asarray(getattr(self, name), dtype=np.uint8)
            if v.shape != (big_n,):
                raise LengthMismatch(f"{name} must have length {big_n}, got {v.shape}")
            if np.any(v > 1):
                raise InvalidParams(f"{name} entries must be 0 or 1")
            v.setflags(write=False)
            object.__setattr__(self, name, v)

    @property
    def order(self) -> EdgeOrder:
        return EdgeOrder(self.params.n)


def _indicator(n: int, p: float, key: int) -> np.ndarray:
    z = np.zeros(n_pairs(n), dtype=np.uint8)
    z[kernels.edge_positions(n, p, key)] = 1
    return z


def paired_sample(params: ErParams, seed: int, replica: int = 0) -> PairedSample:
    """Replica ``r`` draws ``Z`` from stream ``2r`` and ``Z'`` from ``2r + 1``."""
    n, p = params.n, params.p
    z = _indicator(n, p, rng.derive_key(seed, 2 * replica))
    zp = _indicator(n, p, rng.derive_key(seed, 2 * replica + 1))
    return PairedSample(z, zp, params)


def _h_from_degrees(x: np.ndarray, params: ErParams) -> float:
    w = int(x @ (x - 1))
    e = int(x.sum()) // 2
    return w / 2 - 2 * (params.n - 2) * params.p * e


def h_value(z, params: ErParams) -> float:
    """Half the ordered wedge count minus ``2(n-2)p`` times the edge count."""
    z = np.asarray(z)
    if z.shape != (n_pairs(params.n),):
        raise LengthMismatch(f"edge vector must have length {n_pairs(params.n)}, got {z.shape}")
    return _h_from_degrees(edge_vector_degrees(z, params.n), params)


def _centre(params: ErParams) -> float:
    return 2.0 * params.p * (params.n - 2)


def delta_h(sample: PairedSample, s: int) -> float:
    """``h(Z) - h(Z with coordinate s taken from Z')``."""
    i, j = sample.order.pair(s)
    zs = int(sample.z[s - 1])
    d = zs - int(sample.z_prime[s - 1])
    if d == 0:
        return 0.0
    x = edge_vector_degrees(sample.z, sample.params.n)
    return d * (int(x[i - 1] + x[j - 1]) - 2 * zs - _centre(sample.params))


def delta_h_prefix(sample: PairedSample, s: int) -> float:
    """``Delta_s h`` on the hybrid vector whose coordinates ``1..s-1`` come from ``Z'``."""
    i, j = sample.order.pair(s)
    zs = int(sample.z[s - 1])
    d = zs - int(sample.z_prime[s - 1])
    if d == 0:
        return 0.0
    hybrid = np.concatenate([sample.z_prime[: s - 1], sample.z[s - 1:]])
    y = edge_vector_degrees(hybrid, sample.params.n)
    return d * (int(y[i - 1] + y[j - 1]) - 2 * zs - _centre(sample.params))


def sweep(sample: PairedSample) -> tuple[np.ndarray, np.ndarray]:
    """``Delta_s h(Z)`` and ``Delta_s h(Z^{A_s})`` for every ``s``, in O(N)
    after the degree pass."""
    d, a, b = kernels.stein_terms(sample.params.n, sample.z, sample.z_prime)
    c = _centre(sample.params)
    return d * (a - c), d * (b - c)


def direct_differences(sample: PairedSample) -> tuple[np.ndarray, np.ndarray]:
    """Both difference sequences by recomputing ``h`` from full degree
    vectors at every step; an oracle for ``sweep``."""
    params = sample.params
    n = params.n
    iu, ju = _pair_arrays(n)
    z = sample.z.astype(np.int64)
    zp = sample.z_prime.astype(np.int64)
    x = edge_vector_degrees(z, n)
    h_z = _h_from_degrees(x, params)
    hyb = x.copy()
    plain = np.empty(z.size)
    prefix = np.empty(z.size)
    for s in range(z.size):
        i, j = iu[s], ju[s]
        step = zp[s] - z[s]
        flipped = x.copy()
        flipped[i] += step
        flipped[j] += step
        plain[s] = h_z - _h_from_degrees(flipped, params)
        before = _h_from_degrees(hyb, params)
        hyb[i] += step
        hyb[j] += step
        prefix[s] = before - _h_from_degrees(hyb, params)
    return plain, prefix


def sigma2_h(params: ErParams) -> float:
    """Exact ``Var(h) = n(n-1)(n-2) p^2 (1-p)^2 / 2``."""
    n, p = params.n, params.p
    return n * (n - 1) * (n - 2) * p * p * (1 - p) ** 2 / 2


def _v_from_sums(sums: np.ndarray, c: float, sigma2: float) -> tuple[np.ndarray, np.ndarray]:
    sums = np.asarray(sums, dtype=np.float64).reshape(-1, 6)
    v = (sums[:, 0] - c * sums[:, 1] + c * c * sums[:, 2]) / (2 * sigma2)
    v_star = (sums[:, 3] - c * sums[:, 4] + c * c * sums[:, 5]) / sigma2
    return v, v_star


def _sigma2_checked(params: ErParams, sigma2: float | None) -> float:
    s2 = sigma2_h(params) if sigma2 is None else float(sigma2)
    if not s2 > 0:
        raise DegenerateVariance(f"sigma^2 = {s2} is not positive")
    return s2


def v_statistics(sample: PairedSample, sigma2: float | None = None) -> tuple[float, float]:
    params = sample.params
    s2 = _sigma2_checked(params, sigma2)
    c = _centre(params)
    d, a, b = kernels.stein_terms(params.n, sample.z, sample.z_prime)
    nz = d != 0
    d, a, b = d[nz], a[nz], b[nz]
    e = d * np.sign(b - c).astype(np.int64)
    ab, apb = a * b, a + b
    sums = np.array([ab.sum(), apb.sum(), d.size, (e * ab).sum(), (e * apb).sum(), e.sum()])
    v, v_star = _v_from_sums(sums, c, s2)
    return float(v[0]), float(v_star[0])


def v_statistics_batch(params: ErParams, seed: int, replicas: int,
                       first: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """``V_n`` and ``V_n*`` for paired-sample replicas ``first .. first + replicas - 1``."""
    s2 = _sigma2_checked(params, None)
    sums = kernels.stein_batch(params.n, params.p, rng.normalize_seed(seed), first, replicas)
    return _v_from_sums(sums, _centre(params), s2)


@dataclass(frozen=True)
class SteinCheck:
    n: int
    p: float
    seed: int
    replicas: int
    identity_samples: int
    sigma2: float
    max_delta_dev: float
    max_prefix_dev: float
    telescoping_residual: float
    v_mean: float
    v_se: float
    v_star_mean: float
    v_star_se: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def identity_deviations(sample: PairedSample) -> tuple[float, float, float]:
    """Max deviation of ``sweep`` from the direct oracle (plain, prefix) and
    the telescoping residual ``sum_s Delta_s h(Z^{A_s}) - (h(Z) - h(Z'))``."""
    fast_plain, fast_prefix = sweep(sample)
    slow_plain, slow_prefix = direct_differences(sample)
    total = math.fsum(fast_prefix)
    target = h_value(sample.z, sample.params) - h_value(sample.z_prime, sample.params)
    return (
        float(np.max(np.abs(fast_plain - slow_plain), initial=0.0)),
        float(np.max(np.abs(fast_prefix - slow_prefix), initial=0.0)),
        abs(total - target),
    )


def stein_check(params: ErParams, seed: int, replicas: int = 1000,
                identity_samples: int = 10) -> SteinCheck:
    if replicas < 2:
        raise InvalidParams(f"replicas must be >= 2, got {replicas}")
    devs = np.zeros((0, 3))
    if identity_samples > 0:
        devs = np.array([identity_deviations(paired_sample(params, seed, r))
                         for r in range(identity_samples)])
    v, v_star = v_statistics_batch(params, seed, replicas)
    root = math.sqrt(replicas)
    return SteinCheck(
        params.n, params.p, int(seed), replicas, identity_samples, sigma2_h(params),
        float(devs[:, 0].max(initial=0.0)), float(devs[:, 1].max(initial=0.0)),
        float(devs[:, 2].max(initial=0.0)),
        float(v.mean()), float(v.std(ddof=1) / root),
        float(v_star.mean()), float(v_star.std(ddof=1) / root),
    )
