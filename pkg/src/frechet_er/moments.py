"""Exact moments of F_n^2, asymptotic regimes and limit-law parameters.

``F_n`` is the Laplacian-Frobenius distance from ``G(n, p)`` to an
``m``-regular Frechet mean, ``m = floor(np)``. Writing ``q = 1 - p``:

    E[F_n^2]   = (np - m)(np - m - 1) n + (3n - 2) n p q
    Var(F_n^2) = 2npq [4(np - m + 1 - 3p)^2 n + (n^2 + n + 18) pq
                       + (2np - 2m - 1)^2 - 5]

The formulas only use that the reference graph is ``m``-regular, so
``moments_regular`` evaluates them for any such ``m``; ``moments`` insists
on the setting where the canonical mean is ``floor(np)``-regular and ``np``
is not an integer.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import stats as sps

from .er_model import ErParams
from .errors import Ambiguous, IntegerC, InvalidParams, UnsupportedCase

STABLE_RTOL = 0.05
TREND_FACTOR = 2.0

VANISHING = "Vanishing"
POISSON_WINDOW = "PoissonWindow"
VERY_SPARSE = "VerySparse"
SPARSE = "Sparse"
DENSE = "Dense"


@dataclass(frozen=True)
class MomentReport:
    n: int
    p: float
    m: int
    mean_fn2: float
    var_fn2: float
    e_un: float
    e_wn: float
    var_un: float
    var_wn: float
    cov_unwn: float

    def to_dict(self) -> dict:
        return asdict(self)


def moments_regular(n: int, p: float, m: int) -> MomentReport:
    """Moments of ``d_F^2(G(n, p), R)`` for any ``m``-regular ``R``."""
    q = 1.0 - p
    t = n * p
    npq = t * q
    mean = (t - m) * (t - m - 1) * n + (3 * n - 2) * npq
    var = 2 * npq * (
        4 * (t - m + 1 - 3 * p) ** 2 * n
        + (n * n + n + 18) * p * q
        + (2 * t - 2 * m - 1) ** 2
        - 5
    )
    e_un = (m * n - n + 1) * t
    e_wn = n * (n - 1) * (n - 2) * p * p
    var_un = 2 * npq * (n * (m - 1) ** 2 + m * m + m - 1)
    var_wn = 2 * n * (n - 1) * (n - 2) * p * p * q * (1 + (4 * n - 9) * p)
    cov = 4 * n * (n - 2) * p * p * q * (m * n - n + 1)
    return MomentReport(n, p, m, mean, var, e_un, e_wn, var_un, var_wn, cov)


def check_moment_case(params: ErParams, allow_integer_np: bool = False) -> None:
    if params.np_is_integer:
        if not allow_integer_np:
            raise UnsupportedCase(f"np = {params.np_:g} is an integer")
        if (params.n * params.m) % 2:
            raise UnsupportedCase("no regular Frechet mean: n * np is odd")
    elif (params.n * params.m) % 2:
        raise UnsupportedCase(f"n * floor(np) = {params.n * params.m} is odd")


def moments(params: ErParams, allow_integer_np: bool = False) -> MomentReport:
    """Exact mean and variance of ``F_n^2`` and of its ``U_n``, ``W_n`` parts.

    Requires a ``floor(np)``-regular Frechet mean. By default integer ``np``
    is rejected; ``allow_integer_np`` admits it when ``n * np`` is even, since
    the ``np``-regular graphs are then Frechet means too.
    """
    check_moment_case(params, allow_integer_np)
    return moments_regular(params.n, params.p, params.m)


def _is_integer(c: float, rtol: float = 0.0) -> bool:
    return abs(c - round(c)) <= max(1e-12, rtol * c)


def a_constant(np1p_limit: float) -> float:
    """Limit of ``E[F_n^2] / (n^2 p (1-p))`` given ``lim np(1-p)``."""
    c = float(np1p_limit)
    if c < 0 or math.isnan(c):
        raise InvalidParams(f"limit of np(1-p) must be >= 0, got {c}")
    if c == 0:
        return 2.0
    if math.isinf(c):
        return 3.0
    fl = math.floor(c)
    return 2.0 + ((c - fl) ** 2 + fl) / c


def sparse_variance_constant(c: float) -> float:
    """``2c[4(c - floor c + 1)^2 + c]``, the ``Var(F_n^2) / n`` limit."""
    fl = math.floor(c)
    return 2 * c * (4 * (c - fl + 1) ** 2 + c)


def sparse_mean_constant(c: float) -> float:
    fl = math.floor(c)
    return (c - fl) ** 2 + fl + 2 * c


@dataclass(frozen=True)
class Regime:
    tag: str
    limit_param: Optional[float] = None
    integer_c: bool = False

    @property
    def a_constant(self) -> Optional[float]:
        if self.tag == VERY_SPARSE:
            return a_constant(0.0)
        if self.tag == SPARSE:
            return a_constant(self.limit_param)
        if self.tag == DENSE:
            return a_constant(math.inf)
        return None

    @property
    def limit_law(self) -> dict:
        return limit_law(self)

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "limit_param": self.limit_param,
            "integer_c": self.integer_c,
            "a_constant": self.a_constant,
            "limit_law": self.limit_law,
        }


def limit_law(regime: Regime) -> dict:
    """Centring, scaling and limiting variances for the given regime."""
    tag = regime.tag
    if tag == VANISHING:
        return {"statement": "F_n -> 0 in probability"}
    if tag == POISSON_WINDOW:
        lam = regime.limit_param
        return {"statement": f"F_n -> 2 sqrt(Poisson({lam / 2:.17g})) in distribution"}
    if tag == SPARSE and regime.integer_c:
        return {"statement": "integer c: Var(F_n^2)/n has no unique limit; no normal law is reported"}
    if tag == VERY_SPARSE:
        fn2 = ("sqrt(n^2 p (1-p))", 8.0)
        fn = ("1", 1.0)
    elif tag == SPARSE:
        c = regime.limit_param
        fn2 = ("sqrt(n)", sparse_variance_constant(c))
        fn = ("1", sparse_variance_constant(c) / (4 * sparse_mean_constant(c)))
    elif tag == DENSE:
        fn2 = ("sqrt(n^3 p^2 (1-p)^2)", 2.0)
        fn = ("sqrt(n p (1-p))", 1.0 / 6.0)
    else:
        raise InvalidParams(f"unknown regime {tag!r}")
    return {
        "fn2": {"centering": "E[F_n^2]", "scaling": fn2[0], "variance": fn2[1]},
        "fn": {"centering": "sqrt(E[F_n^2])", "scaling": fn[0], "variance": fn[1]},
    }


def asymptotic_variance(params: ErParams, regime: Regime) -> float:
    """Leading-order ``Var(F_n^2)`` in the given regime."""
    n, p = params.n, params.p
    npq = n * p * (1 - p)
    if regime.tag == VERY_SPARSE:
        return 8.0 * n * npq
    if regime.tag == SPARSE:
        c = regime.limit_param
        if regime.integer_c or _is_integer(c):
            raise IntegerC(f"c = {c:g} is an integer; the variance has no unique first-order term")
        return sparse_variance_constant(c) * n
    if regime.tag == DENSE:
        return 2.0 * npq * npq * n
    raise UnsupportedCase(f"no asymptotic variance for regime {regime.tag}")


def _trend(values: np.ndarray) -> str:
    """'zero', 'inf', 'finite' or 'unclear' for a sequence along growing n."""
    rel = np.abs(np.diff(values)) / np.maximum(np.abs(values[1:]), np.finfo(float).tiny)
    if np.all(rel <= STABLE_RTOL):
        return "finite"
    steps = np.diff(values)
    if np.all(steps > 0) and values[-1] >= TREND_FACTOR * values[0]:
        return "inf"
    if np.all(steps < 0) and values[-1] <= values[0] / TREND_FACTOR:
        return "zero"
    return "unclear"


def classify_regime(schedule: Callable[[int], float], probes: Sequence[int]) -> Regime:
    """Classify a schedule ``n -> p(n)`` from the trends of ``np(1-p)`` and
    ``n^2 p(1-p)`` on increasing probe sizes."""
    probes = [int(x) for x in probes]
    if len(probes) < 3 or any(b <= a for a, b in zip(probes, probes[1:])):
        raise InvalidParams("need at least 3 strictly increasing probe sizes")
    n = np.array(probes, dtype=np.float64)
    p = np.array([schedule(k) for k in probes], dtype=np.float64)
    if np.any((p <= 0) | (p >= 1)):
        raise InvalidParams("schedule must give p strictly inside (0, 1) at every probe")
    npq = n * p * (1 - p)
    n2pq = n * npq
    t2 = _trend(n2pq)
    if t2 == "zero":
        return Regime(VANISHING, 0.0)
    if t2 == "finite":
        return Regime(POISSON_WINDOW, float(n2pq[-1]))
    if t2 == "unclear":
        raise Ambiguous("n^2 p(1-p) shows no stable trend on the probes")
    t1 = _trend(npq)
    if t1 == "zero":
        return Regime(VERY_SPARSE, 0.0)
    if t1 == "inf":
        return Regime(DENSE, math.inf)
    if t1 == "finite":
        c = float(npq[-1])
        return Regime(SPARSE, c, _is_integer(c, STABLE_RTOL))
    raise Ambiguous("np(1-p) shows no stable trend on the probes")


def schedule_from_name(name: str, param: float) -> Callable[[int], float]:
    """Named schedules: ``constant`` (p), ``c-over-n``, ``lambda-over-n2``,
    ``power`` (p = n^-param)."""
    param = float(param)
    table = {
        "constant": lambda n: param,
        "c-over-n": lambda n: param / n,
        "lambda-over-n2": lambda n: param / (n * n),
        "power": lambda n: float(n) ** (-param),
    }
    if name not in table:
        raise InvalidParams(f"unknown schedule {name!r}; choose from {sorted(table)}")
    return table[name]


SCHEDULES = ("constant", "c-over-n", "lambda-over-n2", "power")


@dataclass(frozen=True)
class SqrtPoissonLaw:
    """Law of ``2 sqrt(K)`` with ``K ~ Poisson(lam / 2)``."""

    lam: float

    @property
    def rate(self) -> float:
        return self.lam / 2

    def support(self, kmax: int) -> np.ndarray:
        return 2.0 * np.sqrt(np.arange(kmax + 1))

    def pmf(self, k) -> np.ndarray:
        return sps.poisson.pmf(k, self.rate)

    def to_dict(self, kmax: int = 10) -> dict:
        k = np.arange(kmax + 1)
        return {
            "lambda": self.lam,
            "poisson_mean": self.rate,
            "support": self.support(kmax).tolist(),
            "pmf": self.pmf(k).tolist(),
        }


def poisson_limit_params(lam: float) -> SqrtPoissonLaw:
    if not lam > 0:
        raise InvalidParams(f"lambda must be > 0, got {lam}")
    return SqrtPoissonLaw(float(lam))
