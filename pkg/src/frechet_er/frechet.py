"""Frechet function of ``G(n, p)`` and its set of minimisers.

The Frechet function ``f(G) = E[d_F^2(G, G_{n,p})]`` depends on ``G`` only
through its degrees:

    f(G) = 2n(n-1)p + n(n-1)(n-2)p^2 + sum_i [D_i^2 - (2np - 1) D_i].

Each summand is a convex parabola in ``D_i`` centred at ``np - 1/2``, so the
minimisers are the graphs whose degrees all sit at the integer(s) nearest to
that centre, subject to the handshake parity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .er_model import INTEGER_TOL, ErParams, fn2_samples
from .errors import DimensionMismatch, InvalidParams
from .graph import Graph, realize

INTEGER_NP = "IntegerNP"
EVEN_REGULAR = "EvenRegular"
ODD_ADJUSTED = "OddAdjusted"


def frechet_constant(params: ErParams) -> float:
    n, p = params.n, params.p
    return 2 * n * (n - 1) * p + n * (n - 1) * (n - 2) * p * p


def frechet_value_from_degrees(deg, params: ErParams) -> float:
    d = np.asarray(deg, dtype=np.float64)
    slope = 2 * params.np_ - 1
    return math.fsum(np.concatenate([[frechet_constant(params)], d * d - slope * d]))


def frechet_value_closed(g: Graph, params: ErParams) -> float:
    """Closed-form ``E[d_F^2(g, G_{n,p})]``."""
    if g.n != params.n:
        raise DimensionMismatch(f"graph has {g.n} vertices, params say {params.n}")
    return frechet_value_from_degrees(g.degrees(), params)


def frechet_value_mc(g: Graph, params: ErParams, replicas: int, seed: int) -> tuple[float, float]:
    """Monte Carlo estimate of the Frechet function and its standard error."""
    if replicas < 2:
        raise InvalidParams(f"replicas must be >= 2, got {replicas}")
    d2 = fn2_samples(params, g, seed, replicas).astype(np.float64)
    return float(d2.mean()), float(d2.std(ddof=1) / math.sqrt(replicas))


@dataclass(frozen=True)
class MeanSetSpec:
    """Degree description of every Frechet mean of ``G(n, p)``.

    ``allowed_degrees`` lists the values any vertex may take. For
    ``OddAdjusted`` exactly one vertex takes a value from
    ``exceptional_degrees`` and the rest equal ``m``.
    """

    case_tag: str
    n: int
    m: int
    frac_np: float
    allowed_degrees: tuple[int, ...]
    exceptional_degrees: tuple[int, ...] = ()

    @property
    def admissible(self) -> str:
        if self.case_tag == INTEGER_NP:
            return f"every degree in {{{self.m - 1}, {self.m}}} with even sum"
        if self.case_tag == EVEN_REGULAR:
            return f"every degree equal to {self.m}"
        alts = " or ".join(str(d) for d in self.exceptional_degrees)
        return f"every degree equal to {self.m} except one vertex of degree {alts}"

    def to_dict(self) -> dict:
        return {
            "case": self.case_tag,
            "n": self.n,
            "m": self.m,
            "frac_np": self.frac_np,
            "admissible": self.admissible,
            "allowed_degrees": list(self.allowed_degrees),
            "exceptional_degrees": list(self.exceptional_degrees),
        }


def _is_half(x: float) -> bool:
    return abs(x - 0.5) < INTEGER_TOL


def mean_set_spec(params: ErParams) -> MeanSetSpec:
    n, m, frac = params.n, params.m, params.frac_np
    if params.np_is_integer:
        return MeanSetSpec(INTEGER_NP, n, m, 0.0, (m - 1, m))
    if (n * m) % 2 == 0:
        return MeanSetSpec(EVEN_REGULAR, n, m, frac, (m,))
    if _is_half(frac):
        extra = (m - 1, m + 1)
    elif frac > 0.5:
        extra = (m + 1,)
    else:
        extra = (m - 1,)
    return MeanSetSpec(ODD_ADJUSTED, n, m, frac, (m,) + extra, extra)


def canonical_degrees(params: ErParams) -> np.ndarray:
    """Degree sequence realised by ``construct_mean``; any odd vertex out is vertex ``n``."""
    spec = mean_set_spec(params)
    deg = np.full(params.n, spec.m, dtype=np.int64)
    if spec.case_tag == INTEGER_NP and (params.n * spec.m) % 2:
        deg[-1] = spec.m - 1
    elif spec.case_tag == ODD_ADJUSTED:
        deg[-1] = max(spec.exceptional_degrees)
    return deg


@lru_cache(maxsize=64)
def construct_mean(params: ErParams) -> Graph:
    """A deterministic member of the Frechet mean set."""
    return realize(canonical_degrees(params))


def degrees_admissible(deg, spec: MeanSetSpec) -> bool:
    deg = np.asarray(deg)
    if spec.case_tag == INTEGER_NP:
        return bool(np.all((deg == spec.m) | (deg == spec.m - 1)) and deg.sum() % 2 == 0)
    if spec.case_tag == EVEN_REGULAR:
        return bool(np.all(deg == spec.m))
    off = deg[deg != spec.m]
    return off.size == 1 and int(off[0]) in spec.exceptional_degrees


def is_frechet_mean(g: Graph, params: ErParams) -> bool:
    if g.n != params.n:
        raise DimensionMismatch(f"graph has {g.n} vertices, params say {params.n}")
    return degrees_admissible(g.degrees(), mean_set_spec(params))
