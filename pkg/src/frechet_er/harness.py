"""Replicated simulation of F_n^2 against a canonical Frechet mean, with the
distributional checks that go with each regime.

Centring and scaling always come from closed forms, never from the sample.
Replica ``r`` reads random stream ``r`` of the configured seed, so a result
depends only on its configuration.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from scipy import stats as sps

from .er_model import ErParams, fn2_samples
from .errors import EmptySample, IntegerC, InvalidParams, UnsupportedCase
from .frechet import construct_mean
from .graph import Graph
from .moments import (DENSE, SPARSE, VERY_SPARSE, Regime, a_constant, limit_law,
                      moments, poisson_limit_params)

TESTS = ("moments", "poisson", "normal", "sqrt-normal", "lln")
CASES = ("very-sparse", "sparse", "dense")
SCALINGS = ("exact", "asymptotic")
KS_C99 = 1.63
MIN_EXPECTED = 5.0
MAX_OTHER_MASS = 0.01
Z_LIMIT = 3.0

_CASE_TAG = {"very-sparse": VERY_SPARSE, "sparse": SPARSE, "dense": DENSE}


@dataclass(frozen=True)
class SimConfig:
    """One simulation.

    ``case`` selects the limit law for ``sqrt-normal`` and for ``normal``
    with asymptotic scaling; ``lam`` is the Poisson-window parameter
    (default ``n^2 p (1-p)``).
    """

    n: int
    p: float
    replicas: int
    seed: int
    test: str = "moments"
    case: Optional[str] = None
    scaling: str = "exact"
    lam: Optional[float] = None
    alpha: float = 0.01

    def __post_init__(self):
        ErParams(self.n, self.p)
        if self.replicas < 2:
            raise InvalidParams(f"replicas must be >= 2, got {self.replicas}")
        if self.test not in TESTS:
            raise InvalidParams(f"unknown test {self.test!r}; choose from {TESTS}")
        if self.case is not None and self.case not in CASES:
            raise InvalidParams(f"unknown case {self.case!r}; choose from {CASES}")
        if self.scaling not in SCALINGS:
            raise InvalidParams(f"unknown scaling {self.scaling!r}; choose from {SCALINGS}")
        if self.lam is not None and not self.lam > 0:
            raise InvalidParams(f"lambda must be > 0, got {self.lam}")
        if not 0 < self.alpha < 1:
            raise InvalidParams(f"alpha must lie in (0, 1), got {self.alpha}")
        needs_case = self.test == "sqrt-normal" or (
            self.test == "normal" and self.scaling == "asymptotic")
        if needs_case and self.case is None:
            raise InvalidParams(f"test {self.test!r} with this scaling needs a case")

    @property
    def params(self) -> ErParams:
        return ErParams(self.n, self.p)


@dataclass
class SimResult:
    config: SimConfig
    samples: np.ndarray
    standardized: np.ndarray
    emp_mean: float
    emp_var: float
    closed_mean: float
    closed_var: float
    test_stat: float
    p_value: float
    verdict: str
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "config": asdict(self.config),
            "emp_mean": self.emp_mean,
            "emp_var": self.emp_var,
            "closed_mean": self.closed_mean,
            "closed_var": self.closed_var,
            "test_stat": self.test_stat,
            "p_value": self.p_value,
            "verdict": self.verdict,
            "details": self.details,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["replica", "fn2", "standardized"])
        for r, (x, z) in enumerate(zip(self.samples, self.standardized)):
            out.writerow([r, int(x), repr(float(z))])
        return buf.getvalue()


# Samples are cached per (n, p, seed, mean graph) as the longest prefix drawn
# so far; replica r is the same number whichever request computed it.
_SAMPLE_STORE: dict = {}
_STORE_LIMIT = 16


def sample_fn2(params: ErParams, mean_graph: Graph, seed: int, replicas: int) -> np.ndarray:
    key = (params.n, params.p, int(seed), mean_graph)
    have = _SAMPLE_STORE.get(key)
    if have is None or have.size < replicas:
        start = 0 if have is None else have.size
        fresh = fn2_samples(params, mean_graph, seed, replicas - start, first=start)
        have = fresh if have is None else np.concatenate([have, fresh])
        have.setflags(write=False)
        if len(_SAMPLE_STORE) >= _STORE_LIMIT:
            _SAMPLE_STORE.pop(next(iter(_SAMPLE_STORE)))
        _SAMPLE_STORE[key] = have
    return have[:replicas]


def clear_sample_cache() -> None:
    _SAMPLE_STORE.clear()


@dataclass(frozen=True)
class NormalRef:
    mean: float = 0.0
    var: float = 1.0

    def cdf(self, x):
        return sps.norm.cdf(x, loc=self.mean, scale=math.sqrt(self.var))


def ks_statistic(sample, reference) -> float:
    """Sup distance between the empirical CDF of ``sample`` and the continuous
    CDF ``reference.cdf``."""
    x = np.sort(np.asarray(sample, dtype=np.float64))
    r = x.size
    if r == 0:
        raise EmptySample("KS statistic of an empty sample")
    f = reference.cdf(x)
    i = np.arange(1, r + 1)
    return float(max(np.max(i / r - f), np.max(f - (i - 1) / r)))


def ks_threshold(replicas: int, alpha: float = 0.01) -> float:
    """``1.63 / sqrt(R)`` at the 1% level for ``R >= 1000``; the exact
    Kolmogorov quantile otherwise."""
    if replicas >= 1000 and alpha == 0.01:
        return KS_C99 / math.sqrt(replicas)
    return float(sps.kstwo.isf(alpha, replicas))


def poisson_bins(counts_by_k: np.ndarray, rate: float, replicas: int):
    """Merge the upper tail so that every bin expects at least five counts.

    Returns observed and expected counts over bins ``0, 1, ..., K-1, >= K``.
    """
    kmax = max(counts_by_k.size, int(rate + 20 * math.sqrt(rate) + 20))
    obs = np.zeros(kmax + 1)
    obs[: counts_by_k.size] = counts_by_k
    pmf = sps.poisson.pmf(np.arange(kmax + 1), rate)
    last = int(np.flatnonzero(replicas * pmf >= MIN_EXPECTED).max(initial=0))
    # the tail bin collects everything from `last` upwards
    while last > 0 and replicas * sps.poisson.sf(last - 1, rate) < MIN_EXPECTED:
        last -= 1
    exp_counts = np.append(replicas * pmf[:last], replicas * sps.poisson.sf(last - 1, rate))
    obs_counts = np.append(obs[:last], obs[last:].sum())
    return obs_counts, exp_counts


def _closed(config: SimConfig):
    params = config.params
    mean_graph = construct_mean(params)
    report = moments(params, allow_integer_np=True)
    return params, mean_graph, report


def _regime(config: SimConfig, params: ErParams) -> Regime:
    tag = _CASE_TAG[config.case]
    if tag == SPARSE:
        c = params.np_ * params.q
        # np and np(1-p) share the limit; an integer anywhere in that gap is ambiguous
        if abs(c - round(c)) <= params.np_ * params.p + 1e-9:
            raise IntegerC(f"np(1-p) = {c:g} is an integer; no single limit law")
        return Regime(SPARSE, c)
    return Regime(tag, 0.0 if tag == VERY_SPARSE else math.inf)


def run(config: SimConfig) -> SimResult:
    params, mean_graph, rep = _closed(config)
    x = sample_fn2(params, mean_graph, config.seed, config.replicas)
    xf = x.astype(np.float64)
    r = config.replicas
    emp_mean = float(xf.mean())
    emp_var = float(xf.var(ddof=1))
    details: dict = {}
    test = config.test

    if test == "moments":
        std = (xf - rep.mean_fn2) / math.sqrt(rep.var_fn2)
        z_mean = (emp_mean - rep.mean_fn2) / math.sqrt(rep.var_fn2 / r)
        centred = xf - emp_mean
        m4 = float(np.mean(centred ** 4))
        se_var = math.sqrt(max(m4 - emp_var ** 2, 0.0) / r)
        z_var = (emp_var - rep.var_fn2) / se_var if se_var > 0 else math.inf
        stat = max(abs(z_mean), abs(z_var))
        p_value = min(1.0, 4 * sps.norm.sf(stat))
        verdict = stat < Z_LIMIT
        details.update(z_mean=z_mean, z_var=z_var, se_var=se_var, z_limit=Z_LIMIT)

    elif test == "poisson":
        if params.m != 0 or mean_graph.edge_count:
            raise UnsupportedCase("the Poisson window needs the empty Frechet mean (np < 1)")
        lam = config.lam if config.lam is not None else params.n * params.np_ * params.q
        law = poisson_limit_params(lam)
        on_lattice = x % 4 == 0
        other_mass = float(1.0 - on_lattice.mean())
        obs, exp = poisson_bins(np.bincount(x[on_lattice] // 4), law.rate, r)
        stat = float(np.sum((obs - exp) ** 2 / exp))
        dof = max(obs.size - 1, 1)
        p_value = float(sps.chi2.sf(stat, dof))
        verdict = p_value > config.alpha and other_mass < MAX_OTHER_MASS
        std = np.sqrt(xf)
        details.update(lam=lam, poisson_mean=law.rate, other_mass=other_mass,
                       bins=int(obs.size), dof=dof,
                       observed=obs.tolist(), expected=exp.tolist())

    elif test in ("normal", "sqrt-normal"):
        ref_var = 1.0
        if test == "normal":
            if config.scaling == "exact":
                std = (xf - rep.mean_fn2) / math.sqrt(rep.var_fn2)
            else:
                law = limit_law(_regime(config, params))["fn2"]
                std = (xf - rep.mean_fn2) / _scale(law["scaling"], params)
                ref_var = law["variance"]
        else:
            law = limit_law(_regime(config, params))["fn"]
            gap = np.sqrt(xf) - math.sqrt(rep.mean_fn2)
            if config.scaling == "exact":
                # delta-method variance at this n instead of its limit
                std = gap / math.sqrt(rep.var_fn2 / (4 * rep.mean_fn2))
            else:
                std = gap / _scale(law["scaling"], params)
                ref_var = law["variance"]
        reference = NormalRef(0.0, ref_var)
        stat = ks_statistic(std, reference)
        threshold = ks_threshold(r, config.alpha)
        p_value = float(sps.kstwo.sf(stat, r))
        verdict = stat < threshold
        details.update(reference_variance=ref_var, ks_threshold=threshold,
                       standardized_mean=float(std.mean()),
                       standardized_var=float(std.var(ddof=1)))

    else:  # lln
        p_zero = math.exp(mean_graph.edge_count * math.log(params.p)
                          + (params.n * (params.n - 1) // 2 - mean_graph.edge_count)
                          * math.log1p(-params.p))
        zeros = int(np.count_nonzero(x == 0))
        stat = zeros / r
        p_value = float(sps.binomtest(zeros, r, p_zero).pvalue)
        verdict = p_value > config.alpha
        std = np.sqrt(xf)
        details.update(zero_probability=p_zero, zero_fraction=stat)

    return SimResult(config, x, np.asarray(std, dtype=np.float64), emp_mean, emp_var,
                     rep.mean_fn2, rep.var_fn2, float(stat), float(p_value),
                     "pass" if verdict else "fail", details)


def _scale(expr: str, params: ErParams) -> float:
    n, npq = params.n, params.np_ * params.q
    return {
        "1": 1.0,
        "sqrt(n)": math.sqrt(n),
        "sqrt(n p (1-p))": math.sqrt(npq),
        "sqrt(n^2 p (1-p))": math.sqrt(n * npq),
        "sqrt(n^3 p^2 (1-p)^2)": math.sqrt(n) * npq,
    }[expr]


def ratio_check(config: SimConfig) -> float:
    """Mean of ``F_n / sqrt(n^2 p (1-p))`` over the configured replicas."""
    params = config.params
    x = sample_fn2(params, construct_mean(params), config.seed, config.replicas)
    return float(np.mean(np.sqrt(x.astype(np.float64)))
                 / math.sqrt(params.n * params.np_ * params.q))


def ratio_target(case: str, c: Optional[float] = None) -> float:
    """``sqrt(a)`` for the given case; ``c`` is the sparse limit of np(1-p)."""
    limit = {"very-sparse": 0.0, "dense": math.inf}.get(case, c)
    if limit is None:
        raise InvalidParams("the sparse case needs c")
    return math.sqrt(a_constant(limit))
