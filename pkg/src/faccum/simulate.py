"""Monte Carlo samplers for the ten schemes and empirical estimators.

Replicate ``i`` of a run with seed ``s`` always uses the random stream keyed by
``(s, i)``, so a batch is the same whether it is produced serially, in chunks
or on several threads.  ``FACCUM_THREADS`` sets the worker count.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import stats

from . import kernels
from ._kernels_py import Stream
from .exact import DomainError
from .schemes import spec as S
from .schemes.spec import SchemeSpec

MAX_FOREST_ATTEMPTS = 10**6
_CDF_TAIL = 1e-17


class SamplingError(RuntimeError):
    pass


# -- classical laws by inversion ------------------------------------------------

def _classical_dist(spec):
    P = spec.params
    f = spec.family
    if f == S.BINOMIAL:
        return stats.binom(P["n"], float(P["p"]))
    if f == S.NEG_BINOMIAL:
        return stats.nbinom(P["n"], float(P["p"]))
    if f == S.HYPERGEOMETRIC:
        return stats.hypergeom(P["N"] + P["M"], P["N"], P["n"])
    if f == S.NEG_HYPERGEOMETRIC:
        n = P["n"]
        return stats.betabinom(n, float(P["alpha"] * n), float(P["beta"] * n))
    raise DomainError(f"{f} is not a classical family")


def classical_cdf(spec: SchemeSpec) -> np.ndarray:
    """CDF table of ``S`` on ``0..K`` with the tail beyond ``K`` below 1e-17."""
    dist = _classical_dist(spec)
    hi = int(dist.isf(_CDF_TAIL)) + 1
    if spec.family != S.NEG_BINOMIAL:
        hi = min(hi, spec.n)
    return dist.cdf(np.arange(hi + 1))


# -- forest by conditioned rejection -----------------------------------------------

def _borel_weights(x, K):
    """``P(eta = k)`` proportional to ``(k+1)**(k-1) x**k / k!`` on ``0..K``.

    With ``x = lam * exp(-lam)`` this is the Borel-type tree-size law; on a
    finite support any ``x > 0`` is allowed.
    """
    k = np.arange(K + 1)
    logw = k * math.log(x) + (k - 1) * np.log(k + 1.0) - np.array([math.lgamma(i + 1) for i in k])
    w = np.exp(logw - logw.max())
    return w / w.sum()


def borel_tilt(n: int, N: int) -> float:
    """Tilt ``x`` giving mean ``n / N`` to the tree-size law cut at ``n``.

    ``x <= 1/e`` corresponds to ``lam = -W(-x)`` in the usual parametrization;
    larger tilts are needed when ``n / N`` exceeds what ``lam <= 1`` reaches
    on the cut support.
    """
    target = n / N
    k = np.arange(n + 1)
    lo, hi = -60.0, 60.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(k @ _borel_weights(math.exp(mid), n)) < target:
            lo = mid
        else:
            hi = mid
    return math.exp(0.5 * (lo + hi))


@lru_cache(maxsize=64)
def _borel_cdf(n, N):
    return np.cumsum(_borel_weights(borel_tilt(n, N), n))


def forest_rejection(spec: SchemeSpec, seed: int, rep: int = 0, max_attempts: int = MAX_FOREST_ATTEMPTS) -> np.ndarray:
    """Tree sizes as i.i.d. Borel-type variables conditioned on their sum.

    Values above ``n`` cannot occur under the conditioning, so cutting the
    support at ``n`` leaves the conditioned law exact.
    """
    n, N = spec.n, spec.params["N"]
    cdf = _borel_cdf(n, N)
    st = Stream(seed, rep)
    for _ in range(max_attempts):
        eta = np.minimum(np.searchsorted(cdf, st.take(N), side="right"), n)
        if int(eta.sum()) == n:
            return eta.astype(np.int64)
    raise SamplingError(f"no acceptance in {max_attempts} attempts")


# -- batches -------------------------------------------------------------------------

def _kernel_call(spec, seed, rep0, reps, rmax, counts_out):
    P = spec.params
    f = spec.family
    n = spec.n
    if f == S.GAS_DISTINCT:
        return kernels.occupancy_distinct(seed, rep0, reps, n, P["N"], rmax, counts_out)
    if f == S.GAS_INDISTINCT:
        return kernels.occupancy_indistinct(seed, rep0, reps, n, P["N"], rmax, counts_out)
    if f == S.GAS_COLOURED:
        return kernels.occupancy_coloured(seed, rep0, reps, n, P["N"], P["M"], rmax, counts_out)
    if f == S.GAS_FOREST:
        return kernels.occupancy_forest(seed, rep0, reps, n, P["N"], rmax, counts_out)
    if f == S.GIAS_NEGMULTI:
        return kernels.occupancy_negmulti(seed, rep0, reps, n, P["N"], float(P["p"]), rmax, counts_out)
    if f == S.GIAS_DIRICHLET:
        return kernels.occupancy_dirichlet(
            seed, rep0, reps, n, P["N"], float(P["a"]), float(P["b"]), rmax, counts_out
        )
    raise DomainError(f"no occupancy sampler for {f}")


def sample_counts(spec: SchemeSpec, seed: int, rep: int = 0, forest_method: str = "wilson"):
    """One draw: the count vector, or the scalar ``S`` for classical families.

    Forests default to Wilson's algorithm; ``forest_method="rejection"`` uses
    the conditioned Borel-type sampler instead (same law, small N only).
    """
    if spec.family == S.GAS_FOREST and forest_method == "rejection":
        return forest_rejection(spec, seed, rep)
    if forest_method not in ("wilson", "rejection"):
        raise DomainError(f"unknown forest method {forest_method!r}")
    if spec.family in S.CLASSICAL:
        return int(kernels.inverse_cdf(seed, rep, 1, classical_cdf(spec))[0])
    counts = np.zeros((1, spec.params["N"]), dtype=np.int64)
    _kernel_call(spec, seed, rep, 1, 0, counts)
    return counts[0]


@dataclass
class SampleBatch:
    spec: SchemeSpec
    seed: int
    reps: int
    hist: np.ndarray | None
    values: np.ndarray
    counts: np.ndarray | None = None

    @property
    def rmax(self) -> int | None:
        return None if self.hist is None else self.hist.shape[1] - 1

    def statistic(self, r: int | None = None) -> np.ndarray:
        """``S^{(r)}`` per replicate; ``r`` defaults to the spec's own."""
        if r is None:
            return self.values
        if self.hist is None:
            raise DomainError("classical batches carry a single statistic")
        if not 0 <= r <= self.rmax:
            raise DomainError(f"r={r} outside 0..{self.rmax}")
        return self.hist[:, r]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.hist is None:
            w.writerow(["rep", "S"])
            for i, v in enumerate(self.values):
                w.writerow([i, int(v)])
        else:
            w.writerow(["rep"] + [f"S{r}" for r in range(self.rmax + 1)])
            for i, row in enumerate(self.hist):
                w.writerow([i] + [int(x) for x in row])
        return buf.getvalue()


def _threads(threads):
    if threads is None:
        threads = int(os.environ.get("FACCUM_THREADS", "0") or 0) or (os.cpu_count() or 1)
    return max(1, threads)


def simulate(spec: SchemeSpec, reps: int, seed: int, rmax: int | None = None,
             keep_counts: bool = False, threads: int | None = None, chunk: int = 4096) -> SampleBatch:
    """``reps`` independent draws of the scheme's occupancy statistics."""
    if reps < 1:
        raise DomainError("reps must be positive")
    seed = int(seed) & ((1 << 64) - 1)
    starts = list(range(0, reps, chunk))
    workers = min(_threads(threads), len(starts))

    if spec.family in S.CLASSICAL:
        cdf = classical_cdf(spec)

        def job(r0):
            return kernels.inverse_cdf(seed, r0, min(chunk, reps - r0), cdf)

        with ThreadPoolExecutor(workers) as ex:
            values = np.concatenate(list(ex.map(job, starts)))
        return SampleBatch(spec, seed, reps, None, values)

    r = spec.params["r"]
    rmax = max(r, 2) if rmax is None else max(rmax, r)
    N = spec.params["N"]
    counts = np.zeros((reps, N), dtype=np.int64) if keep_counts else None

    def job(r0):
        m = min(chunk, reps - r0)
        co = np.zeros((m, N), dtype=np.int64) if keep_counts else None
        h = _kernel_call(spec, seed, r0, m, rmax, co)
        if keep_counts:
            counts[r0:r0 + m] = co
        return h

    with ThreadPoolExecutor(workers) as ex:
        hist = np.concatenate(list(ex.map(job, starts)))
    return SampleBatch(spec, seed, reps, hist, hist[:, r].copy(), counts)


# -- estimators ------------------------------------------------------------------------

@dataclass(frozen=True)
class Estimate:
    value: float
    se: float

    def within(self, target: float, n_se: float) -> bool:
        return abs(self.value - target) <= n_se * self.se

    def to_json(self) -> dict:
        return {"value": self.value, "se": self.se}


def empirical_factorial_moment(batch: SampleBatch, k: int, r: int | None = None) -> Estimate:
    """Mean of ``(S)_k`` over replicates with its plug-in standard error."""
    if batch.reps < 2:
        raise DomainError("need at least 2 replicates")
    s = batch.statistic(r).astype(np.float64)
    ff = np.ones_like(s)
    for i in range(k):
        ff *= s - i
    return Estimate(float(ff.mean()), float(ff.std(ddof=1) / math.sqrt(len(ff))))


@dataclass(frozen=True)
class KSResult:
    statistic: float
    pvalue: float
    degenerate: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def ks_to_normal(batch: SampleBatch, mean: float, sd: float, r: int | None = None) -> KSResult:
    """Kolmogorov-Smirnov distance of ``(S - mean) / sd`` to the standard normal."""
    if not sd > 0:
        raise DomainError("sd must be positive")
    s = batch.statistic(r).astype(np.float64)
    res = stats.kstest((s - float(mean)) / float(sd), "norm")
    return KSResult(float(res.statistic), float(res.pvalue), bool(s.min() == s.max()))


def empirical_correlation(batch: SampleBatch, r1: int, r2: int) -> Estimate:
    """Pearson correlation of ``S^{(r1)}`` and ``S^{(r2)}`` over the same draws."""
    x = batch.statistic(r1).astype(np.float64)
    y = batch.statistic(r2).astype(np.float64)
    if x.std() == 0 or y.std() == 0:
        raise DomainError("zero empirical variance")
    rho = float(np.corrcoef(x, y)[0, 1])
    return Estimate(rho, (1 - rho * rho) / math.sqrt(len(x)))


def summary(batch: SampleBatch, K: int = 3) -> dict:
    s = batch.statistic().astype(np.float64)
    return {
        "spec": batch.spec.to_dict(),
        "seed": batch.seed,
        "reps": batch.reps,
        "backend": kernels.BACKEND,
        "mean": float(s.mean()),
        "variance": float(s.var(ddof=1)) if batch.reps > 1 else None,
        "factorial_moments": [empirical_factorial_moment(batch, k).to_json() for k in range(1, K + 1)]
        if batch.reps > 1 else [],
    }


def summary_json(batch: SampleBatch, K: int = 3) -> str:
    return json.dumps(summary(batch, K), indent=2)
