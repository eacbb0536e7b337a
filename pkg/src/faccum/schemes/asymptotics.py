"""Limiting constants for the scaled mean and variance of ``S_n^{(r)}``.

GAS families are scaled by ``N**(r-1) / n**r`` with ``N / n -> lam``; when
``lam`` is infinite and ``r`` is 0 or 1 the variance needs the scale
``N / n**2`` instead and only ``tilde_var_const`` is defined.  GIAS families
are scaled by ``1 / n`` and need a finite ``lam``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..exact import DomainError
from . import spec as S


@dataclass(frozen=True)
class AsymptoticConstants:
    family: str
    r: int
    lam: float
    mean_const: float
    var_const: float | None
    tilde_var_const: float | None = None

    def to_json(self) -> dict:
        def enc(x):
            return None if x is None else ("inf" if x == math.inf else x)

        return {
            "family": self.family,
            "r": self.r,
            "lam": enc(self.lam),
            "mean_const": self.mean_const,
            "var_const": self.var_const,
            "tilde_var_const": self.tilde_var_const,
        }


# sigma-tilde for r = 0, 1 at lam = infinity
_TILDE = {
    S.GAS_INDISTINCT: (1.0, 4.0),
    S.GAS_DISTINCT: (0.5, 2.0),
    S.GAS_COLOURED: (0.5, 2.0),
    S.GAS_FOREST: (1.5, 6.0),
}


def _indistinct(r, lam):
    if lam == math.inf:
        return 1.0, 1.0
    q = lam / (1 + lam)
    mean = q ** (r + 1)
    var = mean * (1 - lam * (1 + lam + (lam * r - 1) ** 2) / (1 + lam) ** (r + 2))
    return mean, var


def _distinct(r, lam):
    rf = math.factorial(r)
    if lam == math.inf:
        return 1 / rf, 1 / rf
    e = math.exp(-1 / lam)
    mean = e / rf
    var = mean * (1 - e * (lam + (lam * r - 1) ** 2) / (rf * lam ** (r + 1)))
    return mean, var


def _forest(r, lam):
    base = (r + 1) ** (r - 1) / math.factorial(r)
    if lam == math.inf:
        return base, base
    e = math.exp(-(r + 1) / (lam + 1))
    mean = base * (lam / (lam + 1)) ** r * e
    g = e / math.factorial(r + 1)
    var = (
        g * (lam * (r + 1) / (lam + 1)) ** r * (1 - g * ((r + 1) / (lam + 1)) ** r)
        - lam * (g * (lam * r - 1) / (lam + 1)) ** 2 * (lam * (r + 1) ** 2 / (lam + 1) ** 2) ** r
    )
    return mean, var


def _negmulti(r, lam, alpha):
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)")
    d = alpha / (lam * (1 - alpha))
    g = d**r * math.exp(-d) / math.factorial(r)
    mean = lam * g
    var = lam * g * (1 - g * (1 - lam * (r - d) ** 2))
    return mean, var


def _dirichlet(r, lam, a, beta):
    if a <= 0 or beta <= 0:
        raise DomainError("a and beta must be positive")
    g = math.exp(math.lgamma(r + a) - math.lgamma(a) - math.lgamma(r + 1)) * beta**a / (1 + beta) ** (a + r)
    mean = lam * g
    var = lam * g * (1 - g * (1 + lam * ((a + r) ** 2 / (beta + 1) - a**2 / beta - r**2)))
    return mean, var


def asymptotic_constants(family: str, r: int, lam: float, **extra) -> AsymptoticConstants:
    """Limiting scaled mean and variance for ``family`` at ratio ``lam``.

    ``extra`` carries ``alpha`` (limit of ``N p_n``) for the negative
    multinomial scheme and ``a``, ``beta`` (limit of ``b_n / n``) for the
    Dirichlet scheme.
    """
    lam = float(lam)
    if r < 0:
        raise DomainError("r must be non-negative")
    if not lam > 0:
        raise DomainError("lam must be positive")
    tilde = None
    if family in S.GAS:
        fn = {
            S.GAS_INDISTINCT: _indistinct,
            S.GAS_DISTINCT: _distinct,
            S.GAS_COLOURED: _distinct,
            S.GAS_FOREST: _forest,
        }[family]
        mean, var = fn(r, lam)
        if lam == math.inf and r <= 1:
            var = None
            tilde = _TILDE[family][r]
    elif family in S.GIAS:
        if lam == math.inf:
            raise DomainError(f"{family} constants need a finite lam")
        if family == S.GIAS_NEGMULTI:
            mean, var = _negmulti(r, lam, float(extra["alpha"]))
        else:
            mean, var = _dirichlet(r, lam, float(extra["a"]), float(extra["beta"]))
    else:
        raise DomainError(f"no occupancy constants for {family}")
    return AsymptoticConstants(family, r, lam, mean, var, tilde)


def mean_scale(family: str, n: int, N: int, r: int) -> float:
    """Factor turning ``E S`` into the quantity whose limit is ``mean_const``."""
    if family in S.GIAS:
        return 1 / n
    return N ** (r - 1) / n**r


def variance_scale(family: str, n: int, N: int, r: int, tilde: bool = False) -> float:
    if family in S.GIAS:
        return 1 / n
    if tilde:
        return N / n**2
    return N ** (r - 1) / n**r
