"""Parameter regimes: how a scheme's parameters scale with ``n``.

A regime is a plain dict of family-specific knobs:

* binomial / neg-binomial: ``p``
* hypergeometric: ``N_ratio``, ``M_ratio`` (``N = ceil(N_ratio n)``)
* neg-hypergeometric: ``alpha``, ``beta``
* GAS families: ``r`` and either ``lam`` (``N = round(lam n)``) or
  ``N_power`` (``N = n**N_power``); coloured balls add ``M_ratio``
  (``M = max(n, ceil(M_ratio n))``, default ``M = n``)
* gias-negmulti: ``r``, ``lam``, ``alpha`` (``p = alpha / N``)
* gias-dirichlet: ``r``, ``lam``, ``a``, ``beta`` (``b = beta n``)
"""

from __future__ import annotations

import math

from ..exact import DomainError, to_rational
from . import spec as S
from .spec import SchemeSpec

DEFAULT_REGIMES = {
    S.BINOMIAL: {"p": "3/10"},
    S.NEG_BINOMIAL: {"p": "1/2"},
    S.HYPERGEOMETRIC: {"N_ratio": 2, "M_ratio": 3},
    S.NEG_HYPERGEOMETRIC: {"alpha": 1, "beta": 2},
    S.GAS_INDISTINCT: {"r": 2, "lam": 1},
    S.GAS_DISTINCT: {"r": 2, "lam": 1},
    S.GAS_COLOURED: {"r": 2, "lam": 1, "M_ratio": 1},
    S.GAS_FOREST: {"r": 2, "lam": 1},
    S.GIAS_NEGMULTI: {"r": 2, "lam": 1, "alpha": "1/2"},
    S.GIAS_DIRICHLET: {"r": 2, "lam": 1, "a": 1, "beta": 1},
}


def _boxes(n, reg):
    if "N_power" in reg:
        return int(n ** int(reg["N_power"]))
    lam = to_rational(reg.get("lam", 1))
    return max(1, int(round(lam * n)))


def lam_of(reg) -> float:
    """Limiting ratio ``N / n`` implied by a regime (``inf`` for powers > 1)."""
    if "N_power" in reg:
        return math.inf if int(reg["N_power"]) > 1 else 1.0
    return float(to_rational(reg.get("lam", 1)))


def spec_for_n(family: str, n: int, regime: dict | None = None) -> SchemeSpec:
    reg = {**DEFAULT_REGIMES.get(family, {}), **(regime or {})}
    if family not in S.FAMILIES:
        raise DomainError(f"unknown family {family!r}")
    if family in (S.BINOMIAL, S.NEG_BINOMIAL):
        return SchemeSpec(family, {"n": n, "p": reg["p"]})
    if family == S.HYPERGEOMETRIC:
        N = math.ceil(to_rational(reg["N_ratio"]) * n)
        M = math.ceil(to_rational(reg["M_ratio"]) * n)
        return SchemeSpec(family, {"N": N, "M": M, "n": n})
    if family == S.NEG_HYPERGEOMETRIC:
        return SchemeSpec(family, {"n": n, "alpha": reg["alpha"], "beta": reg["beta"]})
    r = int(reg.get("r", 2))
    N = _boxes(n, reg)
    if family == S.GAS_COLOURED:
        M = max(n, math.ceil(to_rational(reg.get("M_ratio", 1)) * n))
        return SchemeSpec(family, {"n": n, "N": N, "M": M, "r": r})
    if family in S.GAS:
        return SchemeSpec(family, {"n": n, "N": N, "r": r})
    if family == S.GIAS_NEGMULTI:
        return SchemeSpec(family, {"n": n, "N": N, "p": to_rational(reg["alpha"]) / N, "r": r})
    return SchemeSpec(
        family,
        {"n": n, "N": N, "a": reg["a"], "b": to_rational(reg["beta"]) * n, "r": r},
    )
