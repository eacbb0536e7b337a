"""Brute-force oracles: joint pmfs summed over small supports.

These are deliberately naive and independent of the closed forms in
``moments``; tests compare the two exactly.
"""

from __future__ import annotations

import math
from collections import Counter

from gmpy2 import mpq

from ..exact import DomainError, falling_factorial, rising_factorial, to_rational
from . import spec as S
from .spec import SchemeSpec


def compositions(n: int, N: int):
    """All ``(k_1, ..., k_N)`` of non-negative integers summing to ``n``."""
    if N == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, N - 1):
            yield (first,) + rest


def bounded_vectors(N: int, total_max: int):
    """Vectors of length ``N`` with entries >= 0 and sum <= ``total_max``."""
    for t in range(total_max + 1):
        yield from compositions(t, N)


def _multinomial(ks):
    out = math.factorial(sum(ks))
    for k in ks:
        out //= math.factorial(k)
    return out


# -- GAS joint laws ---------------------------------------------------------

def pmf_indistinct(ks, N):
    return mpq(1, math.comb(sum(ks) + N - 1, sum(ks)))


def pmf_distinct(ks, N):
    return mpq(_multinomial(ks), N ** sum(ks))


def pmf_coloured(ks, N, M):
    num = 1
    for k in ks:
        num *= math.comb(M, k)
    return mpq(num, math.comb(N * M, sum(ks)))


def pmf_forest(ks, N):
    """Uniform forest on N roots and n non-root vertices, trees of sizes ``ks``.

    ``n! / prod k_i! * prod (k_i + 1)**(k_i - 1) / (N (N + n)**(n - 1))``.
    """
    n = sum(ks)
    num = _multinomial(ks)
    for k in ks:
        num *= mpq(k + 1) ** (k - 1)
    return num / (N * mpq(N + n) ** (n - 1))


def forest_marginal(ks, N, n):
    """Law of the first ``i = len(ks)`` tree sizes in the uniform forest."""
    i = len(ks)
    rest = n - sum(ks)
    if rest < 0 or i > N:
        return mpq(0)
    free = N - i
    if free == 0:
        tail = mpq(1 if rest == 0 else 0)
    else:
        tail = free * mpq(rest + free) ** (rest - 1)
    num = mpq(math.factorial(n), math.factorial(rest))
    for k in ks:
        num = num / math.factorial(k) * mpq(k + 1) ** (k - 1)
    return num * tail / (N * mpq(N + n) ** (n - 1))


def abel_sum(m: int, s: int):
    """Both sides of ``s sum_k C(m,k) (k+1)^(k-1) (m-k+s)^(m-k-1) = (s+1)(m+1+s)^(m-1)``."""
    lhs = mpq(0)
    for k in range(m + 1):
        lhs += math.comb(m, k) * mpq(k + 1) ** (k - 1) * mpq(m - k + s) ** (m - k - 1)
    return s * lhs, (s + 1) * mpq(m + 1 + s) ** (m - 1)


def gas_joint_pmf(spec: SchemeSpec):
    """``{(k_1..k_N): probability}`` over the full support of a GAS scheme."""
    P = spec.params
    n, N = P["n"], P["N"]
    out = {}
    for ks in compositions(n, N):
        if spec.family == S.GAS_INDISTINCT:
            pr = pmf_indistinct(ks, N)
        elif spec.family == S.GAS_DISTINCT:
            pr = pmf_distinct(ks, N)
        elif spec.family == S.GAS_COLOURED:
            if max(ks) > P["M"]:
                continue
            pr = pmf_coloured(ks, N, P["M"])
        elif spec.family == S.GAS_FOREST:
            pr = pmf_forest(ks, N)
        else:
            raise DomainError(f"{spec.family} is not a GAS family")
        out[ks] = pr
    return out


# -- GIAS joint laws (infinite support, truncated) ------------------------------

def pmf_negmulti(ks, n, N, p):
    t = sum(ks)
    return _multinomial((n,) + tuple(ks)) * p**t * (1 - N * p) ** (n + 1)


def pmf_dirichlet(ks, n, N, a, b):
    """Rational a, b: all gamma ratios reduce to rising factorials."""
    t = sum(ks)
    out = mpq(_multinomial((n,) + tuple(ks)))
    out *= rising_factorial(b, n + 1)
    for k in ks:
        out *= rising_factorial(a, k)
    return out / rising_factorial(N * a + b, n + 1 + t)


def gias_truncated_pmf(spec: SchemeSpec, total_max: int):
    P = spec.params
    n, N = P["n"], P["N"]
    out = {}
    for ks in bounded_vectors(N, total_max):
        if spec.family == S.GIAS_NEGMULTI:
            out[ks] = pmf_negmulti(ks, n, N, P["p"])
        elif spec.family == S.GIAS_DIRICHLET:
            out[ks] = pmf_dirichlet(ks, n, N, P["a"], P["b"])
        else:
            raise DomainError(f"{spec.family} is not a GIAS family")
    return out


# -- classical laws of S itself ----------------------------------------------

def classical_pmf(spec: SchemeSpec, k_max: int | None = None):
    """``{s: P(S = s)}``; the negative binomial is cut at ``k_max``."""
    P = spec.params
    f = spec.family
    if f == S.BINOMIAL:
        n, p = P["n"], P["p"]
        return {s: math.comb(n, s) * p**s * (1 - p) ** (n - s) for s in range(n + 1)}
    if f == S.NEG_BINOMIAL:
        n, p = P["n"], P["p"]
        if k_max is None:
            raise DomainError("negative binomial support is infinite; give k_max")
        return {s: math.comb(n + s - 1, s) * (1 - p) ** s * p**n for s in range(k_max + 1)}
    if f == S.HYPERGEOMETRIC:
        N, M, n = P["N"], P["M"], P["n"]
        tot = math.comb(N + M, n)
        return {s: mpq(math.comb(N, s) * math.comb(M, n - s), tot) for s in range(n + 1)}
    if f == S.NEG_HYPERGEOMETRIC:
        n = P["n"]
        a, b = P["alpha"] * n, P["beta"] * n
        den = rising_factorial(a + b, n)
        return {
            s: math.comb(n, s) * rising_factorial(a, s) * rising_factorial(b, n - s) / den
            for s in range(n + 1)
        }
    raise DomainError(f"{f} is not a classical family")


# -- factorial moments from a pmf ------------------------------------------------

def occupancy(ks, r):
    return sum(1 for k in ks if k == r)


def statistic_law(joint: dict, r: int) -> dict:
    """Law of ``S = #{i : k_i = r}`` under a joint pmf."""
    law = Counter()
    for ks, pr in joint.items():
        law[occupancy(ks, r)] += pr
    return dict(law)


def factorial_moments_from_law(law: dict, K: int) -> list:
    return [sum((pr * falling_factorial(s, k) for s, pr in law.items()), mpq(0)) for k in range(1, K + 1)]


def oracle_factorial_moments(spec: SchemeSpec, K: int, total_max: int | None = None) -> list:
    """Factorial moments by exhaustive summation (truncated for infinite laws)."""
    if spec.family in S.CLASSICAL:
        law = classical_pmf(spec, total_max)
    elif spec.family in S.GAS:
        law = statistic_law(gas_joint_pmf(spec), spec.r)
    else:
        if total_max is None:
            raise DomainError("GIAS support is infinite; give total_max")
        law = statistic_law(gias_truncated_pmf(spec, total_max), spec.r)
    return factorial_moments_from_law(law, K)


def total_mass(joint: dict):
    return sum(joint.values(), mpq(0))


__all__ = [
    "compositions",
    "bounded_vectors",
    "gas_joint_pmf",
    "gias_truncated_pmf",
    "classical_pmf",
    "forest_marginal",
    "abel_sum",
    "statistic_law",
    "factorial_moments_from_law",
    "oracle_factorial_moments",
    "total_mass",
    "to_rational",
]
