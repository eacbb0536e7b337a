"""Closed-form factorial moments ``c_k = E (S)_k`` for the ten schemes.

Every formula is written once against a small arithmetic interface with two
implementations: exact rationals (``gmpy2.mpq``) and mpmath floats at a
chosen precision.  The exact path is used whenever the closed form is a
finite product of rationals; the Dirichlet scheme with non-integer ``a``
needs log-gamma and always takes the float path.
"""

from __future__ import annotations

import math

import gmpy2
from gmpy2 import mpq

from .. import special
from ..exact import DomainError, falling_factorial, rising_factorial, to_rational
from . import spec as S
from .spec import SchemeSpec

# extra digits carried internally on the float path
GUARD_DIGITS = 30
_PRODUCT_LIMIT = 256


class _Exact:
    exact = True

    @staticmethod
    def num(x):
        return to_rational(x)

    @staticmethod
    def ff(x, k):
        return falling_factorial(to_rational(x), k)

    @staticmethod
    def rising(x, k):
        return rising_factorial(to_rational(x), k)

    @staticmethod
    def power(x, e):
        return to_rational(x) ** e

    @staticmethod
    def comb_ratio(a1, b1, a2, b2):
        return mpq(gmpy2.comb(a1, b1), gmpy2.comb(a2, b2))

    @staticmethod
    def gamma_ratio(x, y):
        raise DomainError("gamma ratios with non-integer shifts need the float path")


class _Float:
    exact = False

    def __init__(self, dps):
        self.dps = dps
        self.ctx = special.context(dps)

    def num(self, x):
        return special.mpf(x, self.ctx)

    def _lgamma(self, x):
        return special.log_gamma(x, self.dps)

    def ff(self, x, k):
        x = self.num(x)
        if k <= _PRODUCT_LIMIT:
            out = self.ctx.mpf(1)
            for j in range(k):
                out *= x - j
            return out
        if x == int(x) and 0 <= x < k:
            return self.ctx.mpf(0)
        if x - k + 1 <= 0:
            raise DomainError("falling factorial of a negative non-integer argument")
        return self.ctx.exp(self._lgamma(x + 1) - self._lgamma(x - k + 1))

    def rising(self, x, k):
        x = self.num(x)
        if k <= _PRODUCT_LIMIT:
            out = self.ctx.mpf(1)
            for j in range(k):
                out *= x + j
            return out
        return self.ctx.exp(self._lgamma(x + k) - self._lgamma(x))

    def power(self, x, e):
        x = self.num(x)
        if x == 0:
            return self.ctx.mpf(1 if e == 0 else 0)
        return self.ctx.power(x, e)

    def _lbinom(self, a, b):
        return self._lgamma(a + 1) - self._lgamma(b + 1) - self._lgamma(a - b + 1)

    def comb_ratio(self, a1, b1, a2, b2):
        if b1 < 0 or b1 > a1:
            return self.ctx.mpf(0)
        return self.ctx.exp(self._lbinom(a1, b1) - self._lbinom(a2, b2))

    def gamma_ratio(self, x, y):
        """``Gamma(x + y) / Gamma(y)``."""
        x, y = self.num(x), self.num(y)
        return self.ctx.exp(self._lgamma(x + y) - self._lgamma(y))


# -- per-family closed forms -------------------------------------------------

def _binomial(o, P, k):
    return o.ff(P["n"], k) * o.power(P["p"], k)


def _neg_binomial(o, P, k):
    p = o.num(P["p"])
    return o.rising(P["n"], k) * o.power((1 - p) / p, k)


def _hypergeometric(o, P, k):
    N, M, n = P["N"], P["M"], P["n"]
    if k > n:
        return o.num(0)
    return o.ff(n, k) * o.ff(N, k) / o.ff(N + M, k)


def _neg_hypergeometric(o, P, k):
    n = P["n"]
    if k > n:
        return o.num(0)
    a = o.num(P["alpha"]) * n
    b = o.num(P["beta"]) * n
    return o.ff(n, k) * o.rising(a, k) / o.rising(a + b, k)


def _gas_indistinct(o, P, k):
    n, N, r = P["n"], P["N"], P["r"]
    rest = n - r * k
    if k > N or rest < 0:
        return o.num(0)
    if k == N:
        # every box pinned at r; the product form degenerates to 0 here
        return o.ff(N, k) * o.comb_ratio(0, 0, n + N - 1, n) if rest == 0 else o.num(0)
    return o.ff(N, k) * o.ff(N - 1, k) * o.ff(n, r * k) / o.ff(n + N - 1, k * (r + 1))


def _gas_distinct(o, P, k):
    n, N, r = P["n"], P["N"], P["r"]
    rest = n - r * k
    if k > N or rest < 0:
        return o.num(0)
    num = o.ff(N, k) * o.ff(n, r * k) * o.power(1 - o.num(k) / N, rest)
    return num / (o.power(math.factorial(r), k) * o.power(N, r * k))


def _gas_coloured(o, P, k):
    n, N, M, r = P["n"], P["N"], P["M"], P["r"]
    rest = n - r * k
    if k > N or rest < 0 or r > M:
        return o.num(0)
    return o.ff(N, k) * o.power(math.comb(M, r), k) * o.comb_ratio((N - k) * M, rest, N * M, n)


def _gas_forest(o, P, k):
    n, N, r = P["n"], P["N"], P["r"]
    rest = n - r * k
    free = N - k
    if free < 0 or rest < 0:
        return o.num(0)
    # the remaining ``rest`` vertices hang off the ``free`` remaining roots
    if free == 0:
        tail = o.num(1 if rest == 0 else 0)
    else:
        tail = free * o.power(rest + free, rest - 1)
    head = o.ff(N, k) * o.ff(n, r * k) * o.power(r + 1, k * (r - 1))
    head = head / o.power(math.factorial(r), k)
    return head * tail / (N * o.power(N + n, n - 1))


def _gias_negmulti(o, P, k):
    n, N, r = P["n"], P["N"], P["r"]
    if k > N:
        return o.num(0)
    p = o.num(P["p"])
    B = (1 - N * p) / p  # N * beta_n
    return (
        o.ff(N, k)
        * o.rising(n + 1, r * k)
        / o.power(math.factorial(r), k)
        * o.power(B, n + 1)
        / o.power(B + k, n + 1 + r * k)
    )


def _gias_dirichlet(o, P, k):
    n, N, r = P["n"], P["N"], P["r"]
    if k > N:
        return o.num(0)
    a, b = P["a"], P["b"]
    head = o.ff(N, k) * o.rising(n + 1, r * k) / o.power(math.factorial(r), k)
    if o.exact:
        if a.denominator != 1:
            raise DomainError("exact Dirichlet moments need an integer a")
        ai = int(a)
        g = o.rising(b, k * ai) * o.power(o.rising(a, r), k) / o.rising(n + 1 + b, (r + ai) * k)
        return head * g
    g = o.gamma_ratio(k * o.num(a), b) / o.gamma_ratio((r + o.num(a)) * k, n + 1 + b)
    g *= o.power(o.gamma_ratio(r, a), k)
    return head * g


_FORMULAS = {
    S.BINOMIAL: _binomial,
    S.NEG_BINOMIAL: _neg_binomial,
    S.HYPERGEOMETRIC: _hypergeometric,
    S.NEG_HYPERGEOMETRIC: _neg_hypergeometric,
    S.GAS_INDISTINCT: _gas_indistinct,
    S.GAS_DISTINCT: _gas_distinct,
    S.GAS_COLOURED: _gas_coloured,
    S.GAS_FOREST: _gas_forest,
    S.GIAS_NEGMULTI: _gias_negmulti,
    S.GIAS_DIRICHLET: _gias_dirichlet,
}


def _ops(spec: SchemeSpec, dps):
    if dps is None and spec.is_exact:
        return _Exact()
    return _Float((dps or special.DEFAULT_DPS) + GUARD_DIGITS)


def factorial_moment(spec: SchemeSpec, k: int, dps: int | None = None):
    """``E (S)_k``: exact mpq when possible and ``dps`` is None, else an mpf.

    Passing ``dps`` forces the float path at (at least) that many digits.
    """
    if k < 0:
        raise DomainError("k must be non-negative")
    o = _ops(spec, dps)
    if k == 0:
        return o.num(1)
    return _FORMULAS[spec.family](o, spec.params, k)


def factorial_moments(spec: SchemeSpec, K: int, dps: int | None = None) -> list:
    """``[c_1, ..., c_K]`` sharing one arithmetic backend."""
    if K < 1:
        raise DomainError("K must be >= 1")
    o = _ops(spec, dps)
    f = _FORMULAS[spec.family]
    return [f(o, spec.params, k) for k in range(1, K + 1)]


def mean_and_variance(spec: SchemeSpec, dps: int | None = None):
    c1, c2 = factorial_moments(spec, 2, dps)
    return c1, c2 - c1 * c1 + c1


def is_exact(spec: SchemeSpec) -> bool:
    return spec.is_exact
