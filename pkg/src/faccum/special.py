"""Extended-precision log-gamma, digamma and Hurwitz tails.

All three use the same recipe: shift the argument upward by integer steps
until it is large, then sum the Stirling / Euler-Maclaurin asymptotic series
with exact Bernoulli numbers.  Working precision is a per-call value; the
mpmath contexts used here are created once per precision and never mutated
afterwards.
"""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath

from .exact import Rational, bernoulli

DEFAULT_DPS = 50


@lru_cache(maxsize=None)
def context(dps: int = DEFAULT_DPS):
    ctx = mpmath.MPContext()
    ctx.dps = dps
    return ctx


def mpf(x, ctx):
    """Convert ints, mpq/Fraction rationals, floats or strings to ``ctx.mpf``."""
    if isinstance(x, Rational) or hasattr(x, "denominator") and not isinstance(x, int):
        return ctx.mpf(int(x.numerator)) / int(x.denominator)
    if hasattr(x, "_mpf_"):
        return ctx.mpf(x)
    return ctx.mpf(x)


def _shift_target(ctx):
    # e^{-2 pi z} below 10^{-dps} once z exceeds ~ dps * ln(10) / (2 pi)
    return max(12, int(0.4 * ctx.dps) + 8)


@lru_cache(maxsize=None)
def _stirling_coeffs(dps, count):
    ctx = context(dps)
    return [mpf(bernoulli(2 * k) / (2 * k * (2 * k - 1)), ctx) for k in range(1, count + 1)]


def log_gamma(x, dps: int = DEFAULT_DPS):
    """``log Gamma(x)`` for real ``x > 0``."""
    ctx = context(dps)
    x = mpf(x, ctx)
    if x <= 0:
        raise ValueError("log_gamma is implemented for x > 0 only")
    target = _shift_target(ctx)
    shift = ctx.mpf(0)
    if x < target:
        prod = ctx.mpf(1)
        while x < target:
            prod *= x
            x += 1
        shift = ctx.ln(prod)
    eps = ctx.mpf(2) ** (-ctx.prec - 10)
    acc = (x - 0.5) * ctx.ln(x) - x + ctx.ln(2 * ctx.pi) / 2
    inv = 1 / x
    inv2 = inv * inv
    power = inv
    coeffs = _stirling_coeffs(dps, 4 * target + 40)
    for c in coeffs:
        term = c * power
        acc += term
        if abs(term) < eps * abs(acc):
            break
        power *= inv2
    return acc - shift


def digamma(x, dps: int = DEFAULT_DPS):
    """``Psi(x) = d/dx log Gamma(x)`` for real ``x > 0``."""
    ctx = context(dps)
    x = mpf(x, ctx)
    if x <= 0:
        raise ValueError("digamma is implemented for x > 0 only")
    target = _shift_target(ctx)
    shift = ctx.mpf(0)
    while x < target:
        shift += 1 / x
        x += 1
    eps = ctx.mpf(2) ** (-ctx.prec - 10)
    acc = ctx.ln(x) - 1 / (2 * x)
    inv2 = 1 / (x * x)
    power = inv2
    k = 1
    while True:
        term = mpf(bernoulli(2 * k), ctx) / (2 * k) * power
        acc -= term
        if abs(term) < eps * abs(acc) or k > 4 * target + 40:
            break
        power *= inv2
        k += 1
    return acc - shift


def hurwitz_tail(j: int, x, dps: int = DEFAULT_DPS):
    """``h_j(x) = sum_{k >= 1} (k + x)**-(j + 1)`` for ``x > -1``, ``j >= 1``."""
    if j < 1:
        raise ValueError("j must be >= 1")
    ctx = context(dps)
    s = j + 1
    z = mpf(x, ctx) + 1
    if z <= 0:
        raise ValueError("need x > -1")
    target = _shift_target(ctx) + s
    head = ctx.mpf(0)
    while z < target:
        head += z ** (-s)
        z += 1
    # Euler-Maclaurin for sum_{k >= 0} (z + k)**-s
    eps = ctx.mpf(2) ** (-ctx.prec - 10)
    acc = z ** (1 - s) / (s - 1) + z ** (-s) / 2
    rising = ctx.mpf(s)  # s (s+1) ... (s + 2k - 2)
    power = z ** (-s - 1)
    inv2 = 1 / (z * z)
    k = 1
    while True:
        term = mpf(bernoulli(2 * k), ctx) / math.factorial(2 * k) * rising * power
        acc += term
        if abs(term) < eps * abs(acc) or k > 4 * target + 40:
            break
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power *= inv2
        k += 1
    return head + acc
