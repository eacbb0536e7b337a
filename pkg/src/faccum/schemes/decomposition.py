"""Factorial moments written as ``c_k = L**k * exp(sum_j Q_{j+1}(k) / (j n**j))``.

Each family's ``Q_{j+1}`` is a short sum of terms of three shapes:

* ``w_j * PS_{j+1}(a i + b)`` with ``PS`` the power-sum polynomial,
* ``w_j * i**(j+1)``,
* ``w_j * i**j``,

where the weight ``w_j`` depends on ``j`` and the scheme parameters.  Two
families need corrections against the commonly printed forms:

* forests: the monomial weight is ``(r - j(r+1)(n-1)/((j+1)(n+N))) *
  (n(r+1)/(n+N))**j`` (the outer power uses ``n``, not ``n-1``);
* negative multinomial: the lone linear term ``-n i / (N beta)`` belongs to
  ``Q_2`` only.

Both are confirmed by ``decomposition_residual``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from gmpy2 import mpq

from .. import special
from ..exact import DomainError, power_sum_coefficients
from . import spec as S
from .moments import factorial_moment
from .spec import SchemeSpec

POWER_SUM = "power-sum"
MONO_NEXT = "i^(j+1)"
MONO_SAME = "i^j"


@dataclass(frozen=True)
class Term:
    shape: str
    weight: object  # callable j -> number
    a: int = 1
    b: int = 0
    # |w_j * shape(i)| <= (bound * i)**(j+1) for all i >= 1, j >= 1
    bound: float = 1.0

    def coefficients(self, j: int) -> list:
        w = self.weight(j)
        if self.shape == POWER_SUM:
            return [w * c for c in _shifted_power_sum(j, self.a, self.b)]
        deg = j + 1 if self.shape == MONO_NEXT else j
        return [0] * deg + [w]


def _shifted_power_sum(j, a, b):
    """Coefficients in ``i`` of ``PS_{j+1}(a i + b)``."""
    base = power_sum_coefficients(j)
    out = [mpq(0)] * (j + 2)
    for l, c in enumerate(base):
        if c == 0:
            continue
        for m in range(l + 1):
            out[m] += c * math.comb(l, m) * a**m * b ** (l - m)
    return out


def _add(p, q, ctx):
    out = list(p) + [0] * (len(q) - len(p))
    for i, c in enumerate(q):
        a = out[i]
        if hasattr(a, "_mpf_") != hasattr(c, "_mpf_"):
            a, c = special.mpf(a, ctx), special.mpf(c, ctx)
        out[i] = a + c
    return out


def _ps_bound(coef_base, a, b):
    # PS_{j+1}(m) <= m**(j+1) for integer m >= 0, and a i + b <= (a + b) i
    return max(1.0, abs(float(coef_base))) * (a + b)


@dataclass
class DecompositionData:
    spec: SchemeSpec
    L_n: object
    log_L_n: object
    Q: dict = field(default_factory=dict)  # j -> coefficients of Q_{j+1}, lowest first
    C_bound: float = 1.0
    dps: int = special.DEFAULT_DPS
    terms: tuple = ()

    def Q_value(self, j: int, i):
        acc = 0
        for c in reversed(self.Q[j]):
            acc = acc * i + c
        return acc

    def to_json(self) -> dict:
        def enc(x):
            if hasattr(x, "denominator") and not isinstance(x, int):
                return {"num": str(x.numerator), "den": str(x.denominator)}
            if isinstance(x, int):
                return {"num": str(x), "den": "1"}
            return special.context(self.dps).nstr(x, 17)

        return {
            "spec": self.spec.to_dict(),
            "L_n": enc(self.L_n),
            "C_bound": self.C_bound,
            "Q": {str(j + 1): [enc(c) for c in cs] for j, cs in sorted(self.Q.items())},
        }


def _terms(spec: SchemeSpec, ctx):
    """Return ``(L, log L, terms)`` for ``spec``; L may be exact or mpf."""
    P = spec.params
    f = spec.family
    n = P["n"]
    mp = lambda x: special.mpf(x, ctx)  # noqa: E731

    if f == S.BINOMIAL:
        L = n * P["p"]
        return L, ctx.ln(mp(L)), [Term(POWER_SUM, lambda j: -1)]
    if f == S.NEG_BINOMIAL:
        p = P["p"]
        L = n * (1 - p) / p
        return L, ctx.ln(mp(L)), [Term(POWER_SUM, lambda j: (-1) ** (j + 1))]
    if f == S.HYPERGEOMETRIC:
        N, M = P["N"], P["M"]
        x, y = mpq(n, N), mpq(n, N + M)
        L = mpq(n * N, N + M)
        w = lambda j: -1 - x**j + y**j  # noqa: E731
        return L, ctx.ln(mp(L)), [Term(POWER_SUM, w, bound=1 + float(x) + float(y))]
    if f == S.NEG_HYPERGEOMETRIC:
        al, be = P["alpha"], P["beta"]
        L = n * al / (al + be)
        w = lambda j: -1 - (-1) ** j / al**j + (-1) ** j / (al + be) ** j  # noqa: E731
        return L, ctx.ln(mp(L)), [Term(POWER_SUM, w, bound=1 + float(1 / al) + float(1 / (al + be)))]

    r = P["r"]
    if f == S.GAS_INDISTINCT:
        N = P["N"]
        if N < 2:
            raise DomainError("the decomposition needs N >= 2")
        x1, x2, x3 = mpq(n, N), mpq(n, N - 1), mpq(n, n + N - 1)
        L = mpq(N * (N - 1) * n**r, (n + N - 1) ** (r + 1))
        terms = [
            Term(POWER_SUM, lambda j: -(x1**j) - x2**j, bound=2 * max(1.0, float(x2))),
            Term(POWER_SUM, lambda j: -1, a=r, bound=r),
            Term(POWER_SUM, lambda j: x3**j, a=r + 1, bound=_ps_bound(x3, r + 1, 0)),
        ]
        return L, ctx.ln(mp(L)), terms
    if f == S.GAS_DISTINCT:
        N = P["N"]
        x = mpq(n, N)
        logL = r * ctx.ln(n) - mp(x) - ctx.ln(math.factorial(r)) - (r - 1) * ctx.ln(N)
        terms = [
            Term(MONO_NEXT, lambda j: (r - mpq(j, j + 1) * x) * x**j, bound=max(1.0, r + float(x)) * max(1.0, float(x))),
            Term(POWER_SUM, lambda j: -(x**j), bound=_ps_bound(x, 1, 0)),
            Term(POWER_SUM, lambda j: -1, a=r, bound=r),
        ]
        return ctx.exp(logL), logL, terms
    if f == S.GAS_COLOURED:
        N, M = P["N"], P["M"]
        NM = N * M
        if n >= NM:
            raise DomainError("the decomposition needs n < N M")
        x1, x2, x3 = mpq(n, NM), mpq(n, NM - n), mpq(n, N)
        logL = (
            ctx.ln(N) + r * ctx.ln(n) + ctx.ln(math.comb(M, r))
            + M * ctx.ln(mp(1 - x1)) - r * ctx.ln(NM - n)
        )
        terms = [
            Term(POWER_SUM, lambda j: x1**j, a=M, bound=_ps_bound(x1, M, 0)),
            Term(POWER_SUM, lambda j: -(x2**j), a=M - r, bound=_ps_bound(x2, M - r, 0)),
            Term(POWER_SUM, lambda j: -(x3**j), bound=_ps_bound(x3, 1, 0)),
            Term(POWER_SUM, lambda j: -1, a=r, bound=r),
        ]
        return ctx.exp(logL), logL, terms
    if f == S.GAS_FOREST:
        N = P["N"]
        u = mpq(r + 1, n + N)
        x = mpq(n, N)
        logL = (
            ctx.ln(N) + (r - 1) * ctx.ln(r + 1) - ctx.ln(math.factorial(r))
            + r * ctx.ln(mp(mpq(n, n + N))) - mp((n - 1) * u)
        )
        c0 = float((n - 1) * u)
        terms = [
            Term(
                MONO_NEXT,
                lambda j: (r - mpq(j, j + 1) * (n - 1) * u) * (n * u) ** j,
                bound=max(1.0, r + c0) * max(1.0, float(n * u)),
            ),
            Term(POWER_SUM, lambda j: -(x**j), a=1, b=1, bound=_ps_bound(x, 1, 1)),
            Term(POWER_SUM, lambda j: -1, a=r, bound=r),
        ]
        return ctx.exp(logL), logL, terms
    if f == S.GIAS_NEGMULTI:
        N, p = P["N"], P["p"]
        B = (1 - N * p) / p  # N beta_n
        y = -n / B
        x = mpq(n, N)
        logL = r * ctx.ln(n) - mp(n / B) - ctx.ln(math.factorial(r)) + ctx.ln(N) - r * ctx.ln(mp(B))
        terms = [
            Term(MONO_SAME, lambda j: y if j == 1 else 0, bound=max(1.0, abs(float(y)))),
            Term(
                MONO_NEXT,
                lambda j: (r - mpq(j, j + 1) * (n + 1) / B) * y**j,
                bound=max(1.0, r + float((n + 1) / B)) * max(1.0, abs(float(y))),
            ),
            Term(POWER_SUM, lambda j: (-1) ** (j + 1), a=r, b=1, bound=r + 1),
            Term(POWER_SUM, lambda j: -(x**j), bound=_ps_bound(x, 1, 0)),
        ]
        return ctx.exp(logL), logL, terms
    if f == S.GIAS_DIRICHLET:
        N, a, b = P["N"], P["a"], P["b"]
        dps = ctx.dps
        am, bm = mp(a), mp(b)
        logL = (
            ctx.ln(N) + special.log_gamma(r + am, dps) - special.log_gamma(am, dps)
            + r * ctx.ln(n) - ctx.ln(math.factorial(r))
            + am * special.digamma(1 + bm, dps) - (r + am) * special.digamma(2 + n + bm, dps)
        )
        s1 = mp(n * (r + a) / (b + n + 1))
        s2 = mp(n * a / b)
        h_hi = {}
        h_lo = {}

        def h(j, arg, cache):
            if j not in cache:
                cache[j] = special.hurwitz_tail(j, arg, dps)
            return cache[j]

        ra = r + am
        x = mpq(n, N)
        terms = [
            Term(MONO_SAME, lambda j: (-1) ** (j + 1) * (s1**j - s2**j), bound=max(1.0, float(s1)) + max(1.0, float(s2))),
            Term(
                MONO_NEXT,
                lambda j: mp(j * (-n) ** j) / (j + 1)
                * (ra ** (j + 1) * h(j, bm + n + 1, h_hi) - am ** (j + 1) * h(j, bm, h_lo)),
                bound=max(1.0, float(ra)) * max(1.0, float(ra) * n / float(b + n + 1))
                + max(1.0, float(a)) * max(1.0, float(a) * n / float(b)),
            ),
            Term(POWER_SUM, lambda j: (-1) ** (j + 1), a=r, b=1, bound=r + 1),
            Term(POWER_SUM, lambda j: -(x**j), bound=_ps_bound(x, 1, 0)),
        ]
        return ctx.exp(logL), logL, terms
    raise DomainError(f"unknown family {f!r}")


def decomposition(spec: SchemeSpec, j_max: int, dps: int = special.DEFAULT_DPS) -> DecompositionData:
    """``L_n``, the ``Q_{j+1}`` coefficient tables for ``j <= j_max`` and ``C_bound``."""
    if j_max < 0:
        raise DomainError("j_max must be >= 0")
    if j_max > 200:
        raise DomainError("j_max beyond 200 exceeds the precision budget")
    ctx = special.context(dps)
    L, logL, terms = _terms(spec, ctx)
    Q = {}
    for j in range(1, j_max + 1):
        poly = [0]
        for t in terms:
            poly = _add(poly, t.coefficients(j), ctx)
        Q[j] = poly
    C = sum(t.bound for t in terms)
    return DecompositionData(spec, L, logL, Q, float(C), dps, tuple(terms))


def decomposition_residual(spec: SchemeSpec, k_max: int, j_trunc: int, dps: int = special.DEFAULT_DPS) -> float:
    """``max_k |log c_k - k log L - sum_{j <= j_trunc} Q_{j+1}(k) / (j n**j)|``."""
    if j_trunc < 0 or k_max < 1:
        raise DomainError("need k_max >= 1 and j_trunc >= 0")
    ctx = special.context(dps)
    data = decomposition(spec, j_trunc, dps)
    n = spec.n
    worst = ctx.mpf(0)
    for k in range(1, k_max + 1):
        c = special.mpf(factorial_moment(spec, k, dps=dps), ctx)
        if not c > 0:
            raise DomainError(f"c_{k} = {c} is not positive; log undefined")
        series = ctx.mpf(0)
        for j in range(1, j_trunc + 1):
            series += special.mpf(data.Q_value(j, k), ctx) / (j * ctx.mpf(n) ** j)
        worst = max(worst, abs(ctx.ln(c) - k * data.log_L_n - series))
    return float(worst)
