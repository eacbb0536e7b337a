"""CLT diagnostics through factorial cumulants.

For a scheme ``S_n`` with factorial moments ``c_k`` the factorial cumulants are
``f_j = f(c)_j`` and the ordinary cumulants are ``sum_j S2(J, j) f_j``.  The
standardized cumulant ``kappa_J`` divides that by ``Var**(J/2)``.  Numerators
stay exact on the rational path; only the final quotient is rounded.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import special
from .exact import DomainError, stirling2, to_rational
from .schemes.asymptotics import asymptotic_constants, mean_scale, variance_scale
from .schemes.decomposition import decomposition
from .schemes.moments import factorial_moments
from .schemes.regimes import DEFAULT_REGIMES, lam_of, spec_for_n
from .schemes.spec import SchemeSpec
from .transforms import f_map

# above this n the float path is cheaper than exact rationals
EXACT_N_LIMIT = 20_000
DEFAULT_DPS = 50
SLOPE_THRESHOLD = -0.25


@dataclass
class CumulantData:
    spec: SchemeSpec
    exact: bool
    dps: int
    c: list
    f: list
    mean: object
    variance: object

    def cumulant(self, J: int):
        return sum((stirling2(J, j) * self.f[j - 1] for j in range(1, J + 1)), 0 * self.f[0])

    def _ctx(self):
        return special.context(self.dps)

    def standardized(self, J: int):
        ctx = self._ctx()
        if J == 1:
            return ctx.mpf(0)
        if J == 2:
            return ctx.mpf(1)
        return special.mpf(self.cumulant(J), ctx) / self._var_pow(J)

    def _var_pow(self, J):
        ctx = self._ctx()
        v = special.mpf(self.variance, ctx)
        if not v > 0:
            raise DomainError("zero variance")
        return ctx.sqrt(v) ** J

    def scaled_factorial_cumulant(self, J: int):
        """``f_J / Var**(J/2)``."""
        return special.mpf(self.f[J - 1], self._ctx()) / self._var_pow(J)


def _working_dps(spec, J_max, dps):
    # cumulants cancel roughly J log10(E S) digits of the factorial moments
    return dps + int(J_max * math.log10(spec.n + 10)) + 10


def cumulant_data(spec: SchemeSpec, J_max: int, dps: int = DEFAULT_DPS, exact: bool | None = None) -> CumulantData:
    if J_max < 2:
        J_max = 2
    if exact is None:
        exact = spec.is_exact and spec.n <= EXACT_N_LIMIT
    if exact and not spec.is_exact:
        raise DomainError("this scheme has no exact factorial moments")
    c = factorial_moments(spec, J_max, None if exact else _working_dps(spec, J_max, dps))
    f = f_map(c, J_max)
    mean = c[0]
    variance = c[1] - c[0] * c[0] + c[0]
    return CumulantData(spec, exact, dps, c, f, mean, variance)


def standardized_cumulant(spec: SchemeSpec, J: int, dps: int = DEFAULT_DPS, exact: bool | None = None):
    """``kappa_{J,n}`` as an mpmath float (0 for J = 1, 1 for J = 2)."""
    if J < 1:
        raise DomainError("J must be >= 1")
    data = cumulant_data(spec, max(J, 2), dps, exact)
    if not special.mpf(data.variance, special.context(dps)) > 0:
        raise DomainError("zero variance")
    return data.standardized(J)


# -- trend fitting -------------------------------------------------------------

@dataclass
class Trend:
    name: str
    values: list
    slope: float | None
    monotone_decreasing: bool
    monotone_increasing: bool
    passing: bool

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "slope": self.slope,
            "monotone_decreasing": self.monotone_decreasing,
            "monotone_increasing": self.monotone_increasing,
            "passing": self.passing,
        }


def loglog_slope(ns, values) -> float | None:
    """Least-squares slope of ``log|v|`` against ``log n``; None if undefined."""
    pts = [(math.log(n), math.log(abs(v))) for n, v in zip(ns, values) if v != 0]
    if len(pts) < 2:
        return None
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0])


def _decay_trend(name, ns, values, threshold=SLOPE_THRESHOLD) -> Trend:
    vals = [float(v) for v in values]
    mags = [abs(v) for v in vals]
    slope = loglog_slope(ns, vals)
    dec = all(b < a for a, b in zip(mags, mags[1:]))
    inc = all(b > a for a, b in zip(mags, mags[1:]))
    # identically zero quantities trivially decay
    passing = all(v == 0 for v in vals) or (slope is not None and slope < threshold)
    return Trend(name, vals, slope, dec, inc, passing)


def _growth_trend(name, ns, values) -> Trend:
    vals = [float(v) for v in values]
    slope = loglog_slope(ns, vals)
    inc = all(b > a for a, b in zip(vals, vals[1:]))
    dec = all(b < a for a, b in zip(vals, vals[1:]))
    return Trend(name, vals, slope, dec, inc, inc and slope is not None and slope > 0)


# -- condition report -------------------------------------------------------------

@dataclass
class GridPoint:
    n: int
    spec: SchemeSpec
    exact: bool
    mean: float
    variance: float
    kappa: dict
    war2: float
    fJc: dict
    ln0: dict

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "spec": self.spec.to_dict(),
            "exact": self.exact,
            "mean": self.mean,
            "variance": self.variance,
            "kappa": {str(J): v for J, v in self.kappa.items()},
            "war2": self.war2,
            "fJc": {str(J): v for J, v in self.fJc.items()},
            "ln0": {str(J): v for J, v in self.ln0.items()},
        }


@dataclass
class DiagnosticsReport:
    n_grid: list
    J_max: int
    points: list = field(default_factory=list)
    trends: dict = field(default_factory=dict)

    @property
    def flags(self) -> dict:
        out = {"war1": self.trends["war1"].passing, "war2": self.trends["war2"].passing}
        out["fJc"] = all(t.passing for k, t in self.trends.items() if k.startswith("fJc"))
        ln0 = [t for k, t in self.trends.items() if k.startswith("ln0")]
        out["ln0"] = all(t.passing for t in ln0) if ln0 else None
        return out

    @property
    def ok(self) -> bool:
        return all(v is not False for v in self.flags.values())

    def to_json(self) -> dict:
        return {
            "n_grid": list(self.n_grid),
            "J_max": self.J_max,
            "flags": self.flags,
            "ok": self.ok,
            "trends": {k: t.to_json() for k, t in self.trends.items()},
            "points": [p.to_json() for p in self.points],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "J", "mean", "variance", "kappa", "fJc", "ln0", "war2"])
        for p in self.points:
            for J in range(3, self.J_max + 1):
                w.writerow([
                    p.n, J, _fmt(p.mean), _fmt(p.variance), _fmt(p.kappa.get(J)),
                    _fmt(p.fJc.get(J)), _fmt(p.ln0.get(J)), _fmt(p.war2),
                ])
        return buf.getvalue()


def _fmt(x):
    return "" if x is None else format(float(x), ".17g")


def _L_n(spec):
    try:
        return decomposition(spec, 0).L_n
    except DomainError:
        return None


def condition_report(specs: list, J_max: int = 6, dps: int = DEFAULT_DPS, n_grid=None) -> DiagnosticsReport:
    """Evaluate the CLT conditions on a grid of specs ordered by ``n``.

    ``n_grid`` labels the grid points when it differs from the specs' own
    ``n`` (e.g. a spec held fixed while the index grows).
    """
    if not specs:
        raise DomainError("empty grid")
    if J_max < 3:
        raise DomainError("J_max must be >= 3")
    ns = [s.n for s in specs] if n_grid is None else [int(x) for x in n_grid]
    if len(ns) != len(specs):
        raise DomainError("n_grid and specs differ in length")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("grid must be strictly increasing in n")
    ctx = special.context(dps)
    report = DiagnosticsReport(ns, J_max)
    for n_label, spec in zip(ns, specs):
        data = cumulant_data(spec, J_max, dps)
        var = special.mpf(data.variance, ctx)
        if not var > 0:
            raise DomainError(f"zero variance at n={spec.n}")
        mean = special.mpf(data.mean, ctx)
        kappa = {J: float(data.standardized(J)) for J in range(3, J_max + 1)}
        fJc = {J: float(data.scaled_factorial_cumulant(J)) for J in range(3, J_max + 1)}
        L = _L_n(spec)
        ln0 = {}
        if L is not None:
            L = special.mpf(L, ctx)
            for J in range(3, J_max + 1):
                ln0[J] = float(L**J / (ctx.mpf(spec.n) ** (J - 1) * ctx.sqrt(var) ** J))
        report.points.append(GridPoint(
            n_label, spec, data.exact, float(mean), float(var), kappa,
            float(mean / ctx.sqrt(var) ** 3), fJc, ln0,
        ))
    pts = report.points
    report.trends["war1"] = _growth_trend("war1", ns, [p.variance for p in pts])
    report.trends["war2"] = _decay_trend("war2", ns, [p.war2 for p in pts])
    for J in range(3, J_max + 1):
        report.trends[f"kappa{J}"] = _decay_trend(f"kappa{J}", ns, [p.kappa[J] for p in pts])
        report.trends[f"fJc{J}"] = _decay_trend(f"fJc{J}", ns, [p.fJc[J] for p in pts])
        if all(J in p.ln0 for p in pts):
            report.trends[f"ln0{J}"] = _decay_trend(f"ln0{J}", ns, [p.ln0[J] for p in pts])
    return report


def grid_specs(family: str, grid, regime: dict | None = None) -> list:
    return [spec_for_n(family, int(n), regime) for n in grid]


# -- comparison with limiting constants -----------------------------------------

@dataclass
class LimitRow:
    n: int
    N: int
    scaled_mean: float
    scaled_variance: float
    mean_const: float
    var_const: float
    mean_rel_error: float
    var_rel_error: float
    tilde: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def normal_limit_check(family: str, grid, r: int, lam=None, regime: dict | None = None, dps: int = DEFAULT_DPS) -> list:
    """Scaled exact mean and variance against the limiting constants.

    ``regime`` uses the keys of :func:`faccum.schemes.spec_for_n`; ``lam`` and
    ``r`` override it.  At ``lam = inf`` with ``r`` in {0, 1} the variance is
    scaled by ``N / n**2`` and compared with sigma-tilde.
    """
    reg = dict(regime or {})
    reg["r"] = r
    if lam is not None:
        if lam == math.inf:
            reg.setdefault("N_power", 2)
        else:
            reg["lam"] = lam
    lam_val = lam_of(reg)
    extra = {k: _as_float(reg[k]) for k in ("alpha", "a", "beta") if k in reg}
    consts = asymptotic_constants(family, r, lam_val, **_defaults(family, extra))
    tilde = consts.var_const is None
    ctx = special.context(dps)
    rows = []
    for n in grid:
        spec = spec_for_n(family, int(n), reg)
        N = spec.params.get("N", n)
        data = cumulant_data(spec, 2, dps)
        m, v = data.mean, data.variance
        sm = float(special.mpf(m, ctx)) * mean_scale(family, n, N, r)
        sv = float(special.mpf(v, ctx)) * variance_scale(family, n, N, r, tilde)
        vc = consts.tilde_var_const if tilde else consts.var_const
        rows.append(LimitRow(
            int(n), int(N), sm, sv, consts.mean_const, vc,
            abs(sm / consts.mean_const - 1), abs(sv / vc - 1), tilde,
        ))
    return rows


def _as_float(x):
    return float(to_rational(x))


def _defaults(family, extra):
    out = {}
    for k in ("alpha", "a", "beta"):
        if k in DEFAULT_REGIMES.get(family, {}):
            out[k] = _as_float(DEFAULT_REGIMES[family][k])
    out.update(extra)
    return out
