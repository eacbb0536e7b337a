"""Acceptance criteria 1-10.

Each test prints one ``criterion N: PASS|FAIL`` line (visible without ``-s``)
and then asserts.  Run with ``pytest -s tests/test_acceptance.py`` to see the
lines on their own.
"""

import math
import random
import time

import pytest
from gmpy2 import mpq

from faccum.diagnostics import condition_report, grid_specs, normal_limit_check
from faccum.exact import enumerate_partitions, partition_coefficient
from faccum.identity import stanley_check, verify_boundary_nonvanishing, verify_vanishing_region
from faccum.schemes import FAMILIES, SchemeSpec, factorial_moments, spec_for_n
from faccum.schemes import spec as S
from faccum.schemes.decomposition import decomposition_residual
from faccum.schemes.enumeration import gas_joint_pmf, oracle_factorial_moments, total_mass
from faccum.simulate import empirical_correlation, empirical_factorial_moment, ks_to_normal, simulate
from faccum.transforms import (
    CUMULANT,
    FACTORIAL,
    FACTORIAL_CUMULANT,
    RAW,
    MomentSequence,
    convert,
    cumulants_via_partitions,
    poisson_factorial_moments,
)


@pytest.fixture
def report(capsys):
    t0 = time.perf_counter()

    def emit(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({time.perf_counter() - t0:.1f}s) {detail}"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return emit


def test_criterion_01_partition_coefficients_vanish(report):
    sums = {J: sum((partition_coefficient(p) for p in enumerate_partitions(J)), mpq(0)) for J in range(2, 13)}
    bad = {J: s for J, s in sums.items() if s != 0}
    report(1, not bad, f"sum of D_pi over partitions of J=2..12; nonzero at {sorted(bad)}")


def test_criterion_02_identity_vanishing_region(report):
    rep = verify_vanishing_region(10, 3)
    report(2, rep.ok and rep.checked > 0, f"{rep.checked} cases, {len(rep.violations)} nonzero")


def test_criterion_03_boundary_sharpness(report):
    rep = verify_boundary_nonvanishing(8, 2)
    stirling_bad = []
    for J in range(2, 9):
        for s1 in range(1, 15):
            lhs, rhs = stanley_check(J, s1)
            if lhs != rhs:
                stirling_bad.append((J, s1))
    ok = not rep.missing_nonzero and not rep.violations and not stirling_bad
    report(
        3, ok,
        f"{rep.checked} boundary cases, (J,I) without nonzero case: {rep.missing_nonzero}; "
        f"I=1 mismatches with J!*S2(s1,J), s1<=14: {stirling_bad}",
    )


def test_criterion_04_transform_routes(report):
    rng = random.Random(20240601)
    mismatches = 0
    for _ in range(200):
        K = rng.randint(1, 8)
        vals = [mpq(rng.randint(-60, 60), rng.randint(1, 40)) for _ in range(K)]
        for kind, target in ((RAW, CUMULANT), (FACTORIAL, FACTORIAL_CUMULANT)):
            seq = MomentSequence(kind, vals)
            rec = convert(seq, target).values
            part = [cumulants_via_partitions(seq, J) for J in range(1, K + 1)]
            mismatches += list(rec) != part
        fac = MomentSequence(FACTORIAL, vals)
        mismatches += list(convert(convert(fac, RAW), CUMULANT).values) != list(convert(fac, CUMULANT).values)
    poisson_bad = []
    for lam in (mpq(1, 3), mpq(2), mpq(17, 5)):
        d = convert(poisson_factorial_moments(lam, 8), FACTORIAL_CUMULANT).values
        if d[0] != lam or any(x != 0 for x in d[1:]):
            poisson_bad.append(lam)
    report(4, mismatches == 0 and not poisson_bad,
           f"200 sequences, {mismatches} route mismatches; Poisson f_J != 0 for J>=2 at {poisson_bad}")


def test_criterion_05_enumeration_oracles(report):
    checked, bad, mass_bad = 0, [], []
    for fam in S.GAS:
        for n in range(1, 6):
            for N in range(1, 5):
                for M in ((1, 2, 3, 4) if fam == S.GAS_COLOURED else (None,)):
                    if M is not None and M < n:
                        continue
                    for r in range(0, n + 1):
                        params = {"n": n, "N": N, "r": r}
                        if M is not None:
                            params["M"] = M
                        sp = SchemeSpec(fam, params)
                        if total_mass(gas_joint_pmf(sp)) != 1:
                            mass_bad.append(params)
                        K = N + 1
                        if factorial_moments(sp, K) != oracle_factorial_moments(sp, K):
                            bad.append((fam, params))
                        checked += 1
    report(5, not bad and not mass_bad,
           f"{checked} specs, moment mismatches {bad[:3]}, pmf mass != 1 {mass_bad[:3]}")


def test_criterion_06_asymptotic_constants(report):
    n = 10**4
    finite = [
        ("gas-indistinct", 2, {}),
        ("gas-distinct", 2, {}),
        ("gas-distinct", 3, {}),
        ("gas-forest", 2, {}),
        ("gias-negmulti", 2, {"alpha": "1/2"}),
        ("gias-dirichlet", 2, {"a": 1, "beta": 1}),
    ]
    errs = {}
    for fam, r, reg in finite:
        row = normal_limit_check(fam, [n], r, lam=1, regime=reg)[0]
        errs[f"{fam} r={r}"] = row.var_rel_error
    ok = all(e < 0.02 for e in errs.values())
    tilde = {}
    for fam in ("gas-indistinct", "gas-distinct", "gas-forest"):
        for r in (0, 1):
            row = normal_limit_check(fam, [500], r, lam=math.inf)[0]
            tilde[f"{fam} r={r}"] = (row.var_const, row.var_rel_error)
    ok &= all(e < 0.05 for _, e in tilde.values())
    worst = max(errs.values())
    worst_tilde = max(e for _, e in tilde.values())
    report(6, ok, f"lam=1 worst rel err {worst:.4f} (<0.02); lam=inf worst rel err {worst_tilde:.4f} (<0.05)")


def test_criterion_07_decomposition_residual(report):
    res = {}
    for fam in FAMILIES:
        res[fam] = decomposition_residual(spec_for_n(fam, 1000), 4, 10)
    worst = max(res, key=res.get)
    report(7, res[worst] < 1e-9, f"n=1000, k<=4, j_trunc=10; worst {worst} residual {res[worst]:.3e} (<1e-9)")


def test_criterion_08_clt_trend(report):
    grid = [10**2, 10**3, 10**4, 10**5]
    slopes = {}
    for fam in FAMILIES:
        rep = condition_report(grid_specs(fam, grid), J_max=4)
        slopes[fam] = (rep.trends["kappa3"].slope, rep.trends["kappa4"].slope)
    ok = all(s is not None and s <= -0.25 for pair in slopes.values() for s in pair)
    worst = max(s for pair in slopes.values() for s in pair if s is not None)
    report(8, ok, f"kappa3/kappa4 log-log slopes on 1e2..1e5, max {worst:.3f} (<=-0.25)")


MC_SPECS = {
    "binomial": {"n": 30, "p": "3/10"},
    "neg-binomial": {"n": 30, "p": "1/2"},
    "hypergeometric": {"N": 40, "M": 50, "n": 30},
    "neg-hypergeometric": {"n": 30, "alpha": 1, "beta": 2},
    "gas-indistinct": {"n": 30, "N": 30, "r": 1},
    "gas-distinct": {"n": 30, "N": 30, "r": 2},
    "gas-coloured": {"n": 30, "N": 30, "M": 30, "r": 1},
    "gas-forest": {"n": 30, "N": 30, "r": 1},
    "gias-negmulti": {"n": 30, "N": 30, "p": "1/60", "r": 1},
    "gias-dirichlet": {"n": 30, "N": 30, "a": 1, "b": 30, "r": 1},
}


def test_criterion_09_monte_carlo(report):
    reps = 10**5
    ks = {}
    for spec in (SchemeSpec("binomial", {"n": 10**4, "p": "3/10"}),
                 SchemeSpec("gas-distinct", {"n": 10**4, "N": 10**4, "r": 2})):
        c1, c2 = (float(x) for x in factorial_moments(spec, 2))
        mean, var = c1, c2 + c1 - c1 * c1
        batch = simulate(spec, reps, seed=9)
        ks[spec.family] = ks_to_normal(batch, mean, math.sqrt(var)).statistic
    zs = {}
    for fam, params in MC_SPECS.items():
        spec = SchemeSpec(fam, params)
        batch = simulate(spec, reps, seed=99)
        exact = factorial_moments(spec, 3)
        for k in (1, 2, 3):
            est = empirical_factorial_moment(batch, k)
            zs[(fam, k)] = abs(est.value - float(exact[k - 1])) / est.se
    worst = max(zs, key=zs.get)
    ok = all(v < 0.03 for v in ks.values()) and zs[worst] <= 4
    ks_txt = ", ".join(f"{f} {v:.4f}" for f, v in ks.items())
    report(9, ok, f"KS at n=1e4: {ks_txt} (<0.03); moments k<=3 worst |z| {zs[worst]:.2f} at {worst} (<=4)")


def test_criterion_10_correlations(report):
    n, reps = 200, 10**5
    rhos = {}
    for fam in ("gas-indistinct", "gas-distinct", "gas-forest"):
        batch = simulate(SchemeSpec(fam, {"n": n, "N": n * n, "r": 0}), reps, seed=10)
        rhos[fam] = (empirical_correlation(batch, 0, 1).value, empirical_correlation(batch, 0, 2).value)
    ok = all(a < -0.9 and b > 0.9 for a, b in rhos.values())
    txt = "; ".join(f"{f} rho01={a:.4f} rho02={b:.4f}" for f, (a, b) in rhos.items())
    report(10, ok, txt)
