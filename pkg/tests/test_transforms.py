import random
from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from faccum.exact import falling_factorial, stirling2
from faccum.transforms import (
    CUMULANT,
    FACTORIAL,
    FACTORIAL_CUMULANT,
    KINDS,
    RAW,
    MomentSequence,
    OrderError,
    convert,
    cumulants_from_factorial_cumulants,
    cumulants_from_moments,
    cumulants_via_partitions,
    factorial_cumulants,
    moments_from_factorial,
    poisson_factorial_moments,
)

rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 100).map(
    lambda q: mpq(q.numerator, q.denominator)
)
sequences = st.lists(rationals, min_size=1, max_size=8)


def law_moments(law, K):
    """Raw and factorial moments of a finite law {value: prob}."""
    raw = [sum(p * Fraction(x) ** k for x, p in law.items()) for k in range(1, K + 1)]
    fac = [sum(p * falling_factorial(x, k) for x, p in law.items()) for k in range(1, K + 1)]
    return raw, fac


def test_poisson_cumulants_from_raw():
    lam = 2
    a = MomentSequence(RAW, (lam, lam**2 + lam, lam**3 + 3 * lam**2 + lam))
    assert list(cumulants_from_moments(a, 3).values) == [2, 2, 2]


def test_constant_and_normal_prefixes():
    assert list(cumulants_from_moments(MomentSequence(RAW, (1, 1, 1, 1)), 4).values) == [1, 0, 0, 0]
    assert list(cumulants_from_moments(MomentSequence(RAW, (0, 1, 0)), 3).values) == [0, 1, 0]


def test_moments_from_factorial_examples():
    assert list(moments_from_factorial(MomentSequence(FACTORIAL, (3, 9, 27)), 3).values) == [3, 12, 57]
    assert list(moments_from_factorial(MomentSequence(FACTORIAL, (1, 0, 0))).values) == [1, 1, 1]
    half = mpq(1, 2)
    c = (2 * half, 2 * half**2, 0)
    assert list(moments_from_factorial(MomentSequence(FACTORIAL, c)).values) == [1, mpq(3, 2), mpq(5, 2)]


def test_binomial_factorial_cumulants():
    n, p = 4, mpq(1, 3)
    c = MomentSequence(FACTORIAL, tuple(falling_factorial(n, k) * p**k for k in range(1, 5)))
    d = factorial_cumulants(c).values
    assert d[0] == n * p
    assert d[1] == -n * p**2
    # for a binomial, d_j = (-1)^(j-1) (j-1)! n p^j
    assert d[2] == 2 * n * p**3 and d[3] == -6 * n * p**4
    assert factorial_cumulants(c, 1).values == (n * p,)


@pytest.mark.parametrize("lam", [mpq(1, 3), mpq(1), mpq(7, 2), mpq(5)])
def test_poisson_factorial_cumulants_vanish(lam):
    d = factorial_cumulants(poisson_factorial_moments(lam, 10)).values
    assert d[0] == lam and all(x == 0 for x in d[1:])
    for J in range(1, 11):
        assert cumulants_from_factorial_cumulants(poisson_factorial_moments(lam, J), J) == lam


def test_route_equivalence_200_random_sequences():
    rng = random.Random(20240601)
    for _ in range(200):
        K = rng.randint(1, 8)
        vals = tuple(mpq(rng.randint(-40, 40), rng.randint(1, 12)) for _ in range(K))
        a = MomentSequence(RAW, vals)
        rec = cumulants_from_moments(a, K).values
        for J in range(1, K + 1):
            assert cumulants_via_partitions(a, J) == rec[J - 1]


@given(sequences)
def test_partition_route_matches_recursion(vals):
    a = MomentSequence(RAW, tuple(vals))
    rec = cumulants_from_moments(a).values
    assert cumulants_via_partitions(a, len(vals)) == rec[-1]


@given(sequences)
def test_factorial_route_equals_composite(vals):
    c = MomentSequence(FACTORIAL, tuple(vals))
    K = len(vals)
    composite = cumulants_from_moments(moments_from_factorial(c)).values
    for J in range(1, K + 1):
        assert cumulants_from_factorial_cumulants(c, J) == composite[J - 1]
        d = factorial_cumulants(c, J)
        assert cumulants_from_factorial_cumulants(d, J) == composite[J - 1]


@given(sequences, st.sampled_from(KINDS), st.sampled_from(KINDS))
def test_convert_round_trip(vals, src, dst):
    seq = MomentSequence(src, tuple(vals))
    back = convert(convert(seq, dst), src)
    assert back.values == seq.values


@given(sequences)
def test_convert_chains_compose(vals):
    c = MomentSequence(FACTORIAL, tuple(vals))
    two_step = convert(convert(c, RAW), CUMULANT)
    assert two_step.values == convert(c, CUMULANT).values
    # b = g(f(c))
    d = convert(c, FACTORIAL_CUMULANT)
    assert convert(d, CUMULANT).values == two_step.values


def test_variance_identity_on_a_finite_law():
    law = {0: Fraction(1, 6), 1: Fraction(1, 3), 3: Fraction(1, 2)}
    raw, fac = law_moments(law, 4)
    c = MomentSequence(FACTORIAL, tuple(fac))
    assert moments_from_factorial(c).values == tuple(mpq(x) for x in raw)
    assert c[1] == raw[0]
    var = raw[1] - raw[0] ** 2
    assert cumulants_from_factorial_cumulants(c, 2) == c[2] - c[1] ** 2 + c[1] == var
    # central third moment equals the third cumulant
    m3 = sum(p * (x - raw[0]) ** 3 for x, p in law.items())
    assert cumulants_from_factorial_cumulants(c, 3) == m3


def test_stirling_matrix_in_g():
    c = MomentSequence(FACTORIAL, tuple(mpq(k) for k in range(1, 7)))
    mu = moments_from_factorial(c).values
    assert mu[5] == sum(stirling2(6, j) * j for j in range(1, 7))


def test_order_and_kind_errors():
    a = MomentSequence(RAW, (1, 2))
    with pytest.raises(OrderError):
        cumulants_from_moments(a, 3)
    with pytest.raises(OrderError):
        cumulants_via_partitions(a, 3)
    with pytest.raises(ValueError):
        moments_from_factorial(a)
    with pytest.raises(ValueError):
        MomentSequence("moments", (1,))
    with pytest.raises(ValueError):
        MomentSequence(RAW, ())


def test_implicit_order_zero_terms():
    assert MomentSequence(RAW, (5,))[0] == 1
    assert MomentSequence(FACTORIAL, (5,))[0] == 1
    assert MomentSequence(CUMULANT, (5,))[0] == 0
    assert MomentSequence(FACTORIAL_CUMULANT, (5,))[0] == 0
