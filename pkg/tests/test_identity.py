import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from faccum.exact import DomainError, enumerate_partitions, partition_coefficient, stirling2
from faccum.identity import (
    IdentityInstance,
    identity_sum,
    multisets,
    stanley_check,
    verify_boundary_nonvanishing,
    verify_vanishing_region,
)


def naive_sum(J, s):
    total = Fraction(0)
    for pi in enumerate_partitions(J):
        prod = 1
        for si in s:
            prod *= sum(i**si * m for i, m in enumerate(pi.m, start=1))
        total += Fraction(int(partition_coefficient(pi).numerator), int(partition_coefficient(pi).denominator)) * prod
    return total


@given(st.integers(2, 8), st.lists(st.integers(1, 8), min_size=1, max_size=3))
def test_sum_matches_naive_evaluation(J, s):
    assert identity_sum(IdentityInstance(J, tuple(s))) == naive_sum(J, s)


@given(st.integers(2, 9), st.data())
def test_vanishing_inside_region(J, data):
    I = data.draw(st.integers(1, 3))
    budget = J + I - 2
    s = data.draw(st.lists(st.integers(1, max(1, budget - I + 1)), min_size=I, max_size=I))
    if sum(s) <= budget:
        assert identity_sum(IdentityInstance(J, tuple(s))) == 0


def test_multisets_enumerates_sorted_weights():
    got = list(multisets(2, 4))
    assert len(got) == len(set(got))
    assert all(sum(s) <= 4 and all(x >= 1 for x in s) for s in got)
    assert all(list(s) == sorted(s) for s in got) or all(list(s) == sorted(s, reverse=True) for s in got)
    expected = {tuple(sorted((a, b))) for a in range(1, 4) for b in range(1, 4) if a + b <= 4}
    assert {tuple(sorted(s)) for s in got} == expected
    assert {tuple(sorted(s)) for s in multisets(2, 5, exact_total=5)} == {(1, 4), (2, 3)}


def test_small_sweep_report():
    rep = verify_vanishing_region(6, 2)
    assert rep.ok and rep.checked > 0 and not rep.violations
    js = rep.to_json()
    assert js["ok"] and js["checked"] == rep.checked


def test_boundary_sweep_report():
    rep = verify_boundary_nonvanishing(6, 2)
    assert rep.ok and not rep.missing_nonzero
    for case in rep.cases:
        assert not case.in_vanishing_region


@pytest.mark.parametrize("J", range(2, 9))
def test_stanley_specialization(J):
    for s1 in range(1, 15):
        lhs, rhs = stanley_check(J, s1)
        assert lhs == rhs == math.factorial(J) * stirling2(s1, J)
        assert (lhs == 0) == (s1 < J)


def test_instance_validation():
    with pytest.raises(DomainError):
        IdentityInstance(1, (1,))
    with pytest.raises(DomainError):
        IdentityInstance(3, ())
    with pytest.raises(DomainError):
        IdentityInstance(3, (0, 2))
    with pytest.raises(DomainError):
        verify_vanishing_region(1, 1)
