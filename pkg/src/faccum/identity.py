"""Exact checks of the partition-moment identity

    sum_{pi |- J} D_pi * prod_i H_pi(s_i) = 0   whenever  sum(s) <= J + I - 2,

its failure on the boundary ``sum(s) = J + I - 1``, and the single-weight
closed form ``J! * S2(s_1, J)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

from gmpy2 import mpq

from .exact import DomainError, Rational, enumerate_partitions, partition_coefficient, stirling2


@dataclass(frozen=True)
class IdentityInstance:
    J: int
    s: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(int(x) for x in self.s))
        if self.J < 2:
            raise DomainError("the identity is stated for J >= 2")
        if len(self.s) < 1 or any(x < 1 for x in self.s):
            raise DomainError("need I >= 1 weights, each >= 1")

    @property
    def I(self) -> int:
        return len(self.s)

    @property
    def in_vanishing_region(self) -> bool:
        return sum(self.s) <= self.J + self.I - 2


@lru_cache(maxsize=None)
def _table(J):
    parts = enumerate_partitions(J)
    return [(partition_coefficient(p), p.m) for p in parts]


@lru_cache(maxsize=None)
def _h_column(J, s):
    return [sum(i**s * mi for i, mi in enumerate(m, start=1)) for _, m in _table(J)]


def identity_sum(inst: IdentityInstance) -> Rational:
    rows = _table(inst.J)
    cols = [_h_column(inst.J, s) for s in inst.s]
    total = mpq(0)
    for idx, (d, _) in enumerate(rows):
        prod = 1
        for col in cols:
            prod *= col[idx]
        total += d * prod
    return total


def multisets(I: int, total_max: int, exact_total: int | None = None):
    """Non-decreasing tuples of ``I`` integers >= 1 with bounded (or fixed) sum."""

    def rec(prefix, lo, remaining_slots, budget):
        if remaining_slots == 0:
            if exact_total is None or budget == 0:
                yield tuple(prefix)
            return
        # smallest possible completion uses lo for every remaining slot
        v = lo
        while v * remaining_slots <= budget:
            prefix.append(v)
            yield from rec(prefix, v, remaining_slots - 1, budget - v)
            prefix.pop()
            v += 1

    budget = total_max if exact_total is None else exact_total
    yield from rec([], 1, I, budget)


@dataclass
class CaseRecord:
    J: int
    I: int
    s: tuple[int, ...]
    value_numerator: str
    value_denominator: str
    in_vanishing_region: bool

    @classmethod
    def build(cls, inst: IdentityInstance, value: Rational) -> "CaseRecord":
        return cls(
            inst.J,
            inst.I,
            inst.s,
            str(value.numerator),
            str(value.denominator),
            inst.in_vanishing_region,
        )

    @property
    def value(self) -> Rational:
        return mpq(int(self.value_numerator), int(self.value_denominator))

    def to_json(self) -> dict:
        d = asdict(self)
        d["s"] = list(self.s)
        return d


@dataclass
class SweepReport:
    kind: str
    J_max: int
    I_max: int
    cases: list[CaseRecord] = field(default_factory=list)
    violations: list[CaseRecord] = field(default_factory=list)
    # boundary sweeps only: (J, I) pairs with no nonzero case
    missing_nonzero: list[tuple[int, int]] = field(default_factory=list)

    @property
    def checked(self) -> int:
        return len(self.cases)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.missing_nonzero

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "J_max": self.J_max,
            "I_max": self.I_max,
            "checked": self.checked,
            "ok": self.ok,
            "violations": [c.to_json() for c in self.violations],
            "missing_nonzero": [list(x) for x in self.missing_nonzero],
            "cases": [c.to_json() for c in self.cases],
        }


def _check_bounds(J_max, I_max):
    if J_max < 2 or I_max < 1:
        raise DomainError("need J_max >= 2 and I_max >= 1")


def verify_vanishing_region(J_max: int, I_max: int) -> SweepReport:
    """Evaluate every multiset of weights inside the vanishing region."""
    _check_bounds(J_max, I_max)
    report = SweepReport("vanishing", J_max, I_max)
    for J in range(2, J_max + 1):
        for I in range(1, I_max + 1):
            for s in multisets(I, J + I - 2):
                inst = IdentityInstance(J, s)
                rec = CaseRecord.build(inst, identity_sum(inst))
                report.cases.append(rec)
                if rec.value != 0:
                    report.violations.append(rec)
    return report


def verify_boundary_nonvanishing(J_max: int, I_max: int) -> SweepReport:
    """Evaluate every multiset with ``sum(s) == J + I - 1``.

    Records the values; a (J, I) pair with no nonzero case is listed in
    ``missing_nonzero``.  For I = 1 each value is also compared with
    ``J! * S2(s_1, J)`` and mismatches are reported as violations.
    """
    _check_bounds(J_max, I_max)
    report = SweepReport("boundary", J_max, I_max)
    for J in range(2, J_max + 1):
        for I in range(1, I_max + 1):
            any_nonzero = False
            for s in multisets(I, J + I - 1, exact_total=J + I - 1):
                inst = IdentityInstance(J, s)
                value = identity_sum(inst)
                rec = CaseRecord.build(inst, value)
                report.cases.append(rec)
                any_nonzero |= value != 0
                if I == 1 and value != math.factorial(J) * stirling2(s[0], J):
                    report.violations.append(rec)
            if not any_nonzero:
                report.missing_nonzero.append((J, I))
    return report


def stanley_check(J: int, s1: int) -> tuple[Rational, Rational]:
    """``(identity sum with I = 1, J! * S2(s1, J))``; the two must agree."""
    lhs = identity_sum(IdentityInstance(J, (s1,)))
    return lhs, mpq(math.factorial(J) * stirling2(s1, J))
