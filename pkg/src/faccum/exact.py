"""Exact combinatorial primitives over arbitrary-precision rationals.

Rationals are ``gmpy2.mpq`` values (always in lowest terms).  Partitions of
an integer ``J`` are stored as multiplicity vectors ``(m_1, ..., m_J)`` with
``sum(i * m_i) == J``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC

from gmpy2 import mpq, mpz

Rational = type(mpq(0))


class DomainError(ValueError):
    """Argument outside the domain of an operation."""


def to_rational(x) -> Rational:
    """Coerce ``x`` to an exact rational.

    Floats go through their shortest decimal repr, so ``0.25`` becomes 1/4 and
    ``0.3`` becomes 3/10 (not the binary expansion).  Strings such as ``"2/7"``
    or ``"1.5"`` are accepted as well.
    """
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, type(mpz(0)))):
        return mpq(x)
    if isinstance(x, Fraction) or isinstance(x, _RationalABC):
        return mpq(int(x.numerator), int(x.denominator))
    if isinstance(x, float):
        if not math.isfinite(x):
            raise DomainError(f"non-finite value {x!r}")
        return mpq(repr(x))
    if isinstance(x, str):
        return mpq(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


@dataclass(frozen=True)
class Partition:
    """A partition of ``J`` as multiplicities: ``m[i-1]`` parts equal to ``i``."""

    J: int
    m: tuple[int, ...]

    def __post_init__(self):
        if self.J < 1:
            raise DomainError("partitions are defined for J >= 1")
        if len(self.m) != self.J:
            raise DomainError(f"multiplicity vector must have length {self.J}")
        if any(x < 0 for x in self.m):
            raise DomainError("multiplicities must be non-negative")
        if sum((i + 1) * x for i, x in enumerate(self.m)) != self.J:
            raise DomainError(f"{self.m} is not a partition of {self.J}")

    @classmethod
    def from_parts(cls, parts) -> "Partition":
        parts = list(parts)
        J = sum(parts)
        m = [0] * J
        for p in parts:
            m[p - 1] += 1
        return cls(J, tuple(m))

    @property
    def parts(self) -> tuple[int, ...]:
        """Parts in non-increasing order."""
        out = []
        for i in range(self.J, 0, -1):
            out.extend([i] * self.m[i - 1])
        return tuple(out)

    @property
    def length(self) -> int:
        return sum(self.m)


def _parts_desc(n: int, largest: int):
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _parts_desc(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_partitions(J: int) -> tuple[Partition, ...]:
    """All partitions of ``J``, part lists in reverse lexicographic order.

    >>> [p.parts for p in enumerate_partitions(4)]
    [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    """
    if J < 1:
        raise DomainError("J must be a positive integer")
    return tuple(Partition.from_parts(p) for p in _parts_desc(J, J))


def partition_count(J: int) -> int:
    return len(enumerate_partitions(J))


@lru_cache(maxsize=None)
def partition_coefficient(pi: Partition) -> Rational:
    """Coefficient of ``prod a_i**m_i`` in the J-th cumulant written via moments.

    ``(-1)**(k-1) * J! / (prod (i!)**m_i * k) * multinomial(k; m)`` with ``k`` the
    number of parts.
    """
    k = pi.length
    denom = k
    multinomial = math.factorial(k)
    for i, mi in enumerate(pi.m, start=1):
        denom *= math.factorial(i) ** mi
        multinomial //= math.factorial(mi)
    return mpq((-1) ** (k - 1) * math.factorial(pi.J) * multinomial, denom)


def h_weight(pi: Partition, s: int) -> int:
    """``sum_i i**s * m_i``."""
    if s < 0:
        raise DomainError("s must be non-negative")
    return sum(i**s * mi for i, mi in enumerate(pi.m, start=1))


@lru_cache(maxsize=None)
def _stirling2_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _stirling2_row(n - 1)
    row = [0] * (n + 1)
    for k in range(1, n + 1):
        row[k] = k * (prev[k] if k < len(prev) else 0) + prev[k - 1]
    return tuple(row)


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind (triangle recurrence)."""
    if n < 0 or k < 0 or k > n:
        return 0
    return _stirling2_row(n)[k]


@lru_cache(maxsize=None)
def _stirling1_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _stirling1_row(n - 1)
    row = [0] * (n + 1)
    for k in range(1, n + 1):
        row[k] = prev[k - 1] - (n - 1) * (prev[k] if k < len(prev) else 0)
    return tuple(row)


def stirling1(n: int, k: int) -> int:
    """Signed Stirling number of the first kind: ``(y)_n = sum_k s(n,k) y**k``."""
    if n < 0 or k < 0 or k > n:
        return 0
    return _stirling1_row(n)[k]


_BERNOULLI: list[Rational] = [mpq(1)]


def bernoulli(m: int) -> Rational:
    """Bernoulli number with the ``B_1 = -1/2`` convention."""
    if m < 0:
        raise DomainError("Bernoulli index must be non-negative")
    while len(_BERNOULLI) <= m:
        t = len(_BERNOULLI)
        acc = sum(math.comb(t + 1, j) * _BERNOULLI[j] for j in range(t))
        _BERNOULLI.append(-acc / (t + 1))
    return _BERNOULLI[m]


@lru_cache(maxsize=None)
def power_sum_coefficients(j: int) -> tuple[Rational, ...]:
    """Coefficients ``c[l]`` (l = 0..j+1) of the polynomial M -> sum_{k<M} k**j."""
    if j < 1:
        raise DomainError("j must be >= 1")
    coeffs = [mpq(0)] * (j + 2)
    for l in range(1, j + 2):
        coeffs[l] = math.comb(j + 1, l) * bernoulli(j + 1 - l) / (j + 1)
    return tuple(coeffs)


def power_sum_poly(j: int, M) -> Rational:
    """Faulhaber polynomial extending ``sum_{k=1}^{M-1} k**j`` to any rational M."""
    M = to_rational(M)
    acc = mpq(0)
    for c in reversed(power_sum_coefficients(j)):
        acc = acc * M + c
    return acc


def falling_factorial(x, k: int):
    """``x (x-1) ... (x-k+1)``; the empty product is 1.  Keeps the type of ``x``."""
    if k < 0:
        raise DomainError("k must be non-negative")
    out = x * 0 + 1
    for j in range(k):
        out *= x - j
    return out


def rising_factorial(x, k: int):
    if k < 0:
        raise DomainError("k must be non-negative")
    out = x * 0 + 1
    for j in range(k):
        out *= x + j
    return out
