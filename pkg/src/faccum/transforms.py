"""Conversions between raw moments, cumulants, factorial moments and
factorial cumulants.

Two generic maps do all the work, each with its inverse:

* ``f`` (cumulants from moments) via the binomial recursion, and
* ``g`` (moments from factorial moments) via Stirling numbers of the 2nd kind.

Raw -> cumulant is ``f``, factorial -> raw is ``g``, factorial -> factorial
cumulant is ``f`` again (with ``e^t - 1`` as the variable), and factorial
cumulant -> cumulant is ``g``.  The partition formula gives an independent
route to ``f`` used for cross-checking.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .exact import (
    Rational,
    enumerate_partitions,
    partition_coefficient,
    stirling1,
    stirling2,
    to_rational,
)

RAW = "raw"
CUMULANT = "cumulant"
FACTORIAL = "factorial"
FACTORIAL_CUMULANT = "factorial-cumulant"
KINDS = (RAW, CUMULANT, FACTORIAL, FACTORIAL_CUMULANT)


class OrderError(ValueError):
    """Requested order exceeds the length of the input sequence."""


def _coerce(v):
    # mpmath floats pass through untouched (float path of the Dirichlet scheme)
    if hasattr(v, "_mpf_"):
        return v
    return to_rational(v)


@dataclass(frozen=True)
class MomentSequence:
    """Finite prefix ``(x_1, ..., x_K)`` of a moment-type sequence.

    The order-0 term is implicit: 1 for raw and factorial kinds, 0 for the
    cumulant kinds.
    """

    kind: str
    values: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown sequence kind {self.kind!r}")
        if len(self.values) == 0:
            raise ValueError("moment sequence must be non-empty")
        object.__setattr__(self, "values", tuple(_coerce(v) for v in self.values))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        """1-based access: ``seq[k]`` is the order-``k`` term."""
        if k == 0:
            return 1 if self.kind in (RAW, FACTORIAL) else 0
        return self.values[k - 1]

    def truncate(self, K: int) -> "MomentSequence":
        return MomentSequence(self.kind, self.values[:_check_order(self, K)])


def _check_order(seq, K):
    if K is None:
        return len(seq.values)
    if K < 1:
        raise OrderError("order must be >= 1")
    if K > len(seq.values):
        raise OrderError(f"order {K} exceeds the {len(seq.values)} available terms")
    return K


def _expect(seq, *kinds):
    if seq.kind not in kinds:
        raise ValueError(f"expected a {' or '.join(kinds)} sequence, got {seq.kind!r}")


# -- the four generic maps -------------------------------------------------

def f_map(x, K):
    out = []
    for k in range(1, K + 1):
        acc = x[k - 1]
        for j in range(1, k):
            acc -= math.comb(k - 1, j - 1) * out[j - 1] * x[k - j - 1]
        out.append(acc)
    return out


def f_inverse(b, K):
    x = []
    for k in range(1, K + 1):
        acc = b[k - 1]
        for j in range(1, k):
            acc += math.comb(k - 1, j - 1) * b[j - 1] * x[k - j - 1]
        x.append(acc)
    return x


def g_map(x, K):
    return [sum(stirling2(k, j) * x[j - 1] for j in range(1, k + 1)) for k in range(1, K + 1)]


def g_inverse(x, K):
    return [sum(stirling1(k, j) * x[j - 1] for j in range(1, k + 1)) for k in range(1, K + 1)]


# -- public operations -----------------------------------------------------

def cumulants_from_moments(a: MomentSequence, K: int | None = None) -> MomentSequence:
    _expect(a, RAW)
    K = _check_order(a, K)
    return MomentSequence(CUMULANT, f_map(a.values, K))


def moments_from_factorial(c: MomentSequence, K: int | None = None) -> MomentSequence:
    _expect(c, FACTORIAL)
    K = _check_order(c, K)
    return MomentSequence(RAW, g_map(c.values, K))


def factorial_cumulants(c: MomentSequence, K: int | None = None) -> MomentSequence:
    _expect(c, FACTORIAL)
    K = _check_order(c, K)
    return MomentSequence(FACTORIAL_CUMULANT, f_map(c.values, K))


def cumulants_via_partitions(a: MomentSequence, J: int):
    """J-th cumulant as ``sum_pi D_pi prod a_i**m_i``.

    Works for any sequence kind: applied to factorial moments it yields the
    J-th factorial cumulant.
    """
    _check_order(a, J)
    total = 0
    for pi in enumerate_partitions(J):
        term = partition_coefficient(pi)
        for i, mi in enumerate(pi.m, start=1):
            if mi:
                term = term * a.values[i - 1] ** mi
        total = total + term
    return total


def cumulants_from_factorial_cumulants(d_or_c: MomentSequence, J: int):
    """J-th ordinary cumulant, ``sum_j S2(J, j) d_j``.

    Accepts either the factorial cumulants ``d`` or the factorial moments ``c``
    (in which case ``d = f(c)`` is formed first).
    """
    _expect(d_or_c, FACTORIAL, FACTORIAL_CUMULANT)
    _check_order(d_or_c, J)
    d = d_or_c.values[:J]
    if d_or_c.kind == FACTORIAL:
        d = f_map(d, J)
    return sum(stirling2(J, j) * d[j - 1] for j in range(1, J + 1))


_EDGES = {
    (RAW, CUMULANT): f_map,
    (CUMULANT, RAW): f_inverse,
    (FACTORIAL, RAW): g_map,
    (RAW, FACTORIAL): g_inverse,
    (FACTORIAL, FACTORIAL_CUMULANT): f_map,
    (FACTORIAL_CUMULANT, FACTORIAL): f_inverse,
    (FACTORIAL_CUMULANT, CUMULANT): g_map,
    (CUMULANT, FACTORIAL_CUMULANT): g_inverse,
}


def _path(src, dst):
    prev = {src: None}
    queue = deque([src])
    while queue:
        node = queue.popleft()
        if node == dst:
            break
        for a, b in _EDGES:
            if a == node and b not in prev:
                prev[b] = node
                queue.append(b)
    hops = []
    node = dst
    while prev[node] is not None:
        hops.append((prev[node], node))
        node = prev[node]
    return hops[::-1]


def convert(seq: MomentSequence, to: str, K: int | None = None) -> MomentSequence:
    """Convert ``seq`` to kind ``to`` (orders 1..K), chaining the basic maps."""
    if to not in KINDS:
        raise ValueError(f"unknown sequence kind {to!r}")
    K = _check_order(seq, K)
    values = list(seq.values[:K])
    for edge in _path(seq.kind, to):
        values = _EDGES[edge](values, K)
    return MomentSequence(to, values)


def poisson_factorial_moments(lam, K: int) -> MomentSequence:
    lam = _coerce(lam)
    return MomentSequence(FACTORIAL, [lam**k for k in range(1, K + 1)])


def is_exact(seq: MomentSequence) -> bool:
    return all(isinstance(v, Rational) for v in seq.values)
