"""Gaps in S(k) + S(k) and a classifier for points of ``[0, 2/k]``.

``M(k, n) = [k]*n`` and ``m(k, n) = [k]*n + [1]``. For ``k >= 3`` the open
interval ``G(k, n)`` runs from ``M(k, n) + m(k, n)`` to ``2 M(k, n+1)``
(odd ``n``) or the other way round (even ``n``). None of its points is a
sum of two elements of S(k), while both endpoints are.

Odd-indexed gaps climb towards ``2/S_k = sqrt(k^2+4) - k`` from below and
even-indexed gaps descend towards it from above, ``S_k`` being the positive
root of ``x^2 - kx - 1``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .cf import DomainError, continuant, evaluate

DEFAULT_N_MAX = 64


def d(k: int, n: int) -> int:
    """Denominator of M(k, n): the continuant of n copies of k (``d_0 = 1``)."""
    return continuant([k] * n)


def big_m(k: int, n: int) -> Fraction:
    return evaluate([k] * n)


def small_m(k: int, n: int) -> Fraction:
    return evaluate([k] * n + [1])


@dataclass(frozen=True)
class GapInterval:
    k: int
    n: int
    lo: Fraction
    hi: Fraction

    def __contains__(self, x) -> bool:
        return self.lo < x < self.hi

    @property
    def endpoint_witnesses(self) -> dict[Fraction, tuple[Fraction, Fraction]]:
        """Each endpoint written as a sum of two elements of S(k)."""
        mixed = (big_m(self.k, self.n), small_m(self.k, self.n))
        double = (big_m(self.k, self.n + 1),) * 2
        if self.n % 2:
            return {self.lo: mixed, self.hi: double}
        return {self.lo: double, self.hi: mixed}


def gap(k: int, n: int) -> GapInterval:
    if k < 3:
        raise DomainError(f"gaps are defined for k >= 3, got {k}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    mixed = big_m(k, n) + small_m(k, n)
    double = 2 * big_m(k, n + 1)
    if n % 2:
        return GapInterval(k, n, mixed, double)
    return GapInterval(k, n, double, mixed)


def metallic_compare(x: Fraction, k: int) -> int:
    """Sign of ``x - (sqrt(k^2+4) - k)``, decided as ``(x+k)^2`` vs ``k^2+4``."""
    x = Fraction(x)
    if x < 0:
        raise DomainError("x must be >= 0")
    if k < 1:
        raise DomainError("k must be >= 1")
    lhs = (x + k) ** 2
    rhs = k * k + 4
    # k^2 < k^2+4 < (k+2)^2 and k^2+4 != (k+1)^2, so the root is irrational
    assert isqrt(rhs) ** 2 != rhs
    return (lhs > rhs) - (lhs < rhs)


def separator_decimal(k: int, digits: int = 30) -> str:
    """``sqrt(k^2+4) - k`` truncated to ``digits`` decimal places."""
    scaled = isqrt((k * k + 4) * 10 ** (2 * digits)) - k * 10**digits
    whole, frac = divmod(scaled, 10**digits)
    return f"{whole}.{frac:0{digits}d}"


class Verdict(str, enum.Enum):
    COVERED = "CoveredByTheorem"
    GAP = "GapExcluded"
    GAP_ENDPOINT = "GapEndpoint"
    MAX_ENDPOINT = "MaxEndpoint"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class PointClassification:
    verdict: Verdict
    n: int | None = None
    witness: tuple[Fraction, Fraction] | None = field(default=None, compare=False)


def classify(x: Fraction, k: int, n_max: int = DEFAULT_N_MAX) -> PointClassification:
    """Say what is known about ``x`` as a member of S(k) + S(k)."""
    x = Fraction(x)
    if k < 3:
        raise DomainError(f"k must be >= 3, got {k}")
    if not 0 <= x <= Fraction(2, k):
        raise DomainError(f"{x} is outside [0, 2/{k}]")
    if x <= Fraction(1, k - 1):
        return PointClassification(Verdict.COVERED)
    if x == Fraction(2, k):
        return PointClassification(Verdict.MAX_ENDPOINT, witness=(Fraction(1, k), Fraction(1, k)))
    below = metallic_compare(x, k) < 0
    # odd gaps increase (even gaps decrease) monotonically towards the separator
    n = 1 if below else 2
    while n <= n_max:
        g = gap(k, n)
        if below and g.lo > x or not below and g.hi < x:
            break
        if x in g:
            return PointClassification(Verdict.GAP, n)
        if x == g.lo or x == g.hi:
            return PointClassification(Verdict.GAP_ENDPOINT, n, g.endpoint_witnesses[x])
        n += 2
    return PointClassification(Verdict.UNKNOWN)


@dataclass(frozen=True)
class DisjointnessCertificate:
    k: int
    n_max: int
    checks: tuple[tuple[str, bool], ...]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed in self.checks)

    def failures(self) -> list[str]:
        return [name for name, passed in self.checks if not passed]


def verify_disjoint(k: int, n_max: int) -> DisjointnessCertificate:
    """Check that G(k, 1..n_max) are pairwise disjoint, and record why.

    The certificate lists the ordering chain (odd gaps increasing, even gaps
    decreasing, odd below / even above the separator, the interleaving
    inequalities) together with a direct pairwise comparison.
    """
    if k < 3:
        raise DomainError(f"k must be >= 3, got {k}")
    gaps = [gap(k, n) for n in range(1, n_max + 1)]
    checks: list[tuple[str, bool]] = []
    for g in gaps:
        checks.append((f"G{g.n}: lo < hi", g.lo < g.hi))
        side = -1 if g.n % 2 else 1
        for name, end in (("lo", g.lo), ("hi", g.hi)):
            where = "below" if side < 0 else "above"
            checks.append((f"G{g.n}.{name} {where} separator", metallic_compare(end, k) == side))
    odd = [g for g in gaps if g.n % 2]
    even = [g for g in gaps if not g.n % 2]
    for a, b in zip(odd, odd[1:]):
        checks.append((f"G{a.n} < G{b.n}", a.hi < b.lo))
    for a, b in zip(even, even[1:]):
        checks.append((f"G{a.n} > G{b.n}", a.lo > b.hi))
    for j in range(1, (n_max + 1) // 2 + 1):
        # M(2j-1) + m(2j-1) < 2 M(2j) < M(2j+1) + m(2j+1)
        left = big_m(k, 2 * j - 1) + small_m(k, 2 * j - 1)
        mid = 2 * big_m(k, 2 * j)
        right = big_m(k, 2 * j + 1) + small_m(k, 2 * j + 1)
        checks.append((f"ordering j={j}", left < mid < right))
    disjoint = all(a.hi <= b.lo or b.hi <= a.lo for i, a in enumerate(gaps) for b in gaps[i + 1:])
    checks.append(("pairwise disjoint", disjoint))
    return DisjointnessCertificate(k, n_max, tuple(checks))
