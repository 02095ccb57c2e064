"""Brute-force ground truth for S(k) at bounded denominators.

Nothing here calls the decomposition algorithm except
:func:`cross_check_decomposition`, whose whole job is to compare against it.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .cf import DomainError, euclid_digits
from .decompose import InvariantViolation, Termination, decompose_checked
from .gaps import GapInterval
from .sources import RationalSource


@dataclass(frozen=True)
class BoundedSkEnumeration:
    """All rationals of S(k) with denominator at most ``q_max``, sorted, 0 included."""

    k: int
    q_max: int
    elements: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        i = bisect_left(self.elements, x)
        return i < len(self.elements) and self.elements[i] == x


def _dfs(k: int, q_max: int, first: int) -> list[Fraction]:
    out = []
    # (p_n, q_n, p_{n-1}, q_{n-1}) after the first digit
    stack = [(1, first, 0, 1)]
    while stack:
        p, q, p0, q0 = stack.pop()
        out.append(Fraction(p, q))
        a = k
        while a * q + q0 <= q_max:
            stack.append((a * p + p0, a * q + q0, p, q))
            a += 1
    return out


def enumerate_sk(k: int, q_max: int) -> BoundedSkEnumeration:
    """Depth-first search over digit strings with every digit >= k.

    A branch is cut as soon as its continuant exceeds ``q_max``. The search is
    partitioned by first digit and the parts are merged, so the result does
    not depend on traversal order.
    """
    if k < 1 or q_max < 1:
        raise DomainError("need k >= 1 and q_max >= 1")
    found = {Fraction(0)}
    for first in range(k, q_max + 1):
        found.update(_dfs(k, q_max, first))
    return BoundedSkEnumeration(k, q_max, tuple(sorted(found)))


def filter_sk(k: int, q_max: int) -> BoundedSkEnumeration:
    """Reference enumeration: test every reduced fraction in [0, 1] directly."""
    found = [Fraction(0)]
    for q in range(1, q_max + 1):
        for p in range(1, q + 1):
            if gcd(p, q) == 1 and all(a >= k for a in euclid_digits(p, q)):
                found.append(Fraction(p, q))
    return BoundedSkEnumeration(k, q_max, tuple(sorted(found)))


def sumset_contains(e: BoundedSkEnumeration, target: Fraction) -> tuple[Fraction, Fraction] | None:
    """A pair ``(u, v)`` from ``e`` with ``u <= v`` and ``u + v == target``.

    ``None`` only means no witness exists at this denominator bound.
    """
    target = Fraction(target)
    xs = e.elements
    i, j = 0, len(xs) - 1
    while i <= j:
        s = xs[i] + xs[j]
        if s == target:
            return xs[i], xs[j]
        if s < target:
            i += 1
        else:
            j -= 1
    return None


def gap_interior_empty(e: BoundedSkEnumeration, g: GapInterval) -> tuple[bool, tuple[Fraction, Fraction] | None]:
    """Scan every pair ``u <= v`` with ``g.lo < u + v < g.hi``.

    Returns ``(True, None)`` when there is none, else ``(False, pair)``.
    """
    if g.k != e.k:
        raise DomainError(f"gap is for k={g.k}, enumeration for k={e.k}")
    xs = e.elements
    for i, u in enumerate(xs):
        if 2 * u >= g.hi:
            break
        # v in (lo - u, hi - u) and v >= u
        start = max(i, bisect_right(xs, g.lo - u))
        stop = bisect_left(xs, g.hi - u)
        if start < stop:
            return False, (u, xs[start])
    return True, None


@dataclass(frozen=True)
class CrossCheckReport:
    x: Fraction
    k: int
    q_max: int
    c_value: Fraction
    b_value: Fraction
    c_in_sk: bool
    b_in_sk: bool
    sums_to_x: bool

    @property
    def agree(self) -> bool:
        return self.c_in_sk and self.b_in_sk and self.sums_to_x


def cross_check_decomposition(x: Fraction, k: int, q_max: int, enumeration: BoundedSkEnumeration | None = None) -> CrossCheckReport:
    """Check that the algorithm's two summands are found by brute force."""
    x = Fraction(x)
    res = decompose_checked(RationalSource(x), k)
    if res.termination is not Termination.EXACT_FINITE:
        raise DomainError(f"decomposition of {x} did not terminate finitely")
    c, b = res.c_value, res.b_value
    if max(c.denominator, b.denominator) > q_max:
        raise DomainError(f"summand denominators exceed q_max={q_max}")
    e = enumeration if enumeration is not None else enumerate_sk(k, q_max)
    if e.k != k or e.q_max < q_max:
        raise DomainError("enumeration does not match k / q_max")
    report = CrossCheckReport(x, k, q_max, c, b, c in e, b in e, c + b == x)
    if not report.agree:
        raise InvariantViolation(f"oracle disagrees with decomposition of {x}: {report}", res.steps)
    return report
