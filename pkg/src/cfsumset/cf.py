"""Exact continued fractions, continuants, convergents and cylinders.

Everything here works on Python integers and :class:`fractions.Fraction`;
there is no floating point anywhere in this module.

A continued fraction ``[a1, a2, ..., an]`` denotes ``1/(a1 + 1/(a2 + ...))``,
so every value lies in ``[0, 1]``. The empty sequence denotes 0.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

Rational = Fraction


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


def _check_digits(digits: Sequence[int]) -> None:
    for a in digits:
        if not isinstance(a, int) or isinstance(a, bool):
            raise DomainError(f"partial quotients must be integers, got {a!r}")
        if a < 1:
            raise DomainError(f"partial quotients must be >= 1, got {a}")


def canonical_digits(digits: Iterable[int]) -> tuple[int, ...]:
    """Rewrite ``[..., a, 1]`` as ``[..., a + 1]``.

    ``[1]`` itself (the value 1) has no shorter form and is kept as is.
    """
    out = list(digits)
    _check_digits(out)
    if len(out) >= 2 and out[-1] == 1:
        out.pop()
        out[-1] += 1
    return tuple(out)


def convergent_pairs(digits: Sequence[int]) -> list[tuple[int, int]]:
    """Numerator/denominator pairs ``(p_n, q_n)`` for n = 1..len(digits).

    Uses ``p_n = a_n p_{n-1} + p_{n-2}``, ``q_n = a_n q_{n-1} + q_{n-2}``
    seeded with ``p_0, q_0 = 0, 1`` and ``p_{-1}, q_{-1} = 1, 0``.
    """
    p_prev, q_prev = 1, 0
    p, q = 0, 1
    out = []
    for a in digits:
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        out.append((p, q))
    return out


def evaluate(digits: Sequence[int]) -> Fraction:
    """Exact value of a (not necessarily canonical) digit sequence."""
    _check_digits(digits)
    if not digits:
        return Fraction(0)
    p, q = convergent_pairs(digits)[-1]
    return Fraction(p, q)


def euclid_digits(num: int, den: int, limit: int | None = None) -> list[int]:
    """Partial quotients of ``num/den`` for ``0 <= num <= den``, ``den > 0``.

    The fraction need not be reduced. Output is canonical (last digit >= 2
    unless the value is 1). ``limit`` stops after that many digits.
    """
    out = []
    while num and (limit is None or len(out) < limit):
        a, r = divmod(den, num)
        out.append(a)
        num, den = r, num
    return out


@dataclass(frozen=True)
class ContinuedFraction:
    """A finite continued fraction, always stored in canonical form."""

    digits: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "digits", canonical_digits(self.digits))

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def __str__(self) -> str:
        return format_cf(self.digits)

    @cached_property
    def value(self) -> Fraction:
        return evaluate(self.digits)

    @cached_property
    def convergents(self) -> tuple[tuple[Fraction, int], ...]:
        return tuple((Fraction(p, q), q) for p, q in convergent_pairs(self.digits))

    @classmethod
    def parse(cls, text: str) -> "ContinuedFraction":
        return cls(parse_cf(text))


def cf_from_rational(x: Fraction | int) -> ContinuedFraction:
    """Canonical expansion of a rational in ``[0, 1]``."""
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"{x} is outside [0, 1]")
    return ContinuedFraction(tuple(euclid_digits(x.numerator, x.denominator)))


def rational_from_cf(cf: ContinuedFraction | Sequence[int]) -> Fraction:
    if isinstance(cf, ContinuedFraction):
        return cf.value
    return evaluate(tuple(cf))


def continuant(digits: Sequence[int]) -> int:
    """The continuant ``<c1, ..., cn>``, i.e. the denominator of ``[c1, ..., cn]``.

    The empty continuant is 1.
    """
    _check_digits(digits)
    q_prev, q = 0, 1
    for a in digits:
        q, q_prev = a * q + q_prev, q
    return q


def convergents(cf: ContinuedFraction | Sequence[int]) -> list[tuple[Fraction, int]]:
    """``[(p_n/q_n, q_n), ...]`` for every prefix of ``cf``."""
    if isinstance(cf, ContinuedFraction):
        return list(cf.convergents)
    digits = tuple(cf)
    _check_digits(digits)
    return [(Fraction(p, q), q) for p, q in convergent_pairs(digits)]


@dataclass(frozen=True)
class CylinderInterval:
    """An interval with exact endpoints and explicit closedness."""

    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed)):
            raise DomainError(f"empty interval {self}")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        above = x > self.lo or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    def issubset(self, other: "CylinderInterval") -> bool:
        lo_ok = self.lo > other.lo or (self.lo == other.lo and (other.lo_closed or not self.lo_closed))
        hi_ok = self.hi < other.hi or (self.hi == other.hi and (other.hi_closed or not self.hi_closed))
        return lo_ok and hi_ok

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{format_rational(self.lo)}, {format_rational(self.hi)}{right}"


def cylinder(digits: Sequence[int]) -> CylinderInterval:
    """The set of reals whose expansion starts with ``digits``.

    Even order: ``[p_n/q_n, (p_n+p_{n-1})/(q_n+q_{n-1}))``;
    odd order: ``((p_n+p_{n-1})/(q_n+q_{n-1}), p_n/q_n]``. When ``n >= 2``
    and the last digit is 1 the ``p_n/q_n`` end is open as well.
    """
    digits = tuple(digits)
    if not digits:
        raise DomainError("cylinder needs at least one digit")
    _check_digits(digits)
    pairs = convergent_pairs(digits)
    p, q = pairs[-1]
    p_prev, q_prev = pairs[-2] if len(pairs) > 1 else (0, 1)
    near = Fraction(p, q)
    far = Fraction(p + p_prev, q + q_prev)
    # [..., a, 1] canonically reads [..., a + 1], so that endpoint drops out
    near_closed = not (len(digits) >= 2 and digits[-1] == 1)
    if len(digits) % 2 == 0:
        return CylinderInterval(near, far, lo_closed=near_closed, hi_closed=False)
    return CylinderInterval(far, near, lo_closed=False, hi_closed=near_closed)


def continuant_ratio_bound(b_prefix: Sequence[int], c_prefix: Sequence[int], split_k: int) -> Fraction:
    """Lower bound for ``<b1..bn> / <c1..cn>`` when ``b_i >= c_i`` everywhere.

    Returns::

        1 + (<b1..bk> - <c1..ck> + (<b1..b_{k-1}> - <c1..c_{k-1}>) / (c_{k+1} + 1))
            / (<c1..ck> + <c1..c_{k-1}> / c_{k+1})
    """
    b, c = tuple(b_prefix), tuple(c_prefix)
    _check_digits(b)
    _check_digits(c)
    if len(b) != len(c) or len(b) < 2:
        raise DomainError("sequences must have equal length >= 2")
    if any(bi < ci for bi, ci in zip(b, c)):
        raise DomainError("need b_i >= c_i for every i")
    if not 1 <= split_k <= len(b) - 1:
        raise DomainError(f"split index {split_k} outside 1..{len(b) - 1}")
    k = split_k
    nxt = c[k]
    num = continuant(b[:k]) - continuant(c[:k]) + Fraction(continuant(b[:k - 1]) - continuant(c[:k - 1]), nxt + 1)
    den = continuant(c[:k]) + Fraction(continuant(c[:k - 1]), nxt)
    return 1 + num / den


# text syntax

_CF_RE = re.compile(r"^\[\s*(\d+(\s*,\s*\d+)*)?\s*\]$")
_RAT_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_cf(text: str) -> tuple[int, ...]:
    m = _CF_RE.match(text.strip())
    if not m:
        raise DomainError(f"not a continued fraction literal: {text!r}")
    body = m.group(1)
    digits = tuple(int(t) for t in body.split(",")) if body else ()
    _check_digits(digits)
    return digits


def format_cf(digits: Iterable[int]) -> str:
    return "[" + ",".join(str(a) for a in digits) + "]"


def parse_rational(text: str) -> Fraction:
    m = _RAT_RE.match(text)
    if not m:
        raise DomainError(f"not a rational literal: {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise DomainError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
