"""Lazy exact partial quotients of ``x - r`` for rational shifts ``r``.

Three kinds of ``x`` are supported:

* :class:`RationalSource` -- an exact rational; digits come from Euclid.
* :class:`SurdSource` -- ``(a + b*sqrt(d))/c``; the shifted value is again a
  quadratic surd and is expanded by floor-and-invert with integer square roots.
* :class:`StreamSource` -- only the partial quotients of ``x`` are known.
  Digits of ``x - r`` are decided by refining the cylinder of ``x`` until both
  endpoints of the shifted interval share the requested prefix.

``quotient`` returns ``None`` when ``x - r`` is a rational with fewer than
``n`` partial quotients, and raises :class:`SourceExhausted` when a stream
cannot decide the digit.
"""
from __future__ import annotations

import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import gcd, isqrt
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

from .cf import CylinderInterval, DomainError, cf_from_rational, cylinder, euclid_digits

DEFAULT_REFINEMENT_LIMIT = 10**6


class SourceExhausted(Exception):
    """A stream ran out of digits (or refinement budget) before a digit was decided."""


class NumberSource(ABC):
    """A real number in ``(0, 1]`` whose shifted partial quotients can be queried."""

    @abstractmethod
    def quotient(self, shift_num: int, shift_den: int, n: int) -> int | None:
        """``a_n(x - shift_num/shift_den)``; the shift need not be reduced."""

    @abstractmethod
    def enclosing_interval(self, depth: int) -> CylinderInterval:
        """A cylinder-shaped interval around ``x`` built from ``depth`` digits."""

    @abstractmethod
    def compare(self, r: Fraction) -> int:
        """Sign of ``x - r``."""

    def exact_value(self) -> Fraction | None:
        return None

    def partial_quotient(self, shift: Fraction | int, n: int) -> int | None:
        shift = Fraction(shift)
        return self.quotient(shift.numerator, shift.denominator, n)

    def digits(self, count: int) -> list[int]:
        """The first ``count`` partial quotients of ``x`` (fewer if ``x`` is rational)."""
        out = []
        for i in range(1, count + 1):
            a = self.quotient(0, 1, i)
            if a is None:
                break
            out.append(a)
        return out


def _check_n(n: int) -> None:
    if n < 1:
        raise DomainError(f"digit index must be >= 1, got {n}")


@dataclass(frozen=True)
class RationalSource(NumberSource):
    value: Fraction

    def __post_init__(self):
        v = Fraction(self.value)
        if not 0 < v <= 1:
            raise DomainError(f"rational source must lie in (0, 1], got {v}")
        object.__setattr__(self, "value", v)

    def quotient(self, shift_num, shift_den, n):
        _check_n(n)
        num = self.value.numerator * shift_den - shift_num * self.value.denominator
        den = self.value.denominator * shift_den
        if den < 0:
            num, den = -num, -den
        if num < 0 or num > den:
            raise DomainError("shifted value is outside [0, 1]")
        digits = euclid_digits(num, den, limit=n)
        return digits[n - 1] if len(digits) >= n else None

    def enclosing_interval(self, depth):
        _check_n(depth)
        digits = cf_from_rational(self.value).digits
        if depth >= len(digits):
            return CylinderInterval(self.value, self.value)
        return cylinder(digits[:depth])

    def compare(self, r):
        diff = self.value - Fraction(r)
        return (diff > 0) - (diff < 0)

    def exact_value(self):
        return self.value

    def __str__(self):
        return f"{self.value.numerator}/{self.value.denominator}"


def _surd_floor(p: int, q: int, d: int, r: int) -> int:
    """floor((p + q*sqrt(d)) / r) for r > 0, q != 0, d not a square."""
    s = isqrt(q * q * d)
    if q > 0:
        return (p + s) // r
    return (p - s - 1) // r


def _surd_sign(p: int, q: int, d: int) -> int:
    """Sign of p + q*sqrt(d) for d not a square."""
    if q == 0:
        return (p > 0) - (p < 0)
    if p >= 0 and q > 0:
        return 1
    if p <= 0 and q < 0:
        return -1
    # opposite signs: compare magnitudes by squaring
    if p * p > q * q * d:
        return 1 if p > 0 else -1
    return 1 if q > 0 else -1


def _reduce3(p: int, q: int, r: int) -> tuple[int, int, int]:
    if r < 0:
        p, q, r = -p, -q, -r
    g = gcd(gcd(p, q), r)
    return (p // g, q // g, r // g) if g > 1 else (p, q, r)


@dataclass(frozen=True)
class SurdSource(NumberSource):
    """The quadratic irrational ``(a + b*sqrt(d)) / c``.

    Stored with ``c > 0``, ``gcd(a, b, c) = 1`` and ``d`` squarefree.
    """

    a: int
    b: int
    d: int
    c: int

    def __post_init__(self):
        a, b, d, c = self.a, self.b, self.d, self.c
        if b == 0 or c == 0:
            raise DomainError("surd needs nonzero b and c")
        if d < 2 or isqrt(d) ** 2 == d:
            raise DomainError(f"d={d} must be a positive non-square")
        f = 2
        while f * f <= d:
            while d % (f * f) == 0:
                d //= f * f
                b *= f
            f += 1
        a, b, c = _reduce3(a, b, c)
        for name, val in zip("abdc", (a, b, d, c)):
            object.__setattr__(self, name, val)
        if _surd_floor(a, b, d, c) != 0:
            raise DomainError(f"surd {self} is outside (0, 1)")

    def _shifted(self, shift_num: int, shift_den: int) -> tuple[int, int, int]:
        # (a + b sqrt d)/c - s/t = (a t - s c + b t sqrt d) / (c t)
        return _reduce3(self.a * shift_den - shift_num * self.c, self.b * shift_den, self.c * shift_den)

    def quotient(self, shift_num, shift_den, n):
        _check_n(n)
        p, q, r = self._shifted(shift_num, shift_den)
        d = self.d
        if _surd_floor(p, q, d, r) != 0:
            raise DomainError("shifted value is outside [0, 1)")
        a = 0
        for _ in range(n):
            # invert: r / (p + q sqrt d) = r (p - q sqrt d) / (p^2 - q^2 d)
            p, q, r = _reduce3(r * p, -r * q, p * p - q * q * d)
            a = _surd_floor(p, q, d, r)
            p -= a * r
        return a

    def enclosing_interval(self, depth):
        _check_n(depth)
        return cylinder(self.digits(depth))

    def compare(self, r):
        r = Fraction(r)
        p, q, _ = self._shifted(r.numerator, r.denominator)
        return _surd_sign(p, q, self.d)

    def __str__(self):
        return f"({self.a}{self.b:+d}*sqrt({self.d}))/{self.c}"


class StreamSource(NumberSource):
    """A number known only through its partial quotients.

    ``digits`` is a finite sequence or a zero-argument callable returning an
    iterator (used for unbounded generators). Digits are memoized, so every
    query sees the same expansion.
    """

    def __init__(
        self,
        digits: Sequence[int] | Callable[[], Iterator[int]],
        refinement_limit: int = DEFAULT_REFINEMENT_LIMIT,
        name: str | None = None,
        provenance: str | None = None,
    ):
        if callable(digits):
            self._iter: Iterator[int] | None = iter(digits())
            self._cache: list[int] = []
        else:
            self._iter = None
            self._cache = list(digits)
            for a in self._cache:
                _check_digit(a)
        self.refinement_limit = refinement_limit
        self.name = name
        self.provenance = provenance
        # convergent pairs (p_n, q_n), index 0 holds (p_0, q_0) = (0, 1)
        self._conv: list[tuple[int, int]] = [(0, 1)]
        self._lock = threading.Lock()

    def __str__(self):
        return self.name or "stream"

    @property
    def available(self) -> int | None:
        """Number of digits available, or ``None`` for an unbounded generator."""
        return None if self._iter is not None else len(self._cache)

    def digit(self, i: int) -> int | None:
        """The ``i``-th digit (1-based), or ``None`` past the end of a finite stream."""
        with self._lock:
            while len(self._cache) < i and self._iter is not None:
                try:
                    a = next(self._iter)
                except StopIteration:
                    self._iter = None
                    break
                _check_digit(a)
                self._cache.append(a)
            return self._cache[i - 1] if i <= len(self._cache) else None

    def digits(self, count: int) -> list[int]:
        """The first ``count`` supplied digits (fewer if the stream is shorter)."""
        self.digit(count)
        with self._lock:
            return self._cache[:count]

    def _pair(self, i: int) -> tuple[int, int]:
        """Convergent ``(p_i, q_i)``; raises SourceExhausted if digit i is missing."""
        if self.digit(i) is None:
            raise SourceExhausted(f"{self} has fewer than {i} digits")
        with self._lock:
            while len(self._conv) <= i:
                j = len(self._conv)
                a = self._cache[j - 1]
                p1, q1 = self._conv[j - 1]
                p2, q2 = self._conv[j - 2] if j >= 2 else (1, 0)
                self._conv.append((a * p1 + p2, a * q1 + q2))
            return self._conv[i]

    def _hull(self, depth: int) -> tuple[int, int, int, int]:
        """Endpoints ``u1/v1``, ``u2/v2`` of the depth-``depth`` cylinder of ``x``."""
        p, q = self._pair(depth)
        p0, q0 = self._pair(depth - 1) if depth > 1 else (0, 1)
        return p, q, p + p0, q + q0

    def quotient(self, shift_num, shift_den, n):
        _check_n(n)
        if shift_den < 0:
            shift_num, shift_den = -shift_num, -shift_den
        for depth in range(1, self.refinement_limit + 1):
            u1, v1, u2, v2 = self._hull(depth)
            # shifted endpoints y = u/v - s/t = (u t - s v) / (v t)
            ends = []
            for u, v in ((u1, v1), (u2, v2)):
                num, den = u * shift_den - shift_num * v, v * shift_den
                ends.append((num, den))
            if all(num < 0 for num, _ in ends) or all(num > den for num, den in ends):
                raise DomainError("shifted value is outside [0, 1]")
            if any(num < 0 or num > den for num, den in ends):
                continue
            first = euclid_digits(*ends[0], limit=n)
            if len(first) < n:
                continue
            if euclid_digits(*ends[1], limit=n) == first:
                return first[n - 1]
        raise SourceExhausted(f"refinement limit {self.refinement_limit} reached")

    def enclosing_interval(self, depth):
        _check_n(depth)
        prefix = [self.digit(i) for i in range(1, depth + 1)]
        if None in prefix:
            raise SourceExhausted(f"{self} has fewer than {depth} digits")
        return cylinder(prefix)

    def compare(self, r):
        r = Fraction(r)
        for depth in range(1, self.refinement_limit + 1):
            u1, v1, u2, v2 = self._hull(depth)
            lo, hi = sorted((Fraction(u1, v1), Fraction(u2, v2)))
            if r < lo:
                return 1
            if r > hi:
                return -1
        raise SourceExhausted(f"refinement limit {self.refinement_limit} reached")


def _check_digit(a) -> None:
    if not isinstance(a, int) or a < 1:
        raise DomainError(f"stream digits must be integers >= 1, got {a!r}")


def partial_quotient(src: NumberSource, shift: Fraction | int, n: int) -> int | None:
    return src.partial_quotient(shift, n)


def enclosing_interval(src: NumberSource, depth: int) -> CylinderInterval:
    return src.enclosing_interval(depth)


def exact_value_if_rational(src: NumberSource) -> Fraction | None:
    return src.exact_value()


# builtin streams and the stream file format


def e_minus_2_digits() -> Iterator[int]:
    """1, 2, 1, 1, 4, 1, 1, 6, 1, ... -- the expansion of e - 2."""
    j = 1
    yield 1
    while True:
        yield 2 * j
        yield 1
        yield 1
        j += 1


def e_minus_2(refinement_limit: int = DEFAULT_REFINEMENT_LIMIT) -> StreamSource:
    return StreamSource(e_minus_2_digits, refinement_limit, name="e-2")


def read_stream_file(path: str | Path) -> tuple[list[int], str | None]:
    """Parse a digit file: one partial quotient per line, ``#`` starts a comment.

    Returns the digits and the provenance line (the first comment starting
    with ``provenance:``, else the first comment), if any.
    """
    return parse_stream_text(Path(path).read_text(encoding="utf-8"))


def parse_stream_text(text: str) -> tuple[list[int], str | None]:
    digits: list[int] = []
    comments: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body, _, comment = raw.partition("#")
        if comment.strip():
            comments.append(comment.strip())
        body = body.strip()
        if not body:
            continue
        try:
            a = int(body)
        except ValueError:
            raise DomainError(f"line {lineno}: not an integer: {body!r}") from None
        _check_digit(a)
        digits.append(a)
    provenance = next((c for c in comments if c.startswith("provenance:")), comments[0] if comments else None)
    return digits, provenance


def stream_from_file(path: str | Path, refinement_limit: int = DEFAULT_REFINEMENT_LIMIT) -> StreamSource:
    digits, provenance = read_stream_file(path)
    return StreamSource(digits, refinement_limit, name=f"stream:{path}", provenance=provenance)


def pi_minus_3(refinement_limit: int = DEFAULT_REFINEMENT_LIMIT) -> StreamSource:
    text = resources.files("cfsumset").joinpath("data/pi_minus_3.txt").read_text(encoding="utf-8")
    digits, provenance = parse_stream_text(text)
    return StreamSource(digits, refinement_limit, name="pi-3", provenance=provenance)


def parse_source(text: str, refinement_limit: int = DEFAULT_REFINEMENT_LIMIT) -> NumberSource:
    """Build a source from ``p/q``, ``[a1,...]``, ``surd:a,b,d,c``, ``stream:PATH``, ``e-2`` or ``pi-3``."""
    from .cf import evaluate, parse_cf, parse_rational

    text = text.strip()
    if text == "e-2":
        return e_minus_2(refinement_limit)
    if text == "pi-3":
        return pi_minus_3(refinement_limit)
    if text.startswith("stream:"):
        return stream_from_file(text[len("stream:"):], refinement_limit)
    if text.startswith("surd:"):
        parts = text[len("surd:"):].split(",")
        if len(parts) != 4:
            raise DomainError(f"surd literal needs four integers: {text!r}")
        try:
            a, b, d, c = (int(t) for t in parts)
        except ValueError:
            raise DomainError(f"bad surd literal: {text!r}") from None
        return SurdSource(a, b, d, c)
    if text.startswith("["):
        return RationalSource(evaluate(parse_cf(text)))
    return RationalSource(parse_rational(text))
