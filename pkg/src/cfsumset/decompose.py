"""Split ``x`` in ``(0, 1]`` into two continued fractions with large partial quotients.

The construction alternates between the two summands::

    c_1     = a_1(x) + 1
    b_n     = a_n(x - p_n/q_n)
    c_{n+1} = a_{n+1}(x - s_n/t_n) + 1

where ``p_n/q_n = [c_1..c_n]`` and ``s_n/t_n = [b_1..b_n]``. For rational
``x`` a requested digit can be undefined; the run then stops and the two
convergents sum to ``x`` exactly.

Every step checks the growth inequalities the construction guarantees (all
as exact integer or rational comparisons). A failed check raises
:class:`InvariantViolation`, which signals a bug in this code.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .cf import DomainError, evaluate
from .sources import NumberSource, SourceExhausted, StreamSource

DEFAULT_MAX_STEPS = 64


class Termination(str, enum.Enum):
    EXACT_FINITE = "ExactFinite"
    DEPTH_REACHED = "DepthReached"
    SOURCE_EXHAUSTED = "SourceExhausted"


class InvariantViolation(AssertionError):
    def __init__(self, message: str, step: int):
        super().__init__(f"step {step}: {message}")
        self.step = step


class StateError(RuntimeError):
    pass


@dataclass(frozen=True)
class StepDiagnostics:
    """Per-step bounds.

    ``bk_lower_bound`` is the strict lower bound for ``b_index`` and
    ``ck_lower_bound`` the strict lower bound for ``c_{index+1}`` (``None``
    when the run stopped before ``c_{index+1}`` existed). ``error_bound`` is
    ``1/(t_n (t_n + t_{n-1}))``, which dominates ``|x - p_n/q_n - s_n/t_n|``.
    """

    index: int
    bk_lower_bound: Fraction
    ck_lower_bound: Fraction | None
    error_bound: Fraction


@dataclass
class DecompositionState:
    """Mutable state of one run; ``*_prev`` hold the index ``n-1`` (and ``n-2``) values."""

    c_digits: list[int] = field(default_factory=list)
    b_digits: list[int] = field(default_factory=list)
    p: int = 0
    q: int = 1
    p_prev: int = 1
    q_prev: int = 0
    s: int = 0
    t: int = 1
    s_prev: int = 1
    t_prev: int = 0
    step_log: list[StepDiagnostics] = field(default_factory=list)

    def push_c(self, c: int) -> None:
        self.c_digits.append(c)
        self.p, self.p_prev = c * self.p + self.p_prev, self.p
        self.q, self.q_prev = c * self.q + self.q_prev, self.q

    def push_b(self, b: int) -> None:
        self.b_digits.append(b)
        self.s, self.s_prev = b * self.s + self.s_prev, self.s
        self.t, self.t_prev = b * self.t + self.t_prev, self.t

    @property
    def steps(self) -> int:
        return len(self.b_digits)

    @property
    def partial_sum(self) -> Fraction:
        return Fraction(self.p, self.q) + Fraction(self.s, self.t)

    def error_bound(self) -> Fraction:
        if not self.b_digits:
            raise StateError("no completed step yet")
        return Fraction(1, self.t * (self.t + self.t_prev))


def error_bound(state: DecompositionState) -> Fraction:
    return state.error_bound()


@dataclass(frozen=True)
class DecompositionResult:
    c_digits: tuple[int, ...]
    b_digits: tuple[int, ...]
    termination: Termination
    achieved_error: Fraction | None
    steps: int
    diagnostics: tuple[StepDiagnostics, ...] = ()

    @property
    def c_value(self) -> Fraction:
        return evaluate(self.c_digits)

    @property
    def b_value(self) -> Fraction:
        return evaluate(self.b_digits)

    @property
    def partial_sum(self) -> Fraction:
        return self.c_value + self.b_value

    @property
    def merged(self) -> list[int]:
        """``c_1, b_1, c_2, b_2, ...``"""
        out = []
        for i, c in enumerate(self.c_digits):
            out.append(c)
            if i < len(self.b_digits):
                out.append(self.b_digits[i])
        return out

    @property
    def merged_nondecreasing(self) -> bool:
        m = self.merged
        return all(x <= y for x, y in zip(m, m[1:]))


def _b_bound(st: DecompositionState) -> Fraction:
    """Strict lower bound for ``b_n``; state holds ``q_n, q_{n-1}, t_{n-1}, t_{n-2}`` (before pushing b_n)."""
    tp = st.t
    return Fraction(st.q, tp) ** 2 - Fraction(st.q_prev * st.q, tp * tp) - 1 - Fraction(st.t_prev, tp)


def _c_bound(st: DecompositionState) -> Fraction:
    """Strict lower bound for ``c_{n+1}``; state holds ``q_n, q_{n-1}, t_n, t_{n-1}``."""
    qn = st.q
    return Fraction(st.t, qn) ** 2 + Fraction(st.t * st.t_prev, qn * qn) - Fraction(st.q_prev, qn)


def _check_b(st: DecompositionState, n: int, bound: Fraction) -> None:
    c_n, b_n = st.c_digits[-1], st.b_digits[-1]
    if b_n < c_n:
        raise InvariantViolation(f"b_{n}={b_n} < c_{n}={c_n}", n)
    if not st.t_prev * (st.t + st.t_prev) > st.q * (st.q - st.q_prev):
        raise InvariantViolation("t_{n-1}(t_n+t_{n-1}) > q_n(q_n-q_{n-1}) fails", n)
    if not b_n > bound:
        raise InvariantViolation(f"b_{n}={b_n} does not exceed {bound}", n)


def _check_c(st: DecompositionState, n: int, bound: Fraction) -> None:
    """Checks on the freshly pushed ``c_{n+1}``; ``t`` still holds index ``n``."""
    c_next = st.c_digits[-1]
    if c_next < 2:
        raise InvariantViolation(f"c_{n + 1}={c_next} < 2", n + 1)
    if not st.q * st.q_prev > st.t * (st.t + st.t_prev):
        raise InvariantViolation("q_{n+1} q_n > t_n(t_n+t_{n-1}) fails", n + 1)
    if not c_next > bound:
        raise InvariantViolation(f"c_{n + 1}={c_next} does not exceed {bound}", n + 1)
    c1 = st.c_digits[0]
    if c1 >= 3 and c_next < (c1 - 1) ** 2:
        raise InvariantViolation(f"c_{n + 1}={c_next} < (c_1-1)^2", n + 1)


def _result(st: DecompositionState, termination: Termination) -> DecompositionResult:
    if termination is Termination.EXACT_FINITE:
        achieved = Fraction(0)
    elif st.b_digits:
        achieved = st.error_bound()
    else:
        achieved = None
    return DecompositionResult(
        c_digits=tuple(st.c_digits),
        b_digits=tuple(st.b_digits),
        termination=termination,
        achieved_error=achieved,
        steps=st.steps,
        diagnostics=tuple(st.step_log),
    )


def _check_domain(src: NumberSource) -> None:
    if isinstance(src, StreamSource):
        return  # positive partial quotients always give a value in (0, 1]
    if src.compare(Fraction(0)) <= 0 or src.compare(Fraction(1)) > 0:
        raise DomainError(f"{src} is outside (0, 1]")


def _require_at_most(src: NumberSource, bound: Fraction) -> None:
    try:
        above = src.compare(bound) > 0
    except SourceExhausted as exc:
        raise DomainError(f"cannot decide whether {src} <= {bound}: {exc}") from exc
    if above:
        raise DomainError(f"{src} exceeds {bound}")


def run(src: NumberSource, max_steps: int = DEFAULT_MAX_STEPS, check: bool = True) -> tuple[DecompositionState, Termination]:
    """Drive the construction and return the final state and why it stopped.

    ``check=False`` skips the invariant checks and bound bookkeeping.
    """
    if max_steps < 1:
        raise DomainError("max_steps must be >= 1")
    _check_domain(src)
    exact = src.exact_value()
    st = DecompositionState()
    try:
        st.push_c(src.quotient(0, 1, 1) + 1)
        if check and not st.c_digits[0] > 1:
            raise InvariantViolation("c_1 <= 1", 1)
        for n in range(1, max_steps + 1):
            b = src.quotient(st.p, st.q, n)
            if b is None:
                return st, _finish(st, exact, n)
            b_bound = _b_bound(st) if check else None
            st.push_b(b)
            if check:
                _check_b(st, n, b_bound)
            # only rationals can stop, so irrational runs skip the probe at the last step
            probe = n < max_steps or exact is not None
            a = src.quotient(st.s, st.t, n + 1) if probe else None
            if a is None or n == max_steps:
                if check:
                    st.step_log.append(StepDiagnostics(n, b_bound, None, st.error_bound()))
                if probe and a is None:
                    return st, _finish(st, exact, n)
                return st, Termination.DEPTH_REACHED
            c_bound = _c_bound(st) if check else None
            st.push_c(a + 1)
            if check:
                _check_c(st, n, c_bound)
                st.step_log.append(StepDiagnostics(n, b_bound, c_bound, st.error_bound()))
    except SourceExhausted:
        return st, Termination.SOURCE_EXHAUSTED
    raise AssertionError("unreachable")


def _finish(st: DecompositionState, exact: Fraction | None, n: int) -> Termination:
    if exact is not None and st.partial_sum != exact:
        raise InvariantViolation(f"finite decomposition sums to {st.partial_sum}, not {exact}", n)
    return Termination.EXACT_FINITE


def decompose(src: NumberSource, max_steps: int = DEFAULT_MAX_STEPS, check: bool = True) -> DecompositionResult:
    """Run the construction on ``src`` for at most ``max_steps`` steps."""
    st, why = run(src, max_steps, check)
    return _result(st, why)


def _require_digits(res: DecompositionResult, c_min: int, b_min: int) -> None:
    for i, c in enumerate(res.c_digits, 1):
        if c < c_min:
            raise InvariantViolation(f"c_{i}={c} < {c_min}", i)
    for i, b in enumerate(res.b_digits, 1):
        if b < b_min:
            raise InvariantViolation(f"b_{i}={b} < {b_min}", i)


def decompose_checked(src: NumberSource, k: int, max_steps: int = DEFAULT_MAX_STEPS) -> DecompositionResult:
    """Decompose ``x`` in ``(0, 1/(k-1)]`` into two elements of S(k)."""
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")
    _require_at_most(src, Fraction(1, k - 1))
    res = decompose(src, max_steps)
    _require_digits(res, k, k)
    return res


def mixed_bound(m: int, n: int) -> Fraction:
    """Right end of the interval covered by S(m) + S(n), or DomainError if the pair is unsupported."""
    if 3 <= m < n <= (m - 1) ** 2:
        return Fraction(1, m - 1)
    if m >= 2 and n == m * m:
        return Fraction(m + 1, m * m)
    raise DomainError(f"(m, n) = ({m}, {n}) needs 3 <= m < n <= (m-1)^2 or n = m^2")


def decompose_mixed(src: NumberSource, m: int, n: int, max_steps: int = DEFAULT_MAX_STEPS) -> DecompositionResult:
    """Decompose ``x`` into ``c + b`` with ``c`` in S(m) and ``b`` in S(n)."""
    bound = mixed_bound(m, n)
    _require_at_most(src, bound)
    res = decompose(src, max_steps)
    _require_digits(res, m, n)
    return res
