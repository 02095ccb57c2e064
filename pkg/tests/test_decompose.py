from fractions import Fraction
from math import floor

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfsumset.cf import DomainError, continuant
from cfsumset.decompose import (
    DecompositionState,
    InvariantViolation,
    StateError,
    Termination,
    _check_b,
    decompose,
    decompose_checked,
    decompose_mixed,
    error_bound,
    mixed_bound,
    run,
)
from cfsumset.sources import RationalSource, StreamSource, SurdSource, e_minus_2, pi_minus_3


def gauss_digit(y, n):
    """n-th partial quotient of a rational y in [0, 1] by iterating the Gauss map; None if y has fewer."""
    for _ in range(n):
        if y == 0:
            return None
        y = 1 / y
        a = floor(y)
        y -= a
    return a


def nested(digits):
    x = Fraction(0)
    for a in reversed(digits):
        x = 1 / (a + x)
    return x


def reference(x, max_steps=64):
    """Straight transcription of the defining recurrences."""
    c, b = [gauss_digit(x, 1) + 1], []
    while len(b) < max_steps:
        n = len(c)
        bn = gauss_digit(x - nested(c), n)
        if bn is None:
            break
        b.append(bn)
        a = gauss_digit(x - nested(b), n + 1)
        if a is None:
            break
        c.append(a + 1)
    return c, b


@st.composite
def unit_rationals(draw, max_den=2000, top=Fraction(1)):
    q = draw(st.integers(-(-1 // top), max_den))  # smallest q with 1/q <= top
    p = draw(st.integers(1, floor(top * q)))
    return Fraction(p, q)


class TestExamples:
    @pytest.mark.parametrize("x,c,b", [
        (Fraction(1), (2,), (2,)),
        (Fraction(34, 55), (2, 37), (8, 103)),
        (Fraction(1, 2), (3,), (6,)),
    ])
    def test_rational(self, x, c, b):
        res = decompose(RationalSource(x))
        assert (res.c_digits, res.b_digits) == (c, b)
        assert res.termination is Termination.EXACT_FINITE
        assert res.c_value + res.b_value == x
        assert res.achieved_error == 0

    def test_fibonacci_values(self):
        res = decompose(RationalSource(Fraction(34, 55)))
        assert (res.c_value, res.b_value) == (Fraction(37, 75), Fraction(103, 825))

    def test_k5_quarter(self):
        res = decompose_checked(RationalSource(Fraction(1, 4)), 5)
        assert (res.c_digits, res.b_digits) == ((5,), (20,))

    def test_pi(self):
        res = decompose(pi_minus_3(), 4)
        assert res.c_digits == (8, 211, 73445474, 4286135421)
        assert res.b_digits == (60, 58016, 1553951245, 204528884225)
        assert res.termination is Termination.DEPTH_REACHED
        assert res.achieved_error < Fraction(1, 10**42)

    def test_e(self):
        res = decompose(e_minus_2(), 6)
        assert res.c_digits == (2, 8, 47, 138, 790, 3088)
        assert res.b_digits == (4, 26, 81, 349, 940, 41582)
        assert res.achieved_error < Fraction(1, 10**28)

    def test_surd(self):
        res = decompose(SurdSource(-2, 2, 2, 1), 4)
        assert res.c_digits == (2, 51, 139299, 23380586)
        assert res.b_digits == (3, 2143, 8527219, 38512412)
        assert res.achieved_error < Fraction(1, 10**36)
        assert res.merged_nondecreasing

    def test_surd_error_is_sound(self):
        # the true value lies within the bound of the partial sum
        src = SurdSource(-2, 2, 2, 1)
        res = decompose(src, 4)
        assert src.compare(res.partial_sum - res.achieved_error) > 0
        assert src.compare(res.partial_sum + res.achieved_error) < 0

    def test_c1_two_region(self):
        for x in (Fraction(5, 6) + Fraction(1, 10**6), Fraction(43, 50), Fraction(9, 10) - Fraction(1, 997)):
            res = decompose(RationalSource(x))
            assert res.c_digits[0] == res.b_digits[0] == res.c_digits[1] == 2

    def test_merged_order_can_fail(self):
        res = decompose_checked(RationalSource((Fraction(10, 21) + Fraction(23, 48)) / 2), 3)
        assert res.c_digits[:2] == (3, 5) and res.b_digits[0] == 6
        assert not res.merged_nondecreasing


class TestAgainstReference:
    @settings(max_examples=300, deadline=None)
    @given(unit_rationals())
    def test_digits_match_recurrences(self, x):
        res = decompose(RationalSource(x))
        c, b = reference(x)
        assert list(res.c_digits) == c and list(res.b_digits) == b

    @settings(max_examples=300, deadline=None)
    @given(unit_rationals())
    def test_exact_and_inequalities(self, x):
        res = decompose(RationalSource(x))
        assert res.termination is Termination.EXACT_FINITE
        assert res.c_value + res.b_value == x
        c, b = res.c_digits, res.b_digits
        assert all(ci >= 2 for ci in c)
        assert all(bi >= ci for bi, ci in zip(b, c))
        for n in range(1, len(b) + 1):
            q, q1 = continuant(c[:n]), continuant(c[:n - 1])
            t, t1, t2 = continuant(b[:n]), continuant(b[:n - 1]), continuant(b[:n - 2]) if n >= 2 else 0
            assert q * q1 > t1 * (t1 + t2)
            assert t1 * (t + t1) > q * (q - q1)
        if c[0] >= 3:
            assert all(ci >= (c[0] - 1) ** 2 for ci in c[1:])

    @settings(max_examples=200, deadline=None)
    @given(unit_rationals())
    def test_residual_below_bound(self, x):
        res = decompose(RationalSource(x))
        bounds = [d.error_bound for d in res.diagnostics]
        assert all(a > b for a, b in zip(bounds, bounds[1:]))
        for d in res.diagnostics:
            n = d.index
            residual = abs(x - nested(res.c_digits[:n]) - nested(res.b_digits[:n]))
            assert residual < d.error_bound
            t, t1 = continuant(res.b_digits[:n]), continuant(res.b_digits[:n - 1])
            assert d.error_bound == Fraction(1, t * (t + t1))
            assert res.b_digits[n - 1] > d.bk_lower_bound
            if d.ck_lower_bound is not None:
                assert res.c_digits[n] > d.ck_lower_bound

    def test_all_small_denominators(self):
        for q in range(1, 301):
            for p in range(1, q + 1):
                x = Fraction(p, q)
                if x.denominator == q:
                    res = decompose(RationalSource(x))
                    assert res.termination is Termination.EXACT_FINITE and res.partial_sum == x


class TestChecked:
    @settings(max_examples=200, deadline=None)
    @given(st.integers(2, 12), st.data())
    def test_membership(self, k, data):
        x = data.draw(unit_rationals(max_den=10**6, top=Fraction(1, k - 1)))
        res = decompose_checked(RationalSource(x), k)
        assert min(res.c_digits + res.b_digits) >= k

    def test_interval_regression(self):
        lo, hi = Fraction(10, 21), Fraction(23, 48)
        for i in range(1, 60):
            x = lo + (hi - lo) * Fraction(i, 60)
            res = decompose_checked(RationalSource(x), 3)
            assert (res.c_digits[0], res.b_digits[0], res.c_digits[1]) == (3, 6, 5)

    @pytest.mark.parametrize("x,k", [(Fraction(1, 2), 4), (Fraction(3, 4), 3), (Fraction(1), 3)])
    def test_outside_interval(self, x, k):
        with pytest.raises(DomainError):
            decompose_checked(RationalSource(x), k)

    def test_k_too_small(self):
        with pytest.raises(DomainError):
            decompose_checked(RationalSource(Fraction(1, 2)), 1)


class TestMixed:
    def test_examples(self):
        res = decompose_mixed(RationalSource(Fraction(1, 2)), 3, 4)
        assert (res.c_digits, res.b_digits) == ((3,), (6,))
        res = decompose_mixed(RationalSource(Fraction(3, 4)), 2, 4)
        assert res.partial_sum == Fraction(3, 4) and min(res.b_digits) >= 4
        res = decompose_mixed(RationalSource(Fraction(4, 9)), 3, 9)
        assert res.partial_sum == Fraction(4, 9) and min(res.c_digits) >= 3 and min(res.b_digits) >= 9

    def test_bounds(self):
        assert mixed_bound(3, 4) == Fraction(1, 2)
        assert mixed_bound(2, 4) == Fraction(3, 4)
        assert mixed_bound(4, 16) == Fraction(5, 16)
        for m, n in ((2, 3), (3, 5), (4, 10), (3, 3)):
            with pytest.raises(DomainError):
                mixed_bound(m, n)

    def test_above_bound(self):
        with pytest.raises(DomainError):
            decompose_mixed(RationalSource(Fraction(4, 9) + Fraction(1, 1000)), 3, 9)

    @settings(max_examples=150, deadline=None)
    @given(st.sampled_from([(3, 4), (4, 9), (5, 16), (3, 9), (4, 16), (2, 4)]), st.data())
    def test_postconditions(self, pair, data):
        m, n = pair
        x = data.draw(unit_rationals(max_den=10**5, top=mixed_bound(m, n)))
        res = decompose_mixed(RationalSource(x), m, n)
        assert min(res.c_digits) >= m and min(res.b_digits) >= n
        assert res.partial_sum == x


class TestTermination:
    def test_depth_reached(self):
        res = decompose(e_minus_2(), 3)
        assert res.termination is Termination.DEPTH_REACHED and res.steps == 3

    def test_source_exhausted(self):
        res = decompose(StreamSource([1, 2, 1, 1]), 10)
        assert res.termination is Termination.SOURCE_EXHAUSTED
        assert res.c_digits[0] == 2

    def test_rational_probe_at_max_steps(self):
        # 34/55 finishes after two steps; a cap of two must still report an exact result
        assert decompose(RationalSource(Fraction(34, 55)), 2).termination is Termination.EXACT_FINITE
        assert decompose(RationalSource(Fraction(34, 55)), 1).termination is Termination.DEPTH_REACHED

    def test_bad_max_steps(self):
        with pytest.raises(DomainError):
            decompose(RationalSource(Fraction(1, 2)), 0)

    def test_no_check_gives_same_digits(self):
        a = decompose(pi_minus_3(), 4, check=False)
        b = decompose(pi_minus_3(), 4)
        assert (a.c_digits, a.b_digits) == (b.c_digits, b.b_digits)
        assert a.diagnostics == ()


class TestState:
    def test_error_bound_before_step(self):
        st_ = DecompositionState()
        with pytest.raises(StateError):
            error_bound(st_)
        st_.push_c(3)
        with pytest.raises(StateError):
            error_bound(st_)
        st_.push_b(6)
        assert error_bound(st_) == Fraction(1, 42)

    def test_run_returns_state(self):
        st_, why = run(RationalSource(Fraction(34, 55)))
        assert why is Termination.EXACT_FINITE
        assert (st_.p, st_.q, st_.s, st_.t) == (37, 75, 103, 825)

    def test_violation_detected(self):
        st_ = DecompositionState()
        st_.push_c(5)
        st_.push_b(3)
        with pytest.raises(InvariantViolation) as info:
            _check_b(st_, 1, Fraction(0))
        assert info.value.step == 1

    def test_wrong_digit_source_is_caught(self):
        class Lying(RationalSource):
            def quotient(self, shift_num, shift_den, n):
                a = super().quotient(shift_num, shift_den, n)
                return 2 if (shift_num, n) == (1, 1) and a is not None else a

        with pytest.raises(InvariantViolation):
            decompose(Lying(Fraction(1, 2)))

    def test_domain_via_compare(self):
        class Above(RationalSource):
            def compare(self, r):
                return 1

        with pytest.raises(DomainError):
            decompose(Above(Fraction(1, 2)))
        # a stream of positive digits is always in range, even when its first digit is undecidable
        assert decompose(StreamSource([1]), 1).termination is Termination.SOURCE_EXHAUSTED
