"""Acceptance gate. Each test prints one PASS/FAIL line; run with ``pytest -s`` or ``-v`` to see them."""
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from cfsumset.cf import evaluate
from cfsumset.cli import main
from cfsumset.decompose import Termination, decompose, decompose_checked, decompose_mixed, mixed_bound
from cfsumset.gaps import gap, verify_disjoint
from cfsumset.oracle import enumerate_sk, filter_sk, gap_interior_empty, sumset_contains
from cfsumset.sources import RationalSource, SurdSource, e_minus_2, pi_minus_3


@contextmanager
def criterion(capsys, number, title, budget=None):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        if budget is not None:
            assert elapsed < budget, f"took {elapsed:.3f}s, budget {budget}s"
    except BaseException as exc:
        with capsys.disabled():
            print(f"\nFAIL  criterion {number:>2}: {title} ({exc})")
        raise
    with capsys.disabled():
        print(f"\nPASS  criterion {number:>2}: {title} [{elapsed:.3f}s]")


def random_rational(rng, top, bottom=Fraction(0), max_den=10**6):
    """Uniform denominator, then a uniform numerator with bottom < p/q <= top."""
    while True:
        q = rng.randint(1, max_den)
        lo = bottom * q // 1 + 1
        hi = top * q // 1
        if lo <= hi:
            return Fraction(rng.randint(lo, hi), q)


def step_inequalities_hold(c, b):
    """Recompute the continuants from the digits and check every step inequality."""
    q, q1 = 1, 0
    t, t1, t2 = 1, 0, 0
    for n, (cn, bn) in enumerate(zip(c, b), 1):
        q, q1 = cn * q + q1, q
        # q_n q_{n-1} > t_{n-1}(t_{n-1} + t_{n-2}), t here still holds index n-1
        if n >= 2 and not q * q1 > t * (t + t1):
            return False
        t, t1, t2 = bn * t + t1, t, t1
        if bn < cn or not t1 * (t + t1) > q * (q - q1):
            return False
    c1 = c[0]
    return c1 < 3 or all(ci >= (c1 - 1) ** 2 for ci in c[1:])


def test_c01_golden_rational(capsys):
    with criterion(capsys, 1, "34/55 = [2,37] + [8,103] exactly", budget=0.010):
        res = decompose_checked(RationalSource(Fraction(34, 55)), 2)
        assert res.c_digits == (2, 37) and res.b_digits == (8, 103)
        assert res.termination is Termination.EXACT_FINITE
        assert Fraction(37, 75) + Fraction(103, 825) == Fraction(34, 55) == res.partial_sum


def test_c01_cli(capsys):
    assert main(["decompose", "--x", "34/55", "--k", "2", "--json"]) == 0
    capsys.readouterr()


def test_c02_pi(capsys):
    with criterion(capsys, 2, "pi-3 four steps, bound < 1e-42", budget=1.0):
        res = decompose(pi_minus_3(), 4)
        assert res.c_digits == (8, 211, 73445474, 4286135421)
        assert res.b_digits == (60, 58016, 1553951245, 204528884225)
        assert res.achieved_error < Fraction(1, 10**42)


def test_c03_e(capsys):
    with criterion(capsys, 3, "e-2 six steps, bound < 1e-28"):
        res = decompose(e_minus_2(), 6)
        assert res.c_digits == (2, 8, 47, 138, 790, 3088)
        assert res.b_digits == (4, 26, 81, 349, 940, 41582)
        assert res.achieved_error < Fraction(1, 10**28)


def test_c04_surd(capsys):
    with criterion(capsys, 4, "2(sqrt 2 - 1) four steps, bound < 1e-36"):
        src = SurdSource(-2, 2, 2, 1)
        res = decompose(src, 4)
        assert res.c_digits == (2, 51, 139299, 23380586)
        assert res.b_digits == (3, 2143, 8527219, 38512412)
        assert res.achieved_error < Fraction(1, 10**36)
        # and the bound really encloses the surd
        assert src.compare(res.partial_sum - res.achieved_error) > 0 > src.compare(res.partial_sum + res.achieved_error)


@pytest.mark.slow
def test_c05_coverage_suite(capsys):
    with criterion(capsys, 5, "k=2..10, 10000 rationals each: digits >= k, inequalities, exact sums", budget=120):
        rng = random.Random(20240501)
        for k in range(2, 11):
            top = Fraction(1, k - 1)
            for _ in range(10_000):
                x = random_rational(rng, top)
                res = decompose_checked(RationalSource(x), k)
                assert min(res.c_digits + res.b_digits) >= k, (k, x)
                assert step_inequalities_hold(res.c_digits, res.b_digits), (k, x)
                if res.termination is Termination.EXACT_FINITE:
                    assert evaluate(res.c_digits) + evaluate(res.b_digits) == x, (k, x)


def test_c06_gap_oracle(capsys):
    with criterion(capsys, 6, "brute-force S(k), q <= 500: gap interiors empty, endpoints attained", budget=60):
        for k in (3, 4, 5):
            e = enumerate_sk(k, 500)
            for n in (1, 2):
                g = gap(k, n)
                assert gap_interior_empty(e, g) == (True, None), (k, n)
                for end in (g.lo, g.hi):
                    w = sumset_contains(e, end)
                    assert w is not None and sum(w) == end, (k, n, end)
        e3 = enumerate_sk(3, 500)
        assert sumset_contains(e3, Fraction(7, 12)) == (Fraction(1, 4), Fraction(1, 3))
        assert sumset_contains(e3, Fraction(3, 5)) == (Fraction(3, 10), Fraction(3, 10))


def test_c07_disjoint(capsys):
    with criterion(capsys, 7, "G(k, 1..15) disjoint for k=3..10", budget=1.0):
        for k in range(3, 11):
            cert = verify_disjoint(k, 15)
            assert cert.ok, (k, cert.failures())


def test_c08_mixed(capsys):
    with criterion(capsys, 8, "S(m) + S(n) suites, 1000 rationals per pair", budget=60):
        rng = random.Random(7)
        for m, n in ((3, 4), (3, 9), (4, 16), (2, 4)):
            top = mixed_bound(m, n)
            bottom = Fraction(1, 2) if (m, n) == (2, 4) else Fraction(0)
            for _ in range(1000):
                x = random_rational(rng, top, bottom)
                res = decompose_mixed(RationalSource(x), m, n)
                assert min(res.c_digits) >= m and min(res.b_digits) >= n, (m, n, x)
                if res.termination is Termination.EXACT_FINITE:
                    assert res.partial_sum == x


def test_c09_region(capsys):
    with criterion(capsys, 9, "x in (10/21, 23/48) gives c1=3, b1=6, c2=5"):
        rng = random.Random(9)
        for _ in range(100):
            x = random_rational(rng, Fraction(23, 48), Fraction(10, 21))
            if x == Fraction(23, 48):
                continue  # open interval
            res = decompose_checked(RationalSource(x), 3)
            assert (res.c_digits[0], res.b_digits[0], res.c_digits[1]) == (3, 6, 5), x


def test_c10_oracle_independence(capsys):
    with criterion(capsys, 10, "DFS enumeration equals filtering, k=2..5, q <= 60"):
        for k in (2, 3, 4, 5):
            assert enumerate_sk(k, 60).elements == filter_sk(k, 60).elements
