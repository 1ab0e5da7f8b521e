import math

import pytest
from hypothesis import given, strategies as st

from nonclassicality.errors import DomainError
from nonclassicality.numerics import (
    LogFactorialTable,
    binomial,
    double_factorial,
    log_binomial,
    pochhammer,
    stirling2,
)

BELL = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975]


@pytest.mark.parametrize("n,k,expected", [(5, 2, 10), (7, 0, 1), (0, 0, 1), (6, 7, 0)])
def test_binomial_examples(n, k, expected):
    assert binomial(n, k) == expected


def test_binomial_exact_at_upper_bound():
    assert binomial(64, 32) == 1832624140942590534
    assert isinstance(binomial(64, 32), int)
    with pytest.raises(DomainError):
        binomial(65, 2)
    assert log_binomial(100, 50) == pytest.approx(math.log(math.comb(100, 50)), rel=1e-13)


@given(st.integers(1, 32), st.integers(1, 32))
def test_pascal_rule(n, k):
    assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)


@pytest.mark.parametrize("r,k,expected", [(0, 0, 1), (4, 2, 7), (3, 5, 0), (5, 3, 25), (3, 0, 0)])
def test_stirling2_examples(r, k, expected):
    assert stirling2(r, k) == expected


@pytest.mark.parametrize("r", range(11))
def test_stirling2_rows_sum_to_bell_numbers(r):
    assert sum(stirling2(r, k) for k in range(r + 1)) == BELL[r]


def test_stirling2_explicit_formula():
    # S(r,k) = (1/k!) sum_j (-1)^j C(k,j) (k-j)^r
    for r in range(0, 16):
        for k in range(0, r + 1):
            brute = sum((-1) ** j * math.comb(k, j) * (k - j) ** r for j in range(k + 1))
            assert stirling2(r, k) == brute // math.factorial(k)


@pytest.mark.parametrize("n,expected", [(5, 15), (-1, 1), (0, 1), (8, 384), (1, 1), (9, 945)])
def test_double_factorial_examples(n, expected):
    assert double_factorial(n) == expected


def test_double_factorial_large_matches_product():
    for n in (41, 60, 121, 300):
        exact = math.prod(range(n, 0, -2))
        assert double_factorial(n) == pytest.approx(float(exact), rel=1e-12)
    with pytest.raises(DomainError):
        double_factorial(-2)


@pytest.mark.parametrize("x,n,expected", [(0.5, 1, 0.5), (0.5, 2, 0.75), (3.2, 0, 1.0), (1.0, 4, 24.0)])
def test_pochhammer_examples(x, n, expected):
    assert pochhammer(x, n) == pytest.approx(expected, abs=0, rel=1e-15)


@pytest.mark.parametrize("n", range(2, 21, 2))
def test_pochhammer_half_matches_double_factorial(n):
    assert pochhammer(0.5, n // 2) * 2 ** (n // 2) == pytest.approx(double_factorial(n - 1), rel=1e-14)


def test_log_factorial_table():
    t = LogFactorialTable(200)
    assert t[0] == 0.0
    for n in range(1, 201):
        assert abs(t[n] - t[n - 1] - math.log(n)) < 1e-12
    assert t[170] == pytest.approx(math.lgamma(171), rel=1e-13)
    assert not t.values.flags.writeable
