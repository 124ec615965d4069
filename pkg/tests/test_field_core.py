import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from apgroups.errors import DomainError, ResourceError
from apgroups.field_core import (
    build_context,
    divisors,
    element_order,
    factorize,
    is_prime,
    multiplicative_order,
    primes_upto,
    subgroup,
)

from conftest import small_primes


def trial_division_is_prime(n):
    return n >= 2 and all(n % q for q in range(2, math.isqrt(n) + 1))


@pytest.mark.parametrize("n,expected", [(7, True), (1, False), (0, False), (2, True), (561, False)])
def test_is_prime_examples(n, expected):
    assert is_prime(n) is expected


def test_is_prime_matches_trial_division():
    assert all(is_prime(n) == trial_division_is_prime(n) for n in range(5000))


@pytest.mark.parametrize(
    "n",
    [2**61 - 1, 2**64 - 59, 3215031751, 3825123056546413051],
)
def test_is_prime_known_large(n):
    # the last two are strong pseudoprimes to many small bases
    assert is_prime(n) == (n in (2**61 - 1, 2**64 - 59))


@pytest.mark.parametrize(
    "n,expected",
    [(12, [2, 2, 3]), (6, [2, 3]), (2147483647, [2147483647]), (2**32 + 1, [641, 6700417])],
)
def test_factorize_examples(n, expected):
    assert factorize(n) == expected


def test_factorize_rejects_small():
    with pytest.raises(DomainError):
        factorize(1)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=2, max_value=2**62))
def test_factorize_recomposes(n):
    fs = factorize(n)
    assert math.prod(fs) == n
    assert all(is_prime(f) for f in fs)


def test_factorize_semiprime_needs_rho():
    a, b = 1000003, 998244353
    assert factorize(a * b) == [a, b]


@pytest.mark.parametrize("p,g", [(7, 3), (5, 2), (11, 2), (23, 5), (41, 6)])
def test_smallest_primitive_root(p, g):
    assert build_context(p).g == g


def test_context_examples():
    assert build_context(7).dlog[2] == 2
    assert build_context(5).dlog[1] == 0


def test_context_invariants_exhaustive():
    for p in small_primes(1000):
        ctx = build_context(p)
        x = np.arange(1, p)
        logs = ctx.dlog[1:]
        assert sorted(logs.tolist()) == list(range(p - 1))
        assert all(pow(ctx.g, int(logs[i]), p) == x[i] for i in range(0, p - 1, max(1, p // 50)))
        assert math.prod(ctx.factors_p_minus_1) == p - 1
        assert element_order(ctx, ctx.g) == p - 1


def test_context_errors():
    with pytest.raises(DomainError):
        build_context(9)
    with pytest.raises(DomainError):
        build_context(2)
    with pytest.raises(ResourceError):
        build_context(1009, table_budget=1000)


@pytest.mark.parametrize("p,d,elems", [(7, 3, [1, 2, 4]), (5, 2, [1, 4]), (7, 6, [1, 2, 3, 4, 5, 6])])
def test_subgroup_examples(p, d, elems):
    G = subgroup(build_context(p), d)
    assert G.elements.tolist() == elems
    assert len(G) == d


def test_subgroup_rejects_non_divisor():
    with pytest.raises(DomainError):
        subgroup(build_context(7), 4)


def test_subgroup_matches_power_closure():
    for p in small_primes(300):
        ctx = build_context(p)
        for d in divisors(p - 1):
            h = pow(ctx.g, (p - 1) // d, p)
            closure, y = set(), 1
            while y not in closure:
                closure.add(y)
                y = y * h % p
            G = subgroup(ctx, d)
            assert set(G.elements.tolist()) == closure
            assert not G.membership[0]
            assert 1 in G


def test_subgroup_closed_under_multiplication():
    ctx = build_context(61)
    G = subgroup(ctx, 12)
    el = G.elements.tolist()
    assert all(a * b % 61 in G for a in el for b in el)


@pytest.mark.parametrize("x,order", [(1, 1), (6, 2), (3, 6), (2, 3)])
def test_element_order_examples(x, order):
    assert element_order(build_context(7), x) == order


def test_element_order_zero():
    with pytest.raises(DomainError):
        element_order(build_context(7), 0)


def test_element_order_divides_and_is_minimal():
    for p in small_primes(120):
        ctx = build_context(p)
        for x in range(1, p):
            k = element_order(ctx, x)
            assert (p - 1) % k == 0
            assert pow(x, k, p) == 1
            assert all(pow(x, j, p) != 1 for j in range(1, k))


def test_order_without_table():
    p = 2**61 - 1
    assert multiplicative_order(p - 1, p) == 2
    assert multiplicative_order(37, 1009) == element_order(build_context(1009), 37)


def test_divisors_and_sieve():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(1) == [1]
    assert primes_upto(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
