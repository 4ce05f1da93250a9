import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zerosum import DomainError, ResourceCapError
from zerosum.ntheory import (
    census_E,
    census_table,
    chebyshev_theta,
    check_M_lower_bounds,
    check_prime_pi_bound,
    factorize,
    is_prime,
    largest_prime_divisor,
    largest_prime_power_divisor,
    m_tables,
    omega,
    p_n_r,
    prime_pi,
    prime_pi_table,
    primorial_liminf_table,
    smallest_prime_factor,
)


def naive_M(n):
    best = 1
    for p in range(2, n + 1):
        if n % p == 0 and all(p % d for d in range(2, math.isqrt(p) + 1)):
            q = p
            while n % (q * p) == 0:
                q *= p
            best = max(best, q)
    return best


def test_M_examples():
    assert largest_prime_power_divisor(200) == 25
    assert largest_prime_power_divisor(40) == 8
    assert largest_prime_power_divisor(20) == 5
    assert largest_prime_power_divisor(1) == 1
    with pytest.raises(DomainError):
        largest_prime_power_divisor(0)


def test_M_matches_naive():
    for n in range(1, 400):
        assert largest_prime_power_divisor(n) == naive_M(n)


def test_sieve_matches_single():
    t = m_tables(5000)
    for n in range(1, 5001):
        assert t.M[n] == largest_prime_power_divisor(n)
        assert t.omega[n] == omega(n)


def test_p_n_r():
    assert p_n_r(200, 3) == 5
    assert p_n_r(200, 7) == 25
    assert p_n_r(200, 1) == 5
    assert p_n_r(200, 26) == 125
    with pytest.raises(DomainError):
        p_n_r(1, 2)


def test_factorize_large():
    f = factorize(999983 * 1000003)
    assert f.factors == ((999983, 1), (1000003, 1))
    assert factorize(2**40).factors == ((2, 40),)
    assert factorize(1).factors == ()
    assert is_prime(1000003) and not is_prime(1)


@given(st.integers(1, 10**9))
def test_M_properties(n):
    M = largest_prime_power_divisor(n)
    P = largest_prime_divisor(n)
    assert n % M == 0
    if n > 1:
        assert len(factorize(M).factors) == 1
    assert P <= M <= n
    f = factorize(n)
    assert math.prod(p**a for p, a in f.factors) == n
    assert all(is_prime(p) for p, _ in f.factors)


@settings(max_examples=200)
@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_omega_additive(a, b):
    if math.gcd(a, b) == 1:
        assert omega(a * b) == omega(a) + omega(b)


def test_prime_pi_theta():
    assert prime_pi(10) == 4
    assert prime_pi(1) == 0
    assert chebyshev_theta(10) == pytest.approx(math.log(210), rel=1e-12)
    table = prime_pi_table(100)
    assert table[100] == 25 and table[2] == 1


def test_spf():
    spf = smallest_prime_factor(100)
    assert spf[91] == 7 and spf[97] == 97 and spf[64] == 2


def test_prime_pi_bound_small():
    holds, argmin, slack = check_prime_pi_bound(10**4)
    assert holds and slack >= 0


def test_M_lower_bounds_small():
    rep = check_M_lower_bounds(10**4)
    assert rep.log_bound_holds and rep.root_bound_holds
    assert rep.violations == []
    # primes are the equality case M(n) = n = n^(1/1)
    assert rep.root_bound_min_ratio == pytest.approx(1.0)


def test_census_examples():
    assert census_E(10, 2).count_E == 2
    assert census_E(1000, 1000).count_E == 1000
    assert census_E(0, 5).count_E == 0


def test_census_monotone():
    t = m_tables(20000)
    counts = [census_E(20000, y, tables=t).count_E for y in (1, 2, 5, 10, 50, 100, 1000, 20000)]
    assert counts == sorted(counts)
    assert counts[-1] == 20000


def test_census_table_ratio():
    rows = census_table([100, 1000], A=2, eps=0.1)
    assert [r.x for r in rows] == [100, 1000]
    for r in rows:
        assert r.exponent == pytest.approx(0.6)
        assert r.y == pytest.approx(math.log(r.x) ** 2)
        assert r.ratio == pytest.approx(r.count_E / r.x**0.6)
    with pytest.raises(DomainError):
        census_table([10], A=0.5, eps=0.1)


def test_census_budget():
    with pytest.raises(ResourceCapError):
        census_E(10**6, 10, budget=1000)


def test_primorial_table():
    rows = primorial_liminf_table(25)
    assert rows[0]["ratio"] == pytest.approx(2 / math.log(2), rel=1e-12)
    assert 0.8 <= rows[24]["ratio"] <= 1.3
    n = 1
    for row in rows[:12]:
        n *= row["p_k"]
        assert largest_prime_power_divisor(n) == row["p_k"]
        assert row["ln_n_k"] == pytest.approx(math.log(n), rel=1e-9)
    assert primorial_liminf_table(0) == []
