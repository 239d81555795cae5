import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slucas.intmath import (
    BudgetError,
    Factorization,
    FactorizationError,
    factorize,
    is_prime_oracle,
    isqrt_newton,
    jacobi,
    mod_pow,
    nth_odd_prime,
    odd_primes,
    sieve_primes,
    two_adic_split,
)
from slucas.kernels import count_primes_segmented


@pytest.mark.parametrize("a,n,expected", [(1, 15, 1), (2, 3, -1), (14, 5, 1), (0, 1, 1), (6, 9, 0), (-1, 7, -1)])
def test_jacobi_examples(a, n, expected):
    assert jacobi(a, n) == expected


@pytest.mark.parametrize("n", [0, -3, 4])
def test_jacobi_rejects_bad_modulus(n):
    with pytest.raises(ValueError):
        jacobi(3, n)


def test_jacobi_matches_euler_criterion():
    for n in range(3, 1200, 2):
        fac = factorize(n)
        for a in range(n):
            expected = 1
            for p, r in fac:
                e = mod_pow(a, (p - 1) // 2, p)
                legendre = 0 if e == 0 else (1 if e == 1 else -1)
                expected *= legendre**r
            assert jacobi(a, n) == expected, (a, n)


@pytest.mark.slow
def test_jacobi_matches_euler_criterion_sampled_to_1e4():
    rng = random.Random(11)
    for n in range(1201, 10**4, 2):
        fac = factorize(n)
        for a in rng.sample(range(n), 20):
            expected = 1
            for p, r in fac:
                e = pow(a, (p - 1) // 2, p)
                expected *= (0 if e == 0 else (1 if e == 1 else -1)) ** r
            assert jacobi(a, n) == expected


@pytest.mark.parametrize("n,r", [(49, 7), (48, 6), (0, 0), (1, 1), (2**200, 2**100)])
def test_isqrt_examples(n, r):
    assert isqrt_newton(n) == r


@given(st.integers(min_value=0, max_value=2**256))
def test_isqrt_property(n):
    r = isqrt_newton(n)
    assert r * r <= n < (r + 1) ** 2


def test_isqrt_rejects_negative():
    with pytest.raises(ValueError):
        isqrt_newton(-1)


@pytest.mark.parametrize("m,split", [(12, (2, 3)), (1, (0, 1)), (16, (4, 1))])
def test_two_adic_examples(m, split):
    assert two_adic_split(m) == split


def test_two_adic_roundtrip():
    for m in range(1, 10**5 + 1):
        kappa, q = two_adic_split(m)
        assert q % 2 == 1 and (q << kappa) == m


@pytest.mark.parametrize("n,entries", [(9, ((3, 2),)), (15, ((3, 1), (5, 1))), (1024, ((2, 10),))])
def test_factorize_examples(n, entries):
    assert factorize(n).entries == entries


def test_factorize_roundtrip_small():
    for n in range(2, 10**5 + 1):
        fac = factorize(n)
        assert fac.value == n
        assert all(is_prime_oracle(p) for p in fac.primes)


@pytest.mark.slow
def test_factorize_semiprimes_64bit():
    rng = random.Random(2024)
    for _ in range(1000):
        p = q = 4
        while not is_prime_oracle(p):
            p = rng.getrandbits(32) | (1 << 31) | 1
        while not is_prime_oracle(q):
            q = rng.getrandbits(32) | (1 << 31) | 1
        fac = factorize(p * q)
        assert sorted(fac.primes) == sorted({p, q}) and fac.value == p * q


def test_factorize_budget_is_explicit():
    p, q = 2**61 - 1, 2**89 - 1
    with pytest.raises(FactorizationError):
        factorize(p * q, rho_iterations=100)


def test_factorization_validates():
    with pytest.raises(ValueError):
        Factorization(((5, 1), (3, 1)))
    with pytest.raises(ValueError):
        Factorization(((3, 0),))


def test_sieve_examples():
    assert list(sieve_primes(10)) == [2, 3, 5, 7]
    assert list(sieve_primes(2)) == [2]
    assert list(sieve_primes(1)) == []


def test_sieve_against_segmented_counter():
    assert len(sieve_primes(1 << 20)) == count_primes_segmented(1 << 20, 1 << 14) == 82025


def test_sieve_budget():
    with pytest.raises(BudgetError):
        sieve_primes(10**6, budget=10**5)


def test_nth_odd_prime():
    assert (nth_odd_prime(1), nth_odd_prime(2), nth_odd_prime(128)) == (3, 5, 727)
    assert odd_primes(5) == (3, 5, 7, 11, 13)
    with pytest.raises(ValueError):
        nth_odd_prime(0)


def test_mod_pow_examples():
    assert mod_pow(2, 10, 1000) == 24
    assert mod_pow(5, 0, 7) == 1
    assert mod_pow(7, 560, 561) == 1


@pytest.mark.parametrize("n,expected", [(2, True), (9, False), (2**31 - 1, True), (1, False), (561, False),
                                         (3215031751, False), (2**89 - 1, True), (2**61 - 1, True)])
def test_oracle_examples(n, expected):
    assert is_prime_oracle(n) is expected


def test_oracle_against_sieve():
    primes = set(int(p) for p in sieve_primes(200000))
    assert all(is_prime_oracle(n) == (n in primes) for n in range(200000))


def test_oracle_trial_division_agreement():
    rng = random.Random(5)
    for _ in range(300):
        n = rng.randrange(2**20, 2**32)
        by_trial = all(n % d for d in range(2, math.isqrt(n) + 1))
        assert is_prime_oracle(n) == by_trial
