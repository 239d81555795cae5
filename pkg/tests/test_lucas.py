import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import PANEL
from slucas.census import admissible_count, brute_force_sl, epsilon_decompose
from slucas.intmath import is_prime_oracle, sieve_primes
from slucas.kernels import strong_lucas_i64
from slucas.lucas import (
    LucasBase,
    TestOutcome,
    Verdict,
    base_for_p,
    lucas_uv_matrix,
    lucas_uv_mod,
    lucas_uv_naive,
    miller_rabin_round,
    sample_base,
    strong_lucas_round,
    strong_lucas_test,
    twin_product_precheck,
    verify_witness,
)


def random_base(rng, n_max=10**6):
    while True:
        n = rng.randrange(3, n_max) | 1
        P = rng.randrange(n)
        Q = rng.randrange(1, n)
        D = P * P - 4 * Q
        if math.gcd(Q, n) == 1 and math.gcd(n, 2 * D) == 1:
            return LucasBase(P, Q, D, n)


def test_uv_small_indices():
    base = base_for_p(25, 2, 3)
    assert base == LucasBase(3, 8, 2, 25)
    assert lucas_uv_mod(base, 0) == (0, 2, 1)
    assert lucas_uv_mod(base, 1) == (1, 3, 8)


def test_fibonacci():
    n = 10**9 + 7
    base = LucasBase(1, n - 1, 5, n)
    assert lucas_uv_mod(base, 10)[0] == 55
    assert lucas_uv_mod(base, 10)[1] == 123  # Lucas number L_10


def test_doubling_matches_naive_and_matrix():
    rng = random.Random(1)
    for _ in range(100):
        b = random_base(rng)
        u, v = 0, 2
        u1, v1 = 1, b.P
        for m in range(0, 5001):
            U, V, Qm = lucas_uv_mod(b, m)
            assert (U, V) == (u % b.n, v % b.n), m
            assert (V * V - b.D * U * U - 4 * Qm) % b.n == 0
            u, u1 = u1, (b.P * u1 - b.Q * u) % b.n
            v, v1 = v1, (b.P * v1 - b.Q * v) % b.n
        assert lucas_uv_naive(b.P, b.Q, 77, b.n) == lucas_uv_matrix(b.P, b.Q, 77, b.n) == lucas_uv_mod(b, 77)[:2]


@given(st.integers(0, 2**20), st.integers(0, 10**6))
def test_doubling_identities(m, seed):
    b = random_base(random.Random(seed))
    U, V, Qm = lucas_uv_mod(b, m)
    U2, V2, _ = lucas_uv_mod(b, 2 * m)
    n = b.n
    assert U2 == U * V % n
    assert V2 == (V * V - 2 * Qm) % n
    assert (V * V - b.D * U * U - 4 * Qm) % n == 0


def test_lucas_base_invariants():
    with pytest.raises(ValueError):
        LucasBase(1, 1, 5, 10)
    with pytest.raises(ValueError):
        LucasBase(1, 2, 5, 15)  # 1 - 8 != 5 mod 15
    with pytest.raises(ValueError):
        LucasBase(3, 0, 9, 7)
    with pytest.raises(ValueError):
        lucas_uv_mod(LucasBase(1, 6, 5, 7), -1)


def test_base_for_p_examples():
    b = base_for_p(25, 2, 3)
    assert isinstance(b, LucasBase) and b.Q == 8
    assert base_for_p(15, 19, 7) is None
    # P = 1: 4Q = 1 - 19 = -18 = 12 mod 15, Q = 3 shares the factor 3
    assert base_for_p(15, 19, 1).witness == {"kind": "factor", "factor": 3}


def test_base_for_p_factor_witness():
    for P in range(21):
        out = base_for_p(21, 5, P)
        if isinstance(out, TestOutcome):
            assert out.witness["kind"] == "factor" and verify_witness(out)


def test_sample_base_exhaustive_distribution():
    """Accepted P values are exactly the admissible pairs, each hit once."""
    for n in range(3, 1000, 2):
        for D in (5, -7):
            if math.gcd(n, D) != 1:
                continue
            dec = epsilon_decompose(n, D) if n > 1 else None
            accepted = set()
            for P in range(n):
                out = base_for_p(n, D, P)
                if isinstance(out, LucasBase):
                    assert (out.P * out.P - 4 * out.Q - D) % n == 0
                    accepted.add((out.P, out.Q))
            count = sum(
                1 for P in range(n) for Q in range(n)
                if math.gcd(Q, n) == 1 and (P * P - 4 * Q - D) % n == 0
            ) if n < 120 else None
            if count is not None:
                assert len(accepted) == count
            assert len(accepted) == admissible_count(dec)


def test_sample_base_gcd_with_d():
    rng = random.Random(0)
    out = sample_base(21, 7, rng)
    assert isinstance(out, TestOutcome) and out.witness == {"kind": "factor", "factor": 7}
    with pytest.raises(ValueError):
        sample_base(7, 7, rng)
    with pytest.raises(ValueError):
        sample_base(8, 5, rng)


def test_prime_completeness():
    rng = random.Random(99)
    for p in sieve_primes(10**4)[1:]:
        p = int(p)
        for D in PANEL:
            if D % p == 0:
                continue
            for _ in range(20):
                base = sample_base(p, D, rng)
                while base is None:
                    base = sample_base(p, D, rng)
                assert strong_lucas_round(p, base).is_probable_prime, (p, D)


def test_round_counts_match_census():
    # 15 with D = 19: exactly one admissible base passes
    assert brute_force_sl(15, 19) == 1
    passing = [P for P in range(15) if isinstance(b := base_for_p(15, 19, P), LucasBase)
               and strong_lucas_round(15, b).is_probable_prime]
    assert len(passing) == 1
    passing49 = [P for P in range(49) if isinstance(b := base_for_p(49, 5, P), LucasBase)
                 and strong_lucas_round(49, b).is_probable_prime]
    assert len(passing49) == 7


def test_round_matches_kernel():
    rng = random.Random(3)
    for _ in range(3000):
        b = random_base(rng, 10**5)
        assert strong_lucas_round(b.n, b).is_probable_prime == strong_lucas_i64(b.n, b.P, b.Q, b.D)


def test_composite_witnesses_verify():
    rng = random.Random(8)
    seen = 0
    for n in range(9, 3000, 2):
        if is_prime_oracle(n):
            continue
        out, _ = strong_lucas_test(n, 5, 3, rng)
        if not out.is_probable_prime:
            assert verify_witness(out), out
            seen += 1
    assert seen > 1000


def test_verify_rejects_bogus():
    assert not verify_witness(TestOutcome(15, Verdict.PROBABLE_PRIME))
    assert not verify_witness(TestOutcome(15, Verdict.COMPOSITE, {"kind": "factor", "factor": 4}))
    assert not verify_witness(TestOutcome(13, Verdict.COMPOSITE, {"kind": "base", "P": 1, "Q": 12, "D": 5}))
    assert not verify_witness(TestOutcome(15, Verdict.COMPOSITE, {"kind": "twin", "factors": [3, 7]}))


def test_round_rejects_foreign_base():
    with pytest.raises(ValueError):
        strong_lucas_round(37, LucasBase(1, 1, -3, 35))


def test_miller_rabin():
    assert miller_rabin_round(2047, 2).is_probable_prime
    out = miller_rabin_round(9, 2)
    assert not out.is_probable_prime and out.witness == {"kind": "mr_base", "a": 2} and verify_witness(out)
    assert miller_rabin_round(21, 7).witness == {"kind": "factor", "factor": 7}
    rng = random.Random(4)
    for p in sieve_primes(5000)[1:]:
        p = int(p)
        if p > 3:
            assert miller_rabin_round(p, rng.randrange(2, p - 1)).is_probable_prime


@pytest.mark.parametrize("n,twin", [(15, (3, 5)), (143, (11, 13)), (21, None), (9, None), (35, (5, 7))])
def test_twin_precheck(n, twin):
    assert twin_product_precheck(n) == twin


def test_strong_lucas_test_twin_path():
    out, passed = strong_lucas_test(143, 17, 5, random.Random(1), twin_precheck=True)
    assert out.witness == {"kind": "twin", "factors": [11, 13]} and passed == 0 and verify_witness(out)


def test_outcome_json():
    out = TestOutcome(9, Verdict.COMPOSITE, {"kind": "factor", "factor": 3})
    assert out.to_json() == {"n": 9, "verdict": "composite", "witness": {"kind": "factor", "factor": 3}}
