"""Lucas sequences mod n, base sampling, the strong Lucas round and the
Miller-Rabin comparison round.

Nothing in this module consults the primality oracle; every verdict comes
from the congruences themselves.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum

from .intmath import isqrt_newton, jacobi, two_adic_split


@dataclass(frozen=True)
class LucasBase:
    """Parameters (P, Q) mod n with P^2 - 4Q = D (mod n)."""

    P: int
    Q: int
    D: int
    n: int

    def __post_init__(self):
        n = self.n
        if n < 3 or n % 2 == 0:
            raise ValueError(f"modulus must be odd and >= 3, got {n}")
        if not (0 <= self.P < n and 0 <= self.Q < n):
            raise ValueError("P and Q must be residues in [0, n)")
        if (self.P * self.P - 4 * self.Q - self.D) % n:
            raise ValueError("P^2 - 4Q is not congruent to D mod n")
        if math.gcd(self.Q, n) != 1:
            raise ValueError("Q must be a unit mod n")
        if math.gcd(n, 2 * self.D) != 1:
            raise ValueError("n must be coprime to 2D")


class Verdict(str, Enum):
    PROBABLE_PRIME = "probable_prime"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class TestOutcome:
    """Result of one round.

    ``witness`` is None for probable primes.  Composite verdicts carry one of
    ``{"kind": "base", "P", "Q", "D"}``, ``{"kind": "factor", "factor"}`` or
    ``{"kind": "twin", "factors": [p, p + 2]}``, and Miller-Rabin rounds
    give ``{"kind": "mr_base", "a"}``.  :func:`verify_witness` re-checks any
    of them.
    """

    __test__ = False  # not a pytest class

    n: int
    verdict: Verdict
    witness: dict | None = None

    @property
    def is_probable_prime(self) -> bool:
        return self.verdict is Verdict.PROBABLE_PRIME

    def to_json(self) -> dict:
        return {"n": self.n, "verdict": self.verdict.value, "witness": self.witness}


def _probable_prime(n: int) -> TestOutcome:
    return TestOutcome(n, Verdict.PROBABLE_PRIME)


def _factor_witness(n: int, factor: int) -> TestOutcome:
    return TestOutcome(n, Verdict.COMPOSITE, {"kind": "factor", "factor": factor})


def lucas_uv_mod(base: LucasBase, m: int) -> tuple[int, int, int]:
    """(U_m mod n, V_m mod n, Q^m mod n) in O(log m) doubling steps.

    Uses U_2k = U_k V_k, V_2k = V_k^2 - 2Q^k and the index-raising step
    U_{k+1} = (P U_k + V_k)/2, V_{k+1} = (D U_k + P V_k)/2; halving is exact
    mod n because n is odd.
    """
    if m < 0:
        raise ValueError("index must be nonnegative")
    n, P, Q = base.n, base.P, base.Q
    if m == 0:
        return 0, 2 % n, 1 % n
    D = base.D % n
    inv2 = (n + 1) // 2
    U, V, Qk = 1, P, Q
    for bit in bin(m)[3:]:
        U = U * V % n
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    return U, V, Qk


def lucas_uv_naive(P: int, Q: int, m: int, n: int) -> tuple[int, int]:
    """U_m, V_m mod n straight from the two-term recurrence."""
    u0, u1 = 0, 1
    v0, v1 = 2, P
    if m == 0:
        return u0 % n, v0 % n
    for _ in range(m - 1):
        u0, u1 = u1, (P * u1 - Q * u0) % n
        v0, v1 = v1, (P * v1 - Q * v0) % n
    return u1 % n, v1 % n


def lucas_uv_matrix(P: int, Q: int, m: int, n: int) -> tuple[int, int]:
    """U_m, V_m mod n via powers of the companion matrix [[P, -Q], [1, 0]].

    Independent of the doubling ladder; used to re-check witnesses.
    """
    def mul(x, y):
        return (
            ((x[0] * y[0] + x[1] * y[2]) % n, (x[0] * y[1] + x[1] * y[3]) % n,
             (x[2] * y[0] + x[3] * y[2]) % n, (x[2] * y[1] + x[3] * y[3]) % n)
        )
    result = (1, 0, 0, 1)
    power = (P % n, -Q % n, 1, 0)
    while m:
        if m & 1:
            result = mul(result, power)
        power = mul(power, power)
        m >>= 1
    # M^m = [[U_{m+1}, -Q U_m], [U_m, -Q U_{m-1}]]
    u_next, u = result[0], result[2]
    return u, (2 * u_next - P * u) % n


def base_for_p(n: int, D: int, P: int) -> LucasBase | TestOutcome | None:
    """Complete P to the unique Q with P^2 - 4Q = D (mod n).

    Returns the base if Q is a unit, a composite outcome carrying the factor
    gcd(Q, n) if that gcd is proper, and None if Q = 0 mod n (redraw).
    """
    inv4 = pow((n + 1) // 2, 2, n)
    Q = (P * P - D) * inv4 % n
    g = math.gcd(Q, n)
    if g == 1:
        return LucasBase(P % n, Q, D, n)
    if g < n:
        return _factor_witness(n, g)
    return None


def sample_base(n: int, D: int, rng: random.Random) -> LucasBase | TestOutcome | None:
    """Draw P uniformly from [0, n) and complete it with :func:`base_for_p`.

    Q is a bijective function of P, so the accepted draws are uniform over
    the admissible pairs.  Requires gcd(n, 2D) = 1.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError(f"n must be odd and >= 3, got {n}")
    g = math.gcd(n, D)
    if g != 1:
        if g < n:
            return _factor_witness(n, g)
        raise ValueError(f"n = {n} divides D = {D}")
    return base_for_p(n, D, rng.randrange(n))


def strong_lucas_round(n: int, base: LucasBase) -> TestOutcome:
    """One strong Lucas round: U_q = 0 or V_{2^i q} = 0 (mod n), 0 <= i < kappa."""
    if base.n != n:
        raise ValueError("base belongs to a different modulus")
    eps = jacobi(base.D, n)
    if eps == 0:
        g = math.gcd(base.D, n)
        if g < n:
            return _factor_witness(n, g)
        raise ValueError(f"n = {n} divides D")
    kappa, q = two_adic_split(n - eps)
    U, V, Qk = lucas_uv_mod(base, q)
    if U == 0:
        return _probable_prime(n)
    for _ in range(kappa):
        if V == 0:
            return _probable_prime(n)
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
    return TestOutcome(n, Verdict.COMPOSITE, {"kind": "base", "P": base.P, "Q": base.Q, "D": base.D})


def miller_rabin_round(n: int, a: int) -> TestOutcome:
    """Strong probable-prime check of n to base a, 1 < a < n - 1."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"n must be odd and >= 3, got {n}")
    g = math.gcd(a, n)
    if g > 1:
        return _factor_witness(n, g)
    kappa, q = two_adic_split(n - 1)
    x = pow(a, q, n)
    if x == 1 or x == n - 1:
        return _probable_prime(n)
    for _ in range(kappa - 1):
        x = x * x % n
        if x == n - 1:
            return _probable_prime(n)
    return TestOutcome(n, Verdict.COMPOSITE, {"kind": "mr_base", "a": a})


def twin_product_precheck(n: int) -> tuple[int, int] | None:
    """(p, p + 2) if n = p(p + 2) for some p >= 3, else None.

    n = p(p + 2) exactly when n + 1 = (p + 1)^2, so one Newton square root
    decides it.
    """
    r = isqrt_newton(n + 1)
    if r * r == n + 1 and r >= 4:
        return r - 1, r + 1
    return None


def strong_lucas_test(
    n: int, D: int, t: int, rng: random.Random, twin_precheck: bool = False
) -> tuple[TestOutcome, int]:
    """Up to t rounds with fresh bases; stops at the first composite verdict.

    Returns the final outcome and the number of rounds that passed.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    if twin_precheck:
        twin = twin_product_precheck(n)
        if twin is not None:
            return TestOutcome(n, Verdict.COMPOSITE, {"kind": "twin", "factors": list(twin)}), 0
    outcome = _probable_prime(n)
    for passed in range(t):
        base = sample_base(n, D, rng)
        while base is None:
            base = sample_base(n, D, rng)
        if isinstance(base, TestOutcome):
            return base, passed
        outcome = strong_lucas_round(n, base)
        if not outcome.is_probable_prime:
            return outcome, passed
    return outcome, t


def verify_witness(outcome: TestOutcome) -> bool:
    """Independently re-check a composite verdict's witness."""
    if outcome.is_probable_prime or outcome.witness is None:
        return False
    n, w = outcome.n, outcome.witness
    kind = w["kind"]
    if kind == "factor":
        return 1 < w["factor"] < n and n % w["factor"] == 0
    if kind == "twin":
        p, p2 = w["factors"]
        return p2 == p + 2 and p > 1 and p * p2 == n
    if kind == "mr_base":
        return not miller_rabin_round(n, w["a"]).is_probable_prime
    if kind == "base":
        P, Q, D = w["P"], w["Q"], w["D"]
        if (P * P - 4 * Q - D) % n or math.gcd(Q, n) != 1 or math.gcd(n, 2 * D) != 1:
            return False
        # recompute with matrix powers, not the doubling ladder
        kappa, q = two_adic_split(n - jacobi(D, n))
        if lucas_uv_matrix(P, Q, q, n)[0] == 0:
            return False
        return all(lucas_uv_matrix(P, Q, q << i, n)[1] != 0 for i in range(kappa))
    return False
