"""Integer primitives: Jacobi symbol, Newton isqrt, 2-adic splits, sieving,
factorization and a deterministic primality oracle.

Everything here works on Python ints (arbitrary precision).  The primality
oracle and factorizer are test/census infrastructure; the strong Lucas
round in :mod:`slucas.lucas` never calls them.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SIEVE_BUDGET = 1 << 31
TRIAL_DIVISION_LIMIT = 10**6
RHO_ITERATIONS = 1 << 22


class FactorizationError(RuntimeError):
    """A cofactor could not be split within the configured effort budget."""

    def __init__(self, n: int, cofactor: int):
        super().__init__(f"could not split cofactor {cofactor} of {n} within budget")
        self.n = n
        self.cofactor = cofactor


class BudgetError(ValueError):
    """Requested work exceeds a configured memory/enumeration budget."""


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1, by binary reciprocity."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        # strip factors of two: (2/n) = -1 iff n = 3, 5 mod 8
        tz = (a & -a).bit_length() - 1
        a >>= tz
        if tz & 1 and n % 8 in (3, 5):
            result = -result
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a, n = n % a, a
    return result if n == 1 else 0


def isqrt_newton(n: int) -> int:
    """floor(sqrt(n)) by Newton iteration seeded from the bit length."""
    if n < 0:
        raise ValueError("square root of a negative number")
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + 1) // 2)  # >= sqrt(n)
    while True:
        y = (x + n // x) // 2
        if y >= x:
            break
        x = y
    while x * x > n:
        x -= 1
    return x


def two_adic_split(m: int) -> tuple[int, int]:
    """Return (kappa, q) with m = 2**kappa * q and q odd."""
    if m <= 0:
        raise ValueError(f"two_adic_split needs m >= 1, got {m}")
    kappa = (m & -m).bit_length() - 1
    return kappa, m >> kappa


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    return pow(base, exponent, modulus)


def sieve_primes(limit: int, budget: int = SIEVE_BUDGET) -> np.ndarray:
    """All primes <= limit, ascending, as an int64 array (odd-only Eratosthenes)."""
    if limit > budget:
        raise BudgetError(f"sieve limit {limit} exceeds budget {budget}")
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    # index i stands for 2*i + 1
    size = (limit - 1) // 2 + 1
    odd = np.ones(size, dtype=bool)
    odd[0] = False
    for i in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if odd[i]:
            p = 2 * i + 1
            odd[p * p // 2::p] = False
    primes = 2 * np.flatnonzero(odd).astype(np.int64) + 1
    return np.concatenate((np.array([2], dtype=np.int64), primes))


@lru_cache(maxsize=32)
def odd_primes(count: int) -> tuple[int, ...]:
    """The first ``count`` odd primes (3, 5, 7, ...)."""
    if count <= 0:
        return ()
    n = count + 1
    bound = 32 if n < 6 else int(n * (math.log(n) + math.log(math.log(n)))) + 3
    primes = sieve_primes(bound)
    return tuple(int(p) for p in primes[1:count + 1])


def nth_odd_prime(l: int) -> int:
    """The l-th odd prime, 1-indexed: nth_odd_prime(1) == 3."""
    if l < 1:
        raise ValueError("l must be >= 1")
    return odd_primes(l)[-1]


_SMALL_PRIMES = tuple(int(p) for p in sieve_primes(1000))
# Deterministic for n < 3317044064679887385961981 with these bases.
_ORACLE_BASES = _SMALL_PRIMES[:13]
_ORACLE_DETERMINISTIC_LIMIT = 3317044064679887385961981
_ORACLE_EXTRA_BASES = 24


def is_prime_oracle(n: int) -> bool:
    """Reference primality decision.

    Deterministic (fixed Miller-Rabin base set) below ~3.3e24, which covers
    every n < 2**64 and the factorizer's desk-scale range.  Above that it adds
    seeded random bases, so an error is possible but below 4**-24.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < _SMALL_PRIMES[-1] ** 2:
        return True
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = list(_ORACLE_BASES)
    if n >= _ORACLE_DETERMINISTIC_LIMIT:
        rng = random.Random(n)
        bases += [rng.randrange(2, n - 1) for _ in range(_ORACLE_EXTRA_BASES)]
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ascending (prime, exponent) pairs."""

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        primes = [p for p, _ in self.entries]
        if any(b <= a for a, b in zip(primes, primes[1:])):
            raise ValueError("primes must be strictly increasing")
        if any(r < 1 for _, r in self.entries):
            raise ValueError("exponents must be >= 1")

    @property
    def value(self) -> int:
        return math.prod(p**r for p, r in self.entries)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    @property
    def omega(self) -> int:
        """Number of distinct prime factors."""
        return len(self.entries)

    @property
    def big_omega(self) -> int:
        """Number of prime factors counted with multiplicity."""
        return sum(r for _, r in self.entries)

    @property
    def is_prime(self) -> bool:
        return self.big_omega == 1

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def _brent_rho(n: int, rng: random.Random, max_iterations: int) -> int | None:
    """One Pollard-Brent attempt; returns a nontrivial factor or None."""
    y = rng.randrange(1, n)
    c = rng.randrange(1, n)
    m = 128
    g = r = q = 1
    x = ys = y
    spent = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
        spent += r
        if spent > max_iterations:
            return None
    if g == n:
        # backtrack one step at a time
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


@lru_cache(maxsize=4)
def _trial_blocks(limit: int, size: int = 128) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Odd primes <= limit in blocks, each paired with the block's product."""
    primes = [int(p) for p in sieve_primes(limit)[1:]]
    blocks = []
    for i in range(0, len(primes), size):
        block = tuple(primes[i:i + size])
        blocks.append((block, math.prod(block)))
    return tuple(blocks)


def factorize(
    n: int,
    trial_limit: int = TRIAL_DIVISION_LIMIT,
    rho_iterations: int = RHO_ITERATIONS,
    seed: int = 0,
) -> Factorization:
    """Factor ``n >= 2``: trial division, then Brent's rho on what is left.

    Every reported prime is certified by :func:`is_prime_oracle`.  Raises
    :class:`FactorizationError` if a composite cofactor survives the budget.
    """
    if n < 2:
        raise ValueError(f"factorize needs n >= 2, got {n}")
    counts: dict[int, int] = {}
    m = n
    tz = (m & -m).bit_length() - 1
    if tz:
        counts[2] = tz
        m >>= tz
    for block, product in _trial_blocks(trial_limit):
        if block[0] * block[0] > m:
            break
        g = math.gcd(m, product)
        if g == 1:
            continue
        for p in block:
            if g % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                counts[p] = e
    if m > 1:
        rng = random.Random(seed)
        stack = [m]
        while stack:
            c = stack.pop()
            if is_prime_oracle(c):
                counts[c] = counts.get(c, 0) + 1
                continue
            r = isqrt_newton(c)
            if r * r == c:
                stack += [r, r]
                continue
            for _ in range(8):
                d = _brent_rho(c, rng, rho_iterations)
                if d is not None:
                    stack += [d, c // d]
                    break
            else:
                raise FactorizationError(n, c)
    return Factorization(tuple(sorted(counts.items())))


def factorization_from_spf(n: int, spf: np.ndarray) -> Factorization:
    """Factor ``n`` with a smallest-prime-factor table (``n < len(spf)``)."""
    counts: dict[int, int] = {}
    while n > 1:
        p = int(spf[n])
        counts[p] = counts.get(p, 0) + 1
        n //= p
    return Factorization(tuple(sorted(counts.items())))
