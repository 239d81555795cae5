"""Exact count SL(D, n) of strong Lucas liars, phi_D and the liar fractions.

All arithmetic here is exact (ints and Fractions).  ``sl_count`` uses the
closed-form count over the prime factorization; ``brute_force_sl`` runs the
strong Lucas round on every P in [0, n) and is kept as its oracle.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .intmath import (
    BudgetError,
    Factorization,
    factorize,
    is_prime_oracle,
    jacobi,
    nth_odd_prime,
    two_adic_split,
)
from .kernels import KERNEL_LIMIT, brute_force_sl_i64, census_range, spf_table

BRUTE_FORCE_BUDGET = 5000


@dataclass(frozen=True)
class PrimeSplit:
    p: int
    r: int
    eps: int
    k: int
    q: int


@dataclass(frozen=True)
class EpsDecomp:
    """n with its Jacobi signs and 2-adic splits.

    ``per_prime`` is sorted by k (ties by p), so ``per_prime[0].k`` is k_1.
    """

    n: int
    D: int
    eps_n: int
    kappa: int
    q: int
    per_prime: tuple[PrimeSplit, ...]

    @property
    def s(self) -> int:
        return len(self.per_prime)

    @property
    def k1(self) -> int:
        return self.per_prime[0].k

    @property
    def deltas(self) -> tuple[int, ...]:
        return tuple(ps.k - self.k1 for ps in self.per_prime)

    @property
    def big_omega(self) -> int:
        return sum(ps.r for ps in self.per_prime)

    def to_json(self) -> dict:
        return {
            "eps_n": self.eps_n,
            "kappa": self.kappa,
            "q": self.q,
            "per_prime": [
                {"p": ps.p, "r": ps.r, "eps": ps.eps, "k": ps.k, "q": ps.q} for ps in self.per_prime
            ],
        }


def _check_coprime(n: int, D: int) -> None:
    if n < 3 or n % 2 == 0:
        raise ValueError(f"n must be odd and >= 3, got {n}")
    if math.gcd(n, D) != 1:
        raise ValueError(f"gcd(n, 2D) > 1 for n={n}, D={D}")


def epsilon_decompose(n: int, D: int, factorization: Factorization | None = None) -> EpsDecomp:
    _check_coprime(n, D)
    if factorization is None:
        factorization = factorize(n)
    elif factorization.value != n:
        raise ValueError("factorization does not match n")
    splits = []
    eps_n = 1
    for p, r in factorization:
        e = jacobi(D, p)
        k, q = two_adic_split(p - e)
        splits.append(PrimeSplit(p, r, e, k, q))
        eps_n *= e**r
    splits.sort(key=lambda ps: (ps.k, ps.p))
    kappa, q = two_adic_split(n - eps_n)
    return EpsDecomp(n, D, eps_n, kappa, q, tuple(splits))


def sl_from_decomp(dec: EpsDecomp) -> int:
    gcds = [math.gcd(dec.q, ps.q) for ps in dec.per_prime]
    s = dec.s
    geometric = ((1 << (s * dec.k1)) - 1) // ((1 << s) - 1)
    return math.prod(g - 1 for g in gcds) + geometric * math.prod(gcds)


def phi_from_decomp(dec: EpsDecomp) -> int:
    return math.prod(ps.p ** (ps.r - 1) * (ps.p - ps.eps) for ps in dec.per_prime)


def sl_count(n: int, D: int, factorization: Factorization | None = None) -> int:
    """SL(D, n); zero when gcd(n, 2D) > 1."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"n must be odd and >= 3, got {n}")
    if math.gcd(n, D) != 1:
        return 0
    return sl_from_decomp(epsilon_decompose(n, D, factorization))


def phi_D(n: int, D: int, factorization: Factorization | None = None) -> int:
    return phi_from_decomp(epsilon_decompose(n, D, factorization))


def admissible_count(dec: EpsDecomp) -> int:
    """Number of P in [0, n) whose completed Q is a unit mod n."""
    return math.prod(ps.p ** (ps.r - 1) * (ps.p - 1 - ps.eps) for ps in dec.per_prime)


def square_root_count(dec: EpsDecomp) -> int:
    """Number of P in [0, n) with P^2 = D (mod n), i.e. Q = 0 (mod n)."""
    return math.prod(1 + ps.eps for ps in dec.per_prime)


@dataclass(frozen=True)
class AlphaReport:
    """Liar count and its normalisations for one (n, D).

    ``alpha_bar`` uses the n - eps(n) - 1 denominator; ``admissible`` and
    ``pass_probability`` (SL over the draws that are not redrawn, i.e.
    n minus the square roots of D) are kept alongside for comparison.
    """

    n: int
    D: int
    sl: int
    phi_d: int
    alpha: Fraction
    alpha_bar: Fraction
    admissible: int
    pass_probability: Fraction
    decomposition: EpsDecomp

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "D": self.D,
            "sl": self.sl,
            "phi_d": self.phi_d,
            "alpha": fraction_str(self.alpha),
            "alpha_bar": fraction_str(self.alpha_bar),
            "admissible": self.admissible,
            "pass_probability": fraction_str(self.pass_probability),
            "decomposition": self.decomposition.to_json(),
        }


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def fraction_decimal(x: Fraction, digits: int = 25) -> str:
    """Decimal rendering of x correct to ``digits`` significant digits."""
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        return str(decimal.Decimal(x.numerator) / decimal.Decimal(x.denominator))


def alpha_report(n: int, D: int, factorization: Factorization | None = None) -> AlphaReport:
    dec = epsilon_decompose(n, D, factorization)
    sl = sl_from_decomp(dec)
    phi = phi_from_decomp(dec)
    return AlphaReport(
        n=n,
        D=D,
        sl=sl,
        phi_d=phi,
        alpha=Fraction(sl, phi),
        alpha_bar=Fraction(sl, n - dec.eps_n - 1),
        admissible=admissible_count(dec),
        pass_probability=Fraction(sl, n - square_root_count(dec)),
        decomposition=dec,
    )


def brute_force_sl(n: int, D: int, budget: int = BRUTE_FORCE_BUDGET) -> int:
    """SL(D, n) by running the strong Lucas round on every P in [0, n)."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"n must be odd and >= 3, got {n}")
    if n > budget:
        raise BudgetError(f"n = {n} exceeds brute-force budget {budget}")
    if math.gcd(n, D) != 1:
        return 0
    return int(brute_force_sl_i64(n, D))


# --- bulk census over ranges -------------------------------------------------

@lru_cache(maxsize=2)
def _spf(limit: int) -> np.ndarray:
    return spf_table(limit)


def spf_for(limit: int) -> np.ndarray:
    """Cached smallest-prime-factor table covering at least 0..limit."""
    size = 1 << max(16, (limit).bit_length())
    return _spf(size)


def census_table(lo: int, hi: int, D: int) -> np.ndarray:
    """Census rows (see ``kernels.CENSUS_COLUMNS``) for odd n in [lo, hi).

    Rows with eps_n == 0 are those sharing a factor with D.
    """
    if hi > KERNEL_LIMIT:
        raise BudgetError("census_table range exceeds the int64 kernel limit")
    return census_range(lo, hi, D, spf_for(hi))


# --- bounds on alpha that the census must respect ----------------------------

def omega_bound(dec: EpsDecomp) -> tuple[Fraction, Fraction]:
    """Upper bounds (refined, plain) on alpha from the liar-count estimate.

    refined = 2^{1 - Omega} prod gcd(p - eps, n - eps(n)) / (p - eps),
    plain   = 2^{1 - Omega}.
    """
    m = dec.n - dec.eps_n
    plain = Fraction(2, 1 << dec.big_omega)
    refined = plain
    for ps in dec.per_prime:
        a = ps.p - ps.eps
        refined *= Fraction(math.gcd(a, m), a)
    return refined, plain


def suwa_parity_holds(dec: EpsDecomp) -> bool:
    """kappa >= k_1, with equality iff an odd number of primes with odd
    exponent have k_i == k_1."""
    odd = sum(1 for ps in dec.per_prime if ps.r % 2 == 1 and ps.k == dec.k1)
    if dec.kappa < dec.k1:
        return False
    return (dec.kappa == dec.k1) == (odd % 2 == 1)


def rho(l: int) -> Fraction:
    """1 + 1/p where p is the (l+1)-th odd prime."""
    return 1 + Fraction(1, nth_odd_prime(l + 1))


def inert_product(D: int, exponents: list[int], start: int = 3) -> tuple[int, Factorization]:
    """Build n from the smallest primes >= start with (D/p) = -1.

    For such n, phi_D(n) = prod (p^r + p^{r-1}).  D must not be a square.
    """
    if D >= 0 and math.isqrt(D) ** 2 == D:
        raise ValueError("D must not be a perfect square")
    entries = []
    p = max(3, start | 1)
    for r in exponents:
        while not (is_prime_oracle(p) and jacobi(D, p) == -1):
            p += 2
        entries.append((p, r))
        p += 2
    fac = Factorization(tuple(entries))
    return fac.value, fac
