"""Worst-case composites: the sets C_{m,D} of n with alpha_D(n) > 2^-m,
the structural description of C_{3,D}, and the density check over M_k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import mpmath
import numpy as np

from .census import EpsDecomp, alpha_report, census_table, epsilon_decompose
from .intmath import Factorization, factorize

MAX_SWEEP_BITS = 24


class C3Tag(str, Enum):
    SQUARE_OF_SMALL_PRIME = "SquareOfSmallPrime"
    TWIN_PAIR = "TwinPair"
    TRIPLE_SHIFT = "TripleShift"
    DOUBLE_SHIFT = "DoubleShift"
    TRIPLE_LUCAS_CARMICHAEL = "TripleLucasCarmichael"
    NOT_IN_C3 = "NotInC3"


@dataclass(frozen=True)
class C3Form:
    tag: C3Tag
    params: dict = field(default_factory=dict)
    eps_signs: dict = field(default_factory=dict)

    @property
    def in_c3(self) -> bool:
        return self.tag is not C3Tag.NOT_IN_C3

    def to_json(self, n: int, D: int) -> dict:
        return {
            "n": n,
            "D": D,
            "in_c3": self.in_c3,
            "form": self.tag.value,
            "params": self.params,
            "eps_signs": {str(p): e for p, e in self.eps_signs.items()},
        }


NOT_IN_C3 = C3Form(C3Tag.NOT_IN_C3)


def c_m_member(n: int, D: int, m: int, factorization: Factorization | None = None) -> bool:
    """True iff n is composite, coprime to 2D and alpha_D(n) > 2^-m."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"n must be odd and >= 3, got {n}")
    if m < 0:
        raise ValueError("m must be >= 0")
    if math.gcd(n, D) != 1:
        return False
    if factorization is None:
        factorization = factorize(n)
    if factorization.is_prime:
        return False
    report = alpha_report(n, D, factorization)
    return report.alpha > Fraction(1, 1 << m)


def classify_c3(
    n: int,
    D: int,
    factorization: Factorization | None = None,
    published_list: bool = False,
) -> C3Form:
    """Match n against the structural forms that make up C_{3,D}.

    The Jacobi signs for the given D decide the form.  Two corrections to the
    published list are applied unless ``published_list`` is set:

    * 49 with (D/7) = -1 has alpha exactly 1/8, which is not > 1/8.
    * For the shape (2^k1 q1 + e1)(3 * 2^k1 q1 + e2) the liar fraction is
      4^-k1 ((q1 - 1)^2 / (3 q1^2) + (4^k1 - 1)/9), which exceeds 1/8 only
      for k1 = 1 and q1 >= 5 (e.g. 85 = 5 * 17, D = -7 gives 13/108).
    """
    if n < 3 or n % 2 == 0:
        raise ValueError(f"n must be odd and >= 3, got {n}")
    if math.gcd(n, D) != 1:
        return NOT_IN_C3
    if factorization is None:
        factorization = factorize(n)
    if factorization.is_prime:
        return NOT_IN_C3
    dec = epsilon_decompose(n, D, factorization)
    signs = {ps.p: ps.eps for ps in sorted(dec.per_prime, key=lambda ps: ps.p)}
    splits = dec.per_prime

    if dec.s == 1:
        p, r = splits[0].p, splits[0].r
        if r == 2 and (p in (3, 5) or (p == 7 and splits[0].eps == -1 and published_list)):
            return C3Form(C3Tag.SQUARE_OF_SMALL_PRIME, {"p": p}, signs)
        return NOT_IN_C3

    if any(ps.r > 1 for ps in splits):
        # 9p with p in {5, 7, 11, 13} is the only shape left here, and none
        # of those reach alpha > 1/8
        return NOT_IN_C3

    if dec.s == 2:
        lo, hi = sorted(splits, key=lambda ps: ps.p - ps.eps)
        a_lo, a_hi = lo.p - lo.eps, hi.p - hi.eps
        params = {"k1": lo.k, "q1": lo.q}
        if a_lo == a_hi:
            return C3Form(C3Tag.TWIN_PAIR, params, signs)
        if a_hi == 3 * a_lo and lo.q != 1:
            if published_list or (lo.k == 1 and lo.q >= 5):
                return C3Form(C3Tag.TRIPLE_SHIFT, params, signs)
            return NOT_IN_C3
        if a_hi == 2 * a_lo and (lo.q, lo.k) != (1, 1):
            return C3Form(C3Tag.DOUBLE_SHIFT, params, signs)
        return NOT_IN_C3

    if dec.s == 3:
        m = n - dec.eps_n
        same_k = len({ps.k for ps in splits}) == 1
        if same_k and all(m % (ps.p - ps.eps) == 0 for ps in splits):
            return C3Form(
                C3Tag.TRIPLE_LUCAS_CARMICHAEL,
                {"k1": dec.k1, "primes": [ps.p for ps in sorted(splits, key=lambda ps: ps.p)]},
                signs,
            )
    return NOT_IN_C3


def alpha_exact_formula(dec: EpsDecomp) -> Fraction:
    """SL/phi_D rewritten per prime:

    2^{-(k_1+...+k_s)} prod p_i^{1-r_i} * (prod (g_i - 1)/q_i
        + (2^{s k_1} - 1)/(2^s - 1) prod g_i/q_i),   g_i = gcd(q, q_i).
    """
    s, k1 = dec.s, dec.k1
    head = Fraction(1, 1 << sum(ps.k for ps in dec.per_prime))
    for ps in dec.per_prime:
        head /= ps.p ** (ps.r - 1)
    liars = Fraction(1)
    full = Fraction(1)
    for ps in dec.per_prime:
        g = math.gcd(dec.q, ps.q)
        liars *= Fraction(g - 1, ps.q)
        full *= Fraction(g, ps.q)
    return head * (liars + Fraction((1 << (s * k1)) - 1, (1 << s) - 1) * full)


def twin_alpha(k1: int) -> Fraction:
    """alpha for n = (2^k1 - 1)(2^k1 + 1) with the twin sign pattern."""
    if k1 < 1:
        raise ValueError("k1 must be >= 1")
    return Fraction(1, 3) - Fraction(1, 3 * 4**k1)


def cm_density_bound(k: int, m: int) -> mpmath.mpf:
    """8 * sum_{j=2}^{m} 2^{m - j - (k-1)/j}."""
    with mpmath.workprec(160):
        return 8 * mpmath.fsum(mpmath.power(2, m - j - mpmath.mpf(k - 1) / j) for j in range(2, m + 1))


def cm_hypothesis_holds(k: int, m: int) -> bool:
    """m + 1 <= 2 sqrt(k - 1), decided in integers."""
    return m >= 1 and k >= 2 and (m + 1) ** 2 <= 4 * (k - 1)


@dataclass(frozen=True)
class DensityCheck:
    k: int
    m: int
    D: int
    members: int
    observed: Fraction
    bound: mpmath.mpf

    @property
    def holds(self) -> bool:
        with mpmath.workprec(160):
            return mpmath.mpf(self.observed.numerator) / self.observed.denominator <= self.bound


def mk_census(k: int, D: int) -> np.ndarray:
    """Census rows for every odd k-bit integer."""
    if not 2 <= k <= MAX_SWEEP_BITS:
        raise ValueError(f"exhaustive sweeps need 2 <= k <= {MAX_SWEEP_BITS}")
    return census_table(1 << (k - 1), 1 << k, D)


def cm_members(rows: np.ndarray, m: int) -> np.ndarray:
    """Boolean mask of C_{m,D} membership for census rows (exact integers)."""
    sl, phi, eps_n, big_omega = rows[:, 1], rows[:, 2], rows[:, 3], rows[:, 6]
    composite = big_omega >= 2
    coprime = eps_n != 0
    # alpha > 2^-m  <=>  SL * 2^m > phi_D; both sides stay well inside int64
    return composite & coprime & (sl * (1 << m) > phi)


def frac_cm_empirical(k: int, m: int, D: int) -> DensityCheck:
    """Exhaustive |C_{m,D} & M_k| / |M_k| against the density bound."""
    if not cm_hypothesis_holds(k, m):
        raise ValueError(f"(k={k}, m={m}) violates m + 1 <= 2 sqrt(k - 1)")
    rows = mk_census(k, D)
    members = int(cm_members(rows, m).sum())
    return DensityCheck(k, m, D, members, Fraction(members, 1 << (k - 2)), cm_density_bound(k, m))
