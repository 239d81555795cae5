"""Closed-form upper bounds on the error probability of random prime
generation with the strong Lucas test, the matching Miller-Rabin bounds
used for comparison, and the four comparison tables.

"log" in every formula is the natural logarithm.

Values are evaluated with mpmath at ``PRECISION_BITS``.  The reported
``neg_log2`` is floor(-log2(value)); when -log2(value) lands within
``BOUNDARY_TOL`` of an integer (several table entries are exact powers of
two) the value is recomputed at ``HIGH_PRECISION_BITS`` and the report is
flagged ``near_boundary``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

import mpmath

from .intmath import nth_odd_prime

PRECISION_BITS = 160
HIGH_PRECISION_BITS = 1024
BOUNDARY_TOL = mpmath.mpf("1e-6")

TWIN_PRIME_CONSTANT = "0.6601618158468695739278121100145"

TABLE_KS = (100, 200, 400, 512, 1024, 2048, 4096)
TABLE_TS = (2, 4, 8, 16, 32, 64)


@dataclass(frozen=True)
class BoundReport:
    theorem: str
    value: mpmath.mpf
    neg_log2: int
    hypotheses_met: bool
    near_boundary: bool = False
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "params": self.params,
            "value": mpmath.nstr(self.value, 40, min_fixed=0, max_fixed=0),
            "neg_log2": self.neg_log2,
            "hypotheses_met": self.hypotheses_met,
            "near_boundary": self.near_boundary,
        }


@dataclass(frozen=True)
class CountBound:
    """A bound on a count of integers rather than on a probability."""

    theorem: str
    value: mpmath.mpf
    hypotheses_met: bool
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "params": self.params,
            "value": mpmath.nstr(self.value, 40, min_fixed=0, max_fixed=0),
            "hypotheses_met": self.hypotheses_met,
        }


def _evaluate(formula: Callable[[], mpmath.mpf]) -> tuple[mpmath.mpf, int, bool]:
    with mpmath.workprec(PRECISION_BITS):
        value = formula()
        x = -mpmath.log(value, 2)
        if abs(x - mpmath.nint(x)) > BOUNDARY_TOL:
            return value, int(mpmath.floor(x)), False
    with mpmath.workprec(HIGH_PRECISION_BITS):
        x = -mpmath.log(formula(), 2)
        nearest = mpmath.nint(x)
        if abs(x - nearest) < mpmath.ldexp(1, -HIGH_PRECISION_BITS // 2):
            # an exact power of two up to rounding of the decimal constants
            return value, int(nearest), True
        return value, int(mpmath.floor(x)), True


def _report(theorem: str, formula, hypotheses_met: bool, **params) -> BoundReport:
    value, neg_log2, near = _evaluate(formula)
    return BoundReport(theorem, value, neg_log2, bool(hypotheses_met), near, params)


def _check(k: int, t: int = 1, l: int = 0) -> None:
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if l < 0:
        raise ValueError(f"l must be >= 0, got {l}")


def _c(s: str) -> mpmath.mpf:
    return mpmath.mpf(s)


def rho_mp(l: int) -> mpmath.mpf:
    """1 + 1/p where p is the (l+1)-th odd prime, at the working precision."""
    if l < 0:
        raise ValueError("l must be >= 0")
    return 1 + mpmath.mpf(1) / nth_odd_prime(l + 1)


# --- strong Lucas ---------------------------------------------------------

def bound_q_k1(k: int) -> BoundReport:
    """log(k) k^2 4^(2.3 - sqrt k)."""
    _check(k)

    def f():
        k_ = mpmath.mpf(k)
        return mpmath.log(k_) * k_**2 * mpmath.power(4, _c("2.3") - mpmath.sqrt(k_))

    return _report("q_k1", f, k >= 2, k=k)


def q_kt_hypotheses(k: int, t: int) -> bool:
    return (k >= 79 and t >= 3 and 9 * t <= k) or (k >= 88 and t == 2)


def bound_q_kt(k: int, t: int) -> BoundReport:
    """log(k)^t k^(3/2) (2^t / sqrt t) 4^(2.12 - sqrt(tk))."""
    _check(k, t)
    if t < 2:
        raise ValueError("t must be >= 2; use bound_q_k1 for one round")

    def f():
        k_ = mpmath.mpf(k)
        return (
            mpmath.log(k_) ** t * k_ ** _c("1.5") * mpmath.power(2, t) / mpmath.sqrt(t)
            * mpmath.power(4, _c("2.12") - mpmath.sqrt(t * k_))
        )

    return _report("q_kt", f, q_kt_hypotheses(k, t), k=k, t=t)


def bound_q_kl1(k: int, l: int) -> BoundReport:
    """k^2 4^(1.8 - sqrt k) rho_l^(2 sqrt(k-1) - 2)."""
    _check(k, 1, l)

    def f():
        k_ = mpmath.mpf(k)
        return (
            k_**2 * mpmath.power(4, _c("1.8") - mpmath.sqrt(k_))
            * rho_mp(l) ** (2 * mpmath.sqrt(k_ - 1) - 2)
        )

    return _report("q_kl1", f, True, k=k, l=l)


def bound_q_kl1_127(k: int) -> BoundReport:
    """k^2 4^(1.729 - 0.998 sqrt(k-1)), the l = 127 specialisation."""
    _check(k)

    def f():
        k_ = mpmath.mpf(k)
        return k_**2 * mpmath.power(4, _c("1.729") - _c("0.998") * mpmath.sqrt(k_ - 1))

    return _report("q_kl1_127", f, True, k=k, l=127)


def q_klt_hypotheses(k: int, t: int) -> bool:
    return k >= 21 and t >= 2 and 9 * t <= k - 1


def bound_q_klt(k: int, t: int, l: int) -> BoundReport:
    """4^(1.72 - sqrt(tk)) k^(3/2) 2^t rho_l^(2 sqrt(kt) + t)."""
    _check(k, t, l)
    if t < 2:
        raise ValueError("t must be >= 2; use bound_q_kl1 for one round")

    def f():
        k_ = mpmath.mpf(k)
        root = mpmath.sqrt(t * k_)
        return (
            mpmath.power(4, _c("1.72") - root) * k_ ** _c("1.5") * mpmath.power(2, t)
            * rho_mp(l) ** (2 * root + t)
        )

    return _report("q_klt", f, q_klt_hypotheses(k, t), k=k, t=t, l=l)


def q_klt_large_t_terms(k: int, t: int, l: int) -> tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]:
    """The three summands of the large-t bound, at the working precision."""
    k_ = mpmath.mpf(k)
    r = rho_mp(l)
    first = mpmath.power(2, _c("-1.52") - 4 * t) * r ** (6 * t) / (mpmath.power(2, t) - r**t) * k_
    second = r ** (3 * t) * mpmath.power(2, _c("-3.55") - 4 * k_ / 9 - 2 * t) * k_ ** _c("3.75")
    third = r ** (5 * t) * mpmath.power(2, _c("1.75") - k_ / 4 - 3 * t) * k_
    return first, second, third


def bound_q_klt_large_t(k: int, t: int, l: int) -> BoundReport:
    _check(k, t, l)
    hyp = k >= 122 and 9 * t >= k
    return _report("q_klt_large_t", lambda: mpmath.fsum(q_klt_large_t_terms(k, t, l)), hyp, k=k, t=t, l=l)


# --- Miller-Rabin comparison ---------------------------------------------

def _p_kt_formula(case: str, k: int, t: int):
    def f():
        k_ = mpmath.mpf(k)
        if case == "i":
            return k_**2 * mpmath.power(4, 2 - mpmath.sqrt(k_))
        if case == "ii":
            return (
                k_ ** _c("1.5") * mpmath.power(2, t) / mpmath.sqrt(t)
                * mpmath.power(4, 2 - mpmath.sqrt(t * k_))
            )
        tail = k_ ** _c("3.75") * mpmath.power(2, -k_ / 2 - 2 * t) / 7
        if case == "iv":
            return tail
        return (
            _c("0.35") * k_ * mpmath.power(2, -5 * t) + tail
            + 12 * k_ * mpmath.power(2, -k_ / 4 - 3 * t)
        )

    return f


def p_kt_case_applies(case: str, k: int, t: int) -> bool:
    if case == "i":
        return t == 1 and k >= 2
    if case == "ii":
        return (k >= 21 and t >= 3 and 9 * t <= k) or (k >= 88 and t == 2)
    if case == "iii":
        return k >= 21 and 9 * t >= k
    if case == "iv":
        return k >= 21 and 4 * t >= k
    raise ValueError(f"unknown case {case!r}")


P_KT_CASES = ("i", "ii", "iii", "iv")


def bound_p_kt(k: int, t: int, case: str | None = None) -> BoundReport:
    """Average-case Miller-Rabin bound.

    With ``case=None`` the smallest value among the cases whose hypotheses
    hold is returned; if none holds, case (i) for t = 1 and case (ii)
    otherwise, flagged ``hypotheses_met=False``.
    """
    _check(k, t)
    if case is not None:
        return _report(f"p_kt({case})", _p_kt_formula(case, k, t), p_kt_case_applies(case, k, t), k=k, t=t)
    applicable = [c for c in P_KT_CASES if p_kt_case_applies(c, k, t)]
    if not applicable:
        return bound_p_kt(k, t, "i" if t == 1 else "ii")
    reports = [bound_p_kt(k, t, c) for c in applicable]
    return min(reports, key=lambda r: r.value)


# --- trial division and counting bounds ----------------------------------

def calc_trial_divisions(k: int) -> int:
    """Number l of odd primes to trial divide by, as a function of bit size.

    Sizes above 4096 bits keep l = 1023.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k <= 512:
        return 63
    if k <= 1024:
        return 127
    if k <= 2048:
        return 383
    return 1023


def bound_prime_count(k: int) -> CountBound:
    """Lower bound 0.71867 * 2^k / k on the number of k-bit primes (k >= 21)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    with mpmath.workprec(PRECISION_BITS):
        value = _c("0.71867") * mpmath.power(2, k) / k
    return CountBound("prime_count", value, k >= 21, {"k": k})


def twin_prime_count_bound(x) -> CountBound:
    """Upper bound 16 a x / ((7.5 + log x) log x) on pi_2(x), valid for x > e^42."""
    with mpmath.workprec(PRECISION_BITS):
        x_ = mpmath.mpf(x)
        if x_ <= 1:
            raise ValueError("x must be > 1")
        lx = mpmath.log(x_)
        value = 16 * _c(TWIN_PRIME_CONSTANT) * x_ / ((_c("7.5") + lx) * lx)
        hyp = lx > 42
    return CountBound("twin_prime_count", value, bool(hyp), {"x": str(x)})


def bound_twin_products(k: int) -> CountBound:
    """Upper bound 6 * 2^(k/2) / k^2 on k-bit products p(p + 2) of twin primes."""
    if k < 2:
        raise ValueError("k must be >= 2")
    with mpmath.workprec(PRECISION_BITS):
        value = 6 * mpmath.power(2, mpmath.mpf(k) / 2) / k**2
    return CountBound("twin_products", value, k >= 122, {"k": k})


# --- tables ----------------------------------------------------------------

GATE_T_K9 = "gate:t>k/9"
GATE_T_K1_9 = "gate:t>(k-1)/9"


def _table1() -> list[list[str]]:
    rows = [["k", "-log2 p_k1", "-log2 q_k1", "-log2 q_kl1"]]
    for k in TABLE_KS:
        l = calc_trial_divisions(k)
        rows.append([
            str(k),
            str(bound_p_kt(k, 1, "i").neg_log2),
            str(bound_q_k1(k).neg_log2),
            str(bound_q_kl1(k, l).neg_log2),
        ])
    return rows


def _grid(cell) -> list[list[str]]:
    rows = [["k\\t", *map(str, TABLE_TS)]]
    for k in TABLE_KS:
        rows.append([str(k), *(cell(k, t) for t in TABLE_TS)])
    return rows


def _table2_cell(k: int, t: int) -> str:
    if 9 * t > k:
        return GATE_T_K9
    return str(bound_q_kt(k, t).neg_log2)


def _table3_cell(k: int, t: int) -> str:
    if 9 * t > k - 1:
        return GATE_T_K1_9
    return str(bound_q_klt(k, t, calc_trial_divisions(k)).neg_log2)


def _table4_cell(k: int, t: int) -> str:
    if 9 * t > k:
        return GATE_T_K9
    return str(bound_p_kt(k, t, "ii").neg_log2)


def emit_table(which: int) -> list[list[str]]:
    if which == 1:
        return _table1()
    if which == 2:
        return _grid(_table2_cell)
    if which == 3:
        return _grid(_table3_cell)
    if which == 4:
        return _grid(_table4_cell)
    raise ValueError(f"no table {which}; expected 1-4")


def emit_tables() -> dict[int, list[list[str]]]:
    return {which: emit_table(which) for which in (1, 2, 3, 4)}


def table_csv(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def fixture_csv(which: int) -> str:
    """Checked-in transcription of table ``which``."""
    return resources.files("slucas").joinpath("data").joinpath(f"table{which}.csv").read_text()
