"""Random probable-prime generation with t strong Lucas rounds, the exact
error probability q_{k,t} for small k, and Monte Carlo estimates of it.

A candidate set M_{k,l,D} is every odd k-bit n that is coprime to D and not
divisible by any of the first l odd primes.  The generator samples it
uniformly, so for small k its error probability is exactly

    sum_composites a(n)^t / (sum_composites a(n)^t + #primes)

where a(n) is the chance that n passes one round.  Two per-round
conventions are computed: ``nominal`` uses SL/(n - eps(n) - 1) and
``algorithm`` uses SL/(n - #square roots of D), the exact pass rate of
:func:`slucas.lucas.sample_base` with its redraw rule.  Both give 1 for
primes.
"""

from __future__ import annotations

import csv
import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from .census import alpha_report, census_table, fraction_decimal, fraction_str
from .intmath import BudgetError, factorize, is_prime_oracle, odd_primes
from .lucas import strong_lucas_test, twin_product_precheck

MAX_EXACT_BITS = 20
DEFAULT_MAX_CANDIDATES = 10**7
CONVENTIONS = ("nominal", "algorithm")


@dataclass(frozen=True)
class GenConfig:
    k: int
    t: int
    l: int = 0
    D: int = 5
    seed: int = 0
    twin_precheck: bool = False

    def __post_init__(self):
        if self.k < 4:
            raise ValueError("k must be >= 4")
        if self.t < 1:
            raise ValueError("t must be >= 1")
        if self.l < 0:
            raise ValueError("l must be >= 0")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned value")


@dataclass
class RunRecord:
    config: GenConfig
    candidates_tested: int
    output: int
    output_is_composite: bool
    rounds_per_candidate: list[int] = field(default_factory=list)
    rejected_trial_division: int = 0
    rejected_gcd_d: int = 0
    rejected_twin: int = 0

    def to_json(self) -> dict:
        d = asdict(self)
        d["config"] = asdict(self.config)
        return d


@lru_cache(maxsize=64)
def _odd_primorial(l: int) -> int:
    return math.prod(odd_primes(l))


def generate_probable_prime(config: GenConfig, max_candidates: int = DEFAULT_MAX_CANDIDATES) -> RunRecord:
    """Draw odd k-bit candidates until one passes t strong Lucas rounds.

    Deterministic for a given config.  Only the returned number is handed to
    the primality oracle, after the fact, to label the run.
    """
    rng = random.Random(config.seed)
    k, t, D = config.k, config.t, config.D
    primorial = _odd_primorial(config.l)
    high = 1 << (k - 1)
    half_range = 1 << (k - 2)
    rounds: list[int] = []
    rej_td = rej_gcd = rej_twin = 0
    for tested in range(1, max_candidates + 1):
        n = high + 2 * rng.randrange(half_range) + 1
        if config.l and math.gcd(n, primorial) != 1:
            rej_td += 1
            continue
        if math.gcd(n, D) != 1:
            rej_gcd += 1
            continue
        if config.twin_precheck and twin_product_precheck(n) is not None:
            rej_twin += 1
            continue
        _, passed = strong_lucas_test(n, D, t, rng)
        rounds.append(passed)
        if passed == t:
            return RunRecord(
                config, tested, n, not is_prime_oracle(n), rounds, rej_td, rej_gcd, rej_twin
            )
    raise BudgetError(f"no probable prime among {max_candidates} candidates")


# --- exact error probability ------------------------------------------------

@dataclass(frozen=True)
class ExactQ:
    k: int
    t: int
    D: int
    l: int
    prime_count: int
    composite_count: int
    composite_sum: dict[str, Fraction]
    q: dict[str, Fraction]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "t": self.t,
            "D": self.D,
            "l": self.l,
            "prime_count": self.prime_count,
            "composite_count": self.composite_count,
            "composite_sum": {c: fraction_str(v) for c, v in self.composite_sum.items()},
            "q": {c: fraction_str(v) for c, v in self.q.items()},
        }


def _check_exact(k: int, t: int, l: int) -> None:
    if not 3 <= k <= MAX_EXACT_BITS:
        raise BudgetError(f"exact enumeration needs 3 <= k <= {MAX_EXACT_BITS}, got {k}")
    if t < 1 or l < 0:
        raise ValueError("need t >= 1 and l >= 0")


def _candidate_rows(k: int, D: int, l: int) -> np.ndarray:
    rows = census_table(1 << (k - 1), 1 << k, D)
    keep = rows[:, 3] != 0  # eps_n == 0 means gcd(n, D) > 1
    n = rows[:, 0]
    for p in odd_primes(l):
        keep &= n % p != 0
    return rows[keep]


def _tree_sum(terms: list[Fraction]) -> Fraction:
    """Pairwise summation; keeps intermediate denominators balanced."""
    if not terms:
        return Fraction(0)
    while len(terms) > 1:
        terms = [sum(terms[i:i + 2], Fraction(0)) for i in range(0, len(terms), 2)]
    return terms[0]


def _q(composite_sum: Fraction, primes: int) -> Fraction:
    total = composite_sum + primes
    return composite_sum / total if total else Fraction(0)


def exact_qkt_report(k: int, t: int, D: int, l: int = 0) -> ExactQ:
    """Exact q_{k,t} under both per-round conventions, from the census kernel."""
    _check_exact(k, t, l)
    rows = _candidate_rows(k, D, l)
    primes = int((rows[:, 6] == 1).sum())
    comp = rows[(rows[:, 6] >= 2) & (rows[:, 1] > 0)]
    sums = {}
    for conv in CONVENTIONS:
        n, sl, eps = comp[:, 0], comp[:, 1], comp[:, 3]
        den = n - eps - 1 if conv == "nominal" else n - comp[:, 5]
        sums[conv] = _tree_sum([Fraction(int(a) ** t, int(b) ** t) for a, b in zip(sl, den)])
    composites = int((rows[:, 6] >= 2).sum())
    return ExactQ(k, t, D, l, primes, composites, sums, {c: _q(s, primes) for c, s in sums.items()})


def enumerate_alpha_bar_sum(k: int, t: int, D: int, l: int = 0, convention: str = "nominal") -> Fraction:
    """Sum over composite candidates of the per-round pass probability to the t."""
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    return exact_qkt_report(k, t, D, l).composite_sum[convention]


def exact_qkt_small(k: int, t: int, D: int, l: int = 0, convention: str = "nominal") -> Fraction:
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    return exact_qkt_report(k, t, D, l).q[convention]


def exact_qkt_reference(k: int, t: int, D: int, l: int = 0, convention: str = "nominal") -> Fraction:
    """Same quantity by a direct scalar sweep with the big-integer code
    (factorize + alpha_report, sequential accumulation).  Slow; for checks."""
    _check_exact(k, t, l)
    small = odd_primes(l)
    acc = Fraction(0)
    primes = 0
    for n in range((1 << (k - 1)) + 1, 1 << k, 2):
        if math.gcd(n, D) != 1 or any(n % p == 0 for p in small):
            continue
        fac = factorize(n)
        if fac.is_prime:
            primes += 1
            continue
        rep = alpha_report(n, D, fac)
        acc += (rep.alpha_bar if convention == "nominal" else rep.pass_probability) ** t
    return _q(acc, primes)


# --- Monte Carlo --------------------------------------------------------------

def trial_seed(seed: int, index: int) -> int:
    """64-bit seed for trial ``index``, split deterministically from ``seed``."""
    state = np.random.SeedSequence([seed, index]).generate_state(2, dtype=np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def _run_trials(config: GenConfig, indices: range, max_candidates: int) -> int:
    composites = 0
    for i in indices:
        cfg = GenConfig(config.k, config.t, config.l, config.D, trial_seed(config.seed, i), config.twin_precheck)
        composites += generate_probable_prime(cfg, max_candidates).output_is_composite
    return composites


@dataclass(frozen=True)
class MonteCarloEstimate:
    config: GenConfig
    trials: int
    composites: int

    @property
    def estimate(self) -> float:
        return self.composites / self.trials

    @property
    def se(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1 - p) / self.trials)

    def within(self, exact: Fraction, sigmas: float = 3.0) -> bool:
        """|estimate - exact| <= sigmas * se, with se taken at the exact value."""
        p = float(exact)
        se = math.sqrt(p * (1 - p) / self.trials)
        return abs(Fraction(self.composites, self.trials) - exact) <= sigmas * se

    def summary_row(self, exact: Fraction | None = None) -> dict:
        c = self.config
        return {
            "k": c.k, "t": c.t, "l": c.l, "D": c.D, "seed": c.seed,
            "trials": self.trials, "composites": self.composites,
            "estimate": repr(self.estimate), "se": repr(self.se),
            "exact": "" if exact is None else fraction_decimal(exact),
        }


def monte_carlo_qkt(
    config: GenConfig,
    trials: int,
    threads: int = 1,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> MonteCarloEstimate:
    """Composite-output rate over ``trials`` independent generator runs.

    Trial i uses seed ``trial_seed(config.seed, i)``, so the result does not
    depend on ``threads``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if threads <= 1:
        return MonteCarloEstimate(config, trials, _run_trials(config, range(trials), max_candidates))
    chunks = [range(i, trials, threads) for i in range(threads)]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        counts = pool.map(_run_trials, [config] * threads, chunks, [max_candidates] * threads)
        return MonteCarloEstimate(config, trials, sum(counts))


# --- persistence --------------------------------------------------------------

SUMMARY_FIELDS = ("k", "t", "l", "D", "seed", "trials", "composites", "estimate", "se", "exact")


def write_records(records, path: str | Path) -> None:
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_json(), sort_keys=True) + "\n")


def read_records(path: str | Path) -> list[RunRecord]:
    out = []
    with open(path) as fh:
        for line in fh:
            d = json.loads(line)
            d["config"] = GenConfig(**d["config"])
            out.append(RunRecord(**d))
    return out


def write_summary(rows: list[dict], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
