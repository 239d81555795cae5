"""Command-line entry point.

Exit status: 0 on success, 1 on usage errors, 2 when a budget or hypothesis
gate fails.
"""

from __future__ import annotations

import argparse
import json
import random
import secrets
import sys
from fractions import Fraction

from . import bounds
from .census import alpha_report, fraction_str
from .experiment import (
    GenConfig,
    MonteCarloEstimate,
    exact_qkt_report,
    generate_probable_prime,
    monte_carlo_qkt,
    trial_seed,
    write_records,
    write_summary,
)
from .intmath import BudgetError, FactorizationError, factorize
from .lucas import strong_lucas_test
from .worst_case import classify_c3


class GateFailure(Exception):
    """A hypothesis or budget gate did not hold; exit status 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


HUMAN_FRACTION_DIGITS = 60


def _human_fraction(x: Fraction) -> str:
    exact = fraction_str(x)
    if len(exact) > HUMAN_FRACTION_DIGITS:
        # --format json carries the full rational
        exact = f"<{len(str(x.denominator))}-digit denominator>"
    return f"{exact} (≈ {float(x):.6g})"


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(64)
        print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


# --- subcommands ------------------------------------------------------------

def cmd_test(args) -> None:
    seed = _seed(args)
    outcome, passed = strong_lucas_test(args.n, args.d, args.t, random.Random(seed), args.twin_precheck)
    payload = {**outcome.to_json(), "D": args.d, "rounds": args.t, "rounds_passed": passed, "seed": seed}
    if args.format == "human":
        print(f"{args.n}: {outcome.verdict.value} ({passed}/{args.t} rounds passed, D={args.d}, seed={seed})")
    print(_dump(payload))


def cmd_census(args) -> None:
    report = alpha_report(args.n, args.d, factorize(args.n))
    if args.format == "json":
        print(_dump(report.to_json()))
        return
    dec = report.decomposition
    print(f"n={args.n} D={args.d} eps(n)={dec.eps_n} n-eps(n)=2^{dec.kappa}*{dec.q}")
    for ps in dec.per_prime:
        print(f"  p={ps.p}^{ps.r} eps={ps.eps:+d} p-eps=2^{ps.k}*{ps.q}")
    print(f"sl={report.sl}")
    print(f"phi_d={report.phi_d}")
    print(f"alpha={_human_fraction(report.alpha)}")
    print(f"alpha_bar={_human_fraction(report.alpha_bar)}")
    print(f"pass_probability={_human_fraction(report.pass_probability)}")


def cmd_classify(args) -> None:
    form = classify_c3(args.n, args.d, published_list=args.published_list)
    if args.format == "json":
        print(_dump(form.to_json(args.n, args.d)))
        return
    params = " ".join(f"{k}={v}" for k, v in form.params.items())
    print(f"{args.n}: {form.tag.value} {params}".rstrip())


def cmd_bounds_table(args) -> None:
    sys.stdout.write(bounds.table_csv(bounds.emit_table(args.which)))


_THEOREMS = {
    "q_k1": lambda a: bounds.bound_q_k1(a.k),
    "q_kt": lambda a: bounds.bound_q_kt(a.k, a.t),
    "q_kl1": lambda a: bounds.bound_q_kl1(a.k, a.l),
    "q_kl1_127": lambda a: bounds.bound_q_kl1_127(a.k),
    "q_klt": lambda a: bounds.bound_q_klt(a.k, a.t, a.l),
    "q_klt_large_t": lambda a: bounds.bound_q_klt_large_t(a.k, a.t, a.l),
    "p_kt": lambda a: bounds.bound_p_kt(a.k, a.t, a.case),
}


def cmd_bounds_eval(args) -> None:
    report = _THEOREMS[args.theorem](args)
    print(_dump(report.to_json()))
    if not report.hypotheses_met:
        raise GateFailure(f"{report.theorem}: hypotheses not met for {report.params}")


def cmd_gen(args) -> None:
    cfg = GenConfig(args.k, args.t, args.l, args.d, _seed(args), args.twin_precheck)
    record = generate_probable_prime(cfg, args.max_candidates)
    if args.format == "human":
        tag = "composite" if record.output_is_composite else "prime"
        print(f"{record.output} ({tag}; {record.candidates_tested} candidates, seed={cfg.seed})")
    print(_dump(record.to_json()))


def cmd_experiment_exact(args) -> None:
    report = exact_qkt_report(args.k, args.t, args.d, args.l)
    if args.format == "json":
        print(_dump(report.to_json()))
        return
    print(f"k={args.k} t={args.t} D={args.d} l={args.l}")
    print(f"primes={report.prime_count} composites={report.composite_count}")
    for conv, q in report.q.items():
        print(f"q[{conv}]={_human_fraction(q)}")


def cmd_experiment_mc(args) -> None:
    cfg = GenConfig(args.k, args.t, args.l, args.d, _seed(args), args.twin_precheck)
    if args.records:
        recs = [
            generate_probable_prime(GenConfig(cfg.k, cfg.t, cfg.l, cfg.D, trial_seed(cfg.seed, i), cfg.twin_precheck))
            for i in range(args.trials)
        ]
        write_records(recs, args.records)
        est = MonteCarloEstimate(cfg, args.trials, sum(r.output_is_composite for r in recs))
    else:
        est = monte_carlo_qkt(cfg, args.trials, args.threads)
    exact = None
    if args.k <= 20:
        exact = exact_qkt_report(args.k, args.t, args.d, args.l).q["nominal"]
    row = est.summary_row(exact)
    if args.out:
        write_summary([row], args.out)
    if args.format == "json":
        print(_dump(row))
        return
    print(f"composites={est.composites}/{est.trials} estimate={est.estimate:.6g} se={est.se:.3g} seed={cfg.seed}")
    if exact is not None:
        sigmas = abs(est.estimate - float(exact)) / est.se if est.se else float("inf")
        print(f"exact={_human_fraction(exact)} deviation={sigmas:.2f} se")


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="slucas", description="Strong Lucas test, liar census and error bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p, choices=("human", "json")):
        p.add_argument("--format", choices=choices, default="human")

    p = sub.add_parser("test", help="run t strong Lucas rounds on n")
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--d", type=_int, default=5)
    p.add_argument("--t", type=_int, default=1)
    p.add_argument("--seed", type=_int)
    p.add_argument("--twin-precheck", action="store_true")
    fmt(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("census", help="SL(D, n), phi_D(n) and the liar fractions")
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--d", type=_int, required=True)
    fmt(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("classify", help="structural C_{3,D} form of n")
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--d", type=_int, required=True)
    p.add_argument("--published-list", action="store_true",
                   help="use the uncorrected published list of forms")
    fmt(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("bounds", help="error-probability bounds")
    bsub = p.add_subparsers(dest="bounds_command", required=True)
    q = bsub.add_parser("table", help="emit one comparison table as CSV")
    q.add_argument("--which", type=int, choices=(1, 2, 3, 4), required=True)
    q.set_defaults(func=cmd_bounds_table)
    q = bsub.add_parser("eval", help="evaluate one bound as JSON")
    q.add_argument("--theorem", choices=sorted(_THEOREMS), required=True)
    q.add_argument("--k", type=_int, required=True)
    q.add_argument("--t", type=_int, default=1)
    q.add_argument("--l", type=_int, default=0)
    q.add_argument("--case", choices=bounds.P_KT_CASES)
    q.set_defaults(func=cmd_bounds_eval)

    p = sub.add_parser("gen", help="generate a probable prime")
    p.add_argument("--k", type=_int, required=True)
    p.add_argument("--t", type=_int, default=1)
    p.add_argument("--l", type=_int, default=0)
    p.add_argument("--d", type=_int, default=5)
    p.add_argument("--seed", type=_int)
    p.add_argument("--twin-precheck", action="store_true")
    p.add_argument("--max-candidates", type=_int, default=10**7)
    fmt(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("experiment", help="exact and Monte Carlo error probabilities")
    esub = p.add_subparsers(dest="experiment_command", required=True)
    q = esub.add_parser("exact", help="exact q_{k,t} by enumeration (k <= 20)")
    q.add_argument("--k", type=_int, required=True)
    q.add_argument("--t", type=_int, default=1)
    q.add_argument("--d", type=_int, default=5)
    q.add_argument("--l", type=_int, default=0)
    fmt(q)
    q.set_defaults(func=cmd_experiment_exact)
    q = esub.add_parser("mc", help="Monte Carlo composite-output rate")
    q.add_argument("--k", type=_int, required=True)
    q.add_argument("--t", type=_int, default=1)
    q.add_argument("--l", type=_int, default=0)
    q.add_argument("--d", type=_int, default=5)
    q.add_argument("--trials", type=_int, default=1000)
    q.add_argument("--seed", type=_int)
    q.add_argument("--threads", type=_int, default=1)
    q.add_argument("--twin-precheck", action="store_true")
    q.add_argument("--out", help="write a one-row summary CSV here")
    q.add_argument("--records", help="write one JSON line per run here")
    fmt(q)
    q.set_defaults(func=cmd_experiment_mc)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (GateFailure, BudgetError, FactorizationError) as exc:
        print(f"slucas: gate failed: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"slucas: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
