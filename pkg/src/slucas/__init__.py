"""Strong Lucas probable-prime testing, the exact count of strong Lucas
liars, worst-case composites and average-case error bounds."""

from .bounds import (
    BoundReport,
    bound_p_kt,
    bound_prime_count,
    bound_q_k1,
    bound_q_kl1,
    bound_q_kl1_127,
    bound_q_klt,
    bound_q_klt_large_t,
    bound_q_kt,
    bound_twin_products,
    calc_trial_divisions,
    emit_tables,
)
from .census import AlphaReport, EpsDecomp, alpha_report, brute_force_sl, epsilon_decompose, phi_D, sl_count
from .experiment import GenConfig, RunRecord, exact_qkt_small, generate_probable_prime, monte_carlo_qkt
from .intmath import Factorization, factorize, is_prime_oracle, jacobi
from .lucas import (
    LucasBase,
    TestOutcome,
    Verdict,
    lucas_uv_mod,
    miller_rabin_round,
    sample_base,
    strong_lucas_round,
    strong_lucas_test,
    twin_product_precheck,
    verify_witness,
)
from .worst_case import C3Form, C3Tag, c_m_member, classify_c3, frac_cm_empirical

__version__ = "0.1.0"
