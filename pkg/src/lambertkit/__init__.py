"""Lambert series evaluation, identity checks and related number-theoretic constants."""
from .arith import (
    ArithTable,
    build_table,
    chebyshev_psi,
    chebyshev_theta,
    divisor_convolve_with_one,
    prime_reciprocal_sum,
    primes_upto,
)
from .asymptotics import (
    AsymptoticExpansion,
    ResidualScan,
    dseries_direct,
    partition_log_check,
    schlomilch_residual_scan,
    slowly_decreasing_check,
    tauber_h,
    tauber_logd_residual,
    voronoi_rhs,
    wigert_eval,
    wigert_expansion,
)
from .errors import DomainError, LambertError, OutOfRangeError, SizeError, UsageError
from .mertens import (
    MERTENS_H,
    MertensReport,
    mertens_first_check,
    mertens_H_direct,
    mertens_H_mobius,
    mertens_second_check,
)
from .series import (
    EvalReport,
    SingularityProbe,
    StopReason,
    burhenne_fk_derivative,
    eval_clausen,
    eval_eisenstein_cf,
    eval_eisenstein_qseries,
    eval_naive,
    eval_power_series,
    identity_residual,
    singularity_probe,
)
from .special import (
    EULER_GAMMA,
    BernoulliCache,
    bernoulli_numbers,
    cot_half_expansion,
    ei_symmetric_combo,
    exp_integral_ei,
    gamma_bernoulli_partial_sums,
    prime_zeta,
    zeta_real,
)

__version__ = "0.1.0"
