"""Discrete q-Hermite I polynomials, higher-order Sobolev-type relatives,
and the analysis of their zeros.

Quick start:

    from fractions import Fraction
    import qsobolev as qs

    ctx = qs.QContext(Fraction(3, 5))
    herm = qs.build_hermite(ctx, 8)
    params = qs.SobolevParams(alpha=3, lam=1, j=2)
    fam = qs.build_sobolev(ctx, params, 8)
    qs.find_roots(ctx, fam.polys[5], alpha=params.alpha)
"""

from .context import ConvergenceError, QContext, as_fraction
from .hermite import (
    HermiteCache,
    build_hermite,
    forward_shift,
    generating_function_check,
    hermite_via_phi21,
    jackson_integral,
    qdiff_equation_residual,
    weighted_inner,
)
from .kernel import (
    christoffel_darboux,
    closed_form_AB,
    closed_form_CD,
    kernel_sum,
    kernel_value,
    kernel_value_reduced,
)
from .poly import (
    Poly,
    RatFn,
    cleared_residual,
    coeffs_close,
    dq,
    dq_inv,
    dq_pow,
    jhc_subtraction_power,
    q_leibniz_check,
    q_taylor_poly,
)
from .qcore import (
    PoleError,
    basic_hypergeometric,
    q_binomial,
    q_factorial,
    q_falling_factorial,
    q_number,
    q_pochhammer,
    q_pochhammer_inf,
    q_pochhammer_inf_multi,
)
from .sobolev import (
    SobolevCache,
    SobolevParams,
    build_sobolev,
    dq_sobolev_connection,
    dqj_at_alpha_identity,
    ef_coefficients,
    hypergeometric_rep,
    ladder_apply,
    limiting_polynomial,
    long_recurrence_coeffs,
    sobolev_inner,
    theta,
    three_term_coeffs,
)
from .verify import CheckResult, run_suite
from .zeros import (
    RootFindingError,
    ZeroSet,
    find_roots,
    interlacing_check,
    interlacing_check_triple,
    interlacing_lemma_probe,
    lambda0,
    lambda_alpha,
    limit_rate_check,
    zero_table,
)

__version__ = "1.0.0"

__all__ = [
    "ConvergenceError",
    "QContext",
    "as_fraction",
    "HermiteCache",
    "build_hermite",
    "forward_shift",
    "generating_function_check",
    "hermite_via_phi21",
    "jackson_integral",
    "qdiff_equation_residual",
    "weighted_inner",
    "christoffel_darboux",
    "closed_form_AB",
    "closed_form_CD",
    "kernel_sum",
    "kernel_value",
    "kernel_value_reduced",
    "Poly",
    "RatFn",
    "cleared_residual",
    "coeffs_close",
    "dq",
    "dq_inv",
    "dq_pow",
    "jhc_subtraction_power",
    "q_leibniz_check",
    "q_taylor_poly",
    "PoleError",
    "basic_hypergeometric",
    "q_binomial",
    "q_factorial",
    "q_falling_factorial",
    "q_number",
    "q_pochhammer",
    "q_pochhammer_inf",
    "q_pochhammer_inf_multi",
    "SobolevCache",
    "SobolevParams",
    "build_sobolev",
    "dq_sobolev_connection",
    "dqj_at_alpha_identity",
    "ef_coefficients",
    "hypergeometric_rep",
    "ladder_apply",
    "limiting_polynomial",
    "long_recurrence_coeffs",
    "sobolev_inner",
    "theta",
    "three_term_coeffs",
    "CheckResult",
    "run_suite",
    "RootFindingError",
    "ZeroSet",
    "find_roots",
    "interlacing_check",
    "interlacing_check_triple",
    "interlacing_lemma_probe",
    "lambda0",
    "lambda_alpha",
    "limit_rate_check",
    "zero_table",
]
