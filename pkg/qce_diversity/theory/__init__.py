"""
Analytic results: Q-function, SEP bounds, diversity predictions and the
distributions of the quantization gains
"""
from .analytics import (
    MARGIN_DECOMPOSED,
    MARGIN_EXACT,
    SepBounds,
    c0_margin,
    closed_form_lower_LgtM,
    closed_form_upper_LgtM,
    craig_lower_LgtM,
    craig_upper_LgtM,
    diversity_regime,
    mgf_chisq_norm,
    predicted_diversity,
    safety_margin,
    sep_bounds_semi_analytic,
    sep_bounds_semi_analytic_grid,
    sep_half_plane_bounds,
    sep_lower_single_antenna,
    sep_sandwich_fixed_beta,
    ser_floor_LltM,
)
from .distributions import (
    QuantGainSample,
    cdf_alpha_i,
    cdf_v,
    pdf_alpha_bound,
    pdf_alpha_i,
    pdf_alpha_i_product,
    pdf_partial_sum_bound,
    pdf_rayleigh,
    pdf_v,
    sample_alpha,
    sample_beta,
    sample_quant_gain,
    sample_theta,
    sample_v,
    v_from_theta,
    v_support,
)
from .qfunc import q_function, q_function_craig

__all__ = [
    'MARGIN_DECOMPOSED',
    'MARGIN_EXACT',
    'SepBounds',
    'c0_margin',
    'closed_form_lower_LgtM',
    'closed_form_upper_LgtM',
    'craig_lower_LgtM',
    'craig_upper_LgtM',
    'diversity_regime',
    'mgf_chisq_norm',
    'predicted_diversity',
    'safety_margin',
    'sep_bounds_semi_analytic',
    'sep_bounds_semi_analytic_grid',
    'sep_half_plane_bounds',
    'sep_lower_single_antenna',
    'sep_sandwich_fixed_beta',
    'ser_floor_LltM',
    'QuantGainSample',
    'cdf_alpha_i',
    'cdf_v',
    'pdf_alpha_bound',
    'pdf_alpha_i',
    'pdf_alpha_i_product',
    'pdf_partial_sum_bound',
    'pdf_rayleigh',
    'pdf_v',
    'sample_alpha',
    'sample_beta',
    'sample_quant_gain',
    'sample_theta',
    'sample_v',
    'v_from_theta',
    'v_support',
    'q_function',
    'q_function_craig',
]
