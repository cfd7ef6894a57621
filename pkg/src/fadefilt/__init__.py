"""Fading-memory smoothers and differentiators.

Recursive low-pass filters obtained from discounted least-squares
polynomial regression: tunable-delay causal smoothers/differentiators,
zero-phase two-sided variants, frequency-response analysis, streaming
and image filtering runtimes, and a gradient-based dense-flow pipeline
with a moving-target disparity map.
"""

from .weights import Causality, WeightSpec, weight_moments
from .basis import BasisSet, orthonormal_basis, synthesis_weights
from .design import (
    FilterDesign,
    LdeCoefficients,
    NonCausalPair,
    SpectrumFilterBank,
    binomial_denominator,
    derive_causal_lde,
    derive_noncausal_pair,
    impulse_response_prefix,
    pole_multiplicity,
    spectrum_filter_bank,
)
from .closed_form import (
    ClosedForm,
    closed_form_coefficients,
    closed_form_for,
    optimal_q,
)
from .response import (
    ResponseSample,
    evaluate_response,
    flatness_report,
    frequency_response,
    group_delay,
    is_flat,
    nyquist_gain,
    white_noise_gain,
    write_response_csv,
    zero_at_minus_one,
)
from .runtime import (
    Axis,
    FilterState,
    FrameFilter,
    Priming,
    filter_causal,
    filter_image_separable,
    filter_noncausal,
    filter_time_stack,
    steady_state_gain,
)
from .flow import (
    FlowConfig,
    FlowField,
    FlowResult,
    ProductMaps,
    background_disparity,
    process_sequence,
    smooth_products,
    solve_flow,
    spatial_gradients,
    temporal_gradient,
)
from .synthetic import (
    add_gaussian_blob,
    rotate_nearest,
    rotating_sequence,
    translating_plaid,
)

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "BasisSet",
    "Causality",
    "ClosedForm",
    "FilterDesign",
    "FilterState",
    "FlowConfig",
    "FlowField",
    "FlowResult",
    "FrameFilter",
    "LdeCoefficients",
    "NonCausalPair",
    "Priming",
    "ProductMaps",
    "ResponseSample",
    "SpectrumFilterBank",
    "WeightSpec",
    "add_gaussian_blob",
    "background_disparity",
    "binomial_denominator",
    "closed_form_coefficients",
    "closed_form_for",
    "derive_causal_lde",
    "derive_noncausal_pair",
    "evaluate_response",
    "filter_causal",
    "filter_image_separable",
    "filter_noncausal",
    "filter_time_stack",
    "flatness_report",
    "frequency_response",
    "group_delay",
    "impulse_response_prefix",
    "is_flat",
    "nyquist_gain",
    "optimal_q",
    "orthonormal_basis",
    "pole_multiplicity",
    "process_sequence",
    "rotate_nearest",
    "rotating_sequence",
    "smooth_products",
    "solve_flow",
    "spatial_gradients",
    "spectrum_filter_bank",
    "steady_state_gain",
    "synthesis_weights",
    "temporal_gradient",
    "translating_plaid",
    "weight_moments",
    "white_noise_gain",
    "write_response_csv",
    "zero_at_minus_one",
]
