"""
Numerical core of the antenna-density simulator.
Geometry, channels, rates, the variational optimizer, closed-form densities,
Toeplitz asymptotics and baseline placements.
"""
from .geometry import (
    TransmitArray, ReceiveArray, Placement, SampledFunction, FlexibleCurve,
    uniform_apf, empirical_adf, discretize_adf, flexible_curve, place_on_curve,
)
from .channel import (
    Variant, Normalization, Scatterer, ChannelScenario, ChannelMatrix, GramMatrix,
    los_response, nlos_response, channel_matrix, gram_discrete, gram_continuous, gram_toeplitz,
)
from .rate import RatePoint, achievable_rate_discrete, rate_functional
from .variational import OptimizerConfig, OptimizerTrace, functional_gradient, project_constraints, optimize_adf
from .specfun import log_gamma, digamma, log_barnes_g, incomplete_beta, inverse_incomplete_beta
from .closedform import (
    NearFieldFactors, AdfFamilyParams, nearfield_factors, weighted_adf, gamma_norm, optimal_adf,
    cadf_closed, positions_closed, closed_form_placement,
)
from .asymptotics import (
    Singularity, GeneratingFunction, fourier_coeff_wadf, truncated_generating, limit_generating,
    e_b_term, fh_log_det, asymptotic_rate, rate_alpha_derivative, corollary_check,
)
from .baselines import BaselineConfig, ula_placement, antenna_selection_greedy, random_placements

__all__ = [
    'TransmitArray', 'ReceiveArray', 'Placement', 'SampledFunction', 'FlexibleCurve',
    'uniform_apf', 'empirical_adf', 'discretize_adf', 'flexible_curve', 'place_on_curve',
    'Variant', 'Normalization', 'Scatterer', 'ChannelScenario', 'ChannelMatrix', 'GramMatrix',
    'los_response', 'nlos_response', 'channel_matrix', 'gram_discrete', 'gram_continuous', 'gram_toeplitz',
    'RatePoint', 'achievable_rate_discrete', 'rate_functional',
    'OptimizerConfig', 'OptimizerTrace', 'functional_gradient', 'project_constraints', 'optimize_adf',
    'log_gamma', 'digamma', 'log_barnes_g', 'incomplete_beta', 'inverse_incomplete_beta',
    'NearFieldFactors', 'AdfFamilyParams', 'nearfield_factors', 'weighted_adf', 'gamma_norm', 'optimal_adf',
    'cadf_closed', 'positions_closed', 'closed_form_placement',
    'Singularity', 'GeneratingFunction', 'fourier_coeff_wadf', 'truncated_generating', 'limit_generating',
    'e_b_term', 'fh_log_det', 'asymptotic_rate', 'rate_alpha_derivative', 'corollary_check',
    'BaselineConfig', 'ula_placement', 'antenna_selection_greedy', 'random_placements',
]
