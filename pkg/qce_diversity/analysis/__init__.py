"""
Diversity fitting and experiment orchestration
"""
from .diversity import DiversityEstimate, FloorEstimate, fit_diversity, fit_slope, floor_detect
from .experiment import ExperimentRunner, ExperimentSpec, VariantResult, run_experiment

__all__ = [
    'DiversityEstimate',
    'FloorEstimate',
    'fit_diversity',
    'fit_slope',
    'floor_detect',
    'ExperimentRunner',
    'ExperimentSpec',
    'VariantResult',
    'run_experiment',
]
