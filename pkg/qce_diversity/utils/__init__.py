"""
Utility functions for QCE Diversity
"""
from .logging import configure_logging
from .phase import wrap_phase

__all__ = ['configure_logging', 'wrap_phase']
