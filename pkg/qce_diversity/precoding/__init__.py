"""
Quantized matched-filter precoding
"""
from .quantized_mf import PrecodeResult, ce_mf, quantized_mf

__all__ = ['PrecodeResult', 'ce_mf', 'quantized_mf']
