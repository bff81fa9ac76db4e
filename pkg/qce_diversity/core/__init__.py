"""
System model: configuration, constellations, QCE quantizer and PSK decoder
"""
from .model import (
    INFINITE,
    PskConstellation,
    QceAlphabet,
    SystemConfig,
    angular_error,
    format_levels,
    is_infinite,
    nearest_psk_decode,
    parse_levels,
    quantize_qce,
    quantize_qce_index,
)

__all__ = [
    'INFINITE',
    'PskConstellation',
    'QceAlphabet',
    'SystemConfig',
    'angular_error',
    'format_levels',
    'is_infinite',
    'nearest_psk_decode',
    'parse_levels',
    'quantize_qce',
    'quantize_qce_index',
]
