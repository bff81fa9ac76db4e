"""
Monte Carlo SER simulation
"""
from .engine import (
    BLOCK_SIZE,
    CSV_COLUMNS,
    BoundColumns,
    SerCurve,
    SerPoint,
    attach_bounds,
    bound_rows,
    run_ser,
)

__all__ = [
    'BLOCK_SIZE',
    'CSV_COLUMNS',
    'BoundColumns',
    'SerCurve',
    'SerPoint',
    'attach_bounds',
    'bound_rows',
    'run_ser',
]
