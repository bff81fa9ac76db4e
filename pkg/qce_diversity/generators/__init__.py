"""
CSV and summary output
"""
from .report_generator import ReportGenerator, emit_csv, read_csv

__all__ = ['ReportGenerator', 'emit_csv', 'read_csv']
