"""
QCE Diversity - link-level simulator for quantized constant envelope transmission
SER simulation, analytic SEP bounds and diversity order checks for M-PSK MISO links
"""

__version__ = "0.1.0"
__author__ = "QCE Diversity Contributors"
__license__ = "Apache-2.0"
