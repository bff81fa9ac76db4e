"""
Rayleigh channel and noise generation from reproducible random streams
"""
from .rng import RandomStream, draw_channel, draw_noise, snr_db_to_sigma2

__all__ = ['RandomStream', 'draw_channel', 'draw_noise', 'snr_db_to_sigma2']
