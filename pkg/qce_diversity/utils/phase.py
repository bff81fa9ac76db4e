"""
Phase arithmetic helpers
"""
import numpy as np


def wrap_phase(phi):
    """Wrap angles to the canonical range (-pi, pi]"""
    wrapped = np.pi - np.mod(np.pi - np.asarray(phi, dtype=float), 2 * np.pi)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped
