"""
Gaussian tail function Q(x) and its finite-range (Craig) integral form
"""
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.special import erfc

from qce_diversity.exceptions import InvalidArgumentError

DEFAULT_PANELS = 64
NODES_PER_PANEL = 8
MIN_PANELS = 8


def _as_output(values: np.ndarray):
    return float(values) if np.ndim(values) == 0 else values


def q_function(x):
    """Q(x) = P(Z > x) for standard normal Z, through erfc"""
    return _as_output(0.5 * erfc(np.asarray(x, dtype=float) / np.sqrt(2.0)))


@lru_cache(maxsize=32)
def craig_nodes(panels: int = DEFAULT_PANELS) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes and weights for integrals over theta in [0, pi/2].

    Composite Gauss-Legendre on t in [0, 1] with theta = (pi/2) t^2, which
    grades the mesh toward theta = 0 where exp(-x^2 / (2 sin^2 theta))
    switches on for small x.
    """
    if panels < MIN_PANELS:
        raise InvalidArgumentError(f"Craig quadrature needs at least {MIN_PANELS} panels, got {panels}")
    ref_nodes, ref_weights = np.polynomial.legendre.leggauss(NODES_PER_PANEL)
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    t = (mid[:, None] + half[:, None] * ref_nodes[None, :]).ravel()
    w_t = (half[:, None] * ref_weights[None, :]).ravel()

    theta = 0.5 * np.pi * t ** 2
    weights = w_t * np.pi * t
    theta.setflags(write=False)
    weights.setflags(write=False)
    return theta, weights


def q_function_craig(x, panels: int = DEFAULT_PANELS):
    """Q(x) = (1/pi) * integral_0^{pi/2} exp(-x^2 / (2 sin^2 theta)) dtheta, x >= 0"""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise InvalidArgumentError("Craig's form of Q holds for x >= 0 only")
    theta, weights = craig_nodes(panels)
    exponent = -(x[..., None] ** 2) / (2.0 * np.sin(theta) ** 2)
    return _as_output(np.sum(weights * np.exp(exponent), axis=-1) / np.pi)
