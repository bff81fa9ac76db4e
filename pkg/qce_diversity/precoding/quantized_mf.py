"""
Quantized matched-filter (MF) precoder x = q_L(s h^*) and its effective gain

All functions accept a single channel vector of shape (N,) with a scalar
symbol, or a batch of shape (T, N) with T symbols.
"""
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from qce_diversity.core.model import ZERO_TOL, QceAlphabet, quantize_qce_index
from qce_diversity.exceptions import InvalidArgumentError, ZeroChannelEntryError
from qce_diversity.utils.phase import wrap_phase

ComplexLike = Union[complex, np.ndarray]


@dataclass(frozen=True)
class PrecodeResult:
    """Transmit vector x, per-antenna quantization angles theta_i and gain beta"""

    transmit: np.ndarray
    theta: np.ndarray
    beta: ComplexLike

    def received(self, h: np.ndarray) -> ComplexLike:
        """Noise-free received value h^T x (equals beta * s)"""
        y = np.sum(np.asarray(h) * self.transmit, axis=-1)
        return complex(y) if np.ndim(y) == 0 else y


def _prepare(h, s):
    h = np.asarray(h, dtype=complex)
    s = np.asarray(s, dtype=complex)
    if h.ndim == 0:
        raise InvalidArgumentError("channel must be a vector")
    if np.any(np.abs(h) < ZERO_TOL):
        raise ZeroChannelEntryError("channel has a zero entry; the matched filter phase is undefined")
    return h, s


def _scalar_if_single(beta: np.ndarray) -> ComplexLike:
    return complex(beta) if np.ndim(beta) == 0 else beta


def ce_mf(h, s, total_power: float = 1.0) -> PrecodeResult:
    """Unquantized constant-envelope MF: x_i = sqrt(P_T/N) exp(-j arg h_i) s"""
    h_arr = np.asarray(h)
    if h_arr.ndim == 0:
        raise InvalidArgumentError("channel must be a vector")
    return _ce_mf(h, s, math.sqrt(total_power / h_arr.shape[-1]))


def _ce_mf(h, s, amplitude: float) -> PrecodeResult:
    h, s = _prepare(h, s)
    transmit = amplitude * s[..., None] * np.exp(-1j * np.angle(h))
    theta = np.zeros(h.shape)
    beta = (amplitude * np.sum(np.abs(h), axis=-1)).astype(complex)
    return PrecodeResult(transmit=transmit, theta=theta, beta=_scalar_if_single(beta))


def quantized_mf(h, s, alphabet: QceAlphabet) -> PrecodeResult:
    """
    L-level quantized MF precoder.

    theta_i is the wrapped difference between the chosen alphabet phase and
    arg(s h_i^*), so that h_i x_i s^* = sqrt(P_T/N) |h_i| exp(j theta_i) and
    h^T x = beta s with beta = sqrt(P_T/N) sum_i |h_i| exp(j theta_i).
    """
    if alphabet.is_continuous:
        return _ce_mf(h, s, alphabet.amplitude)

    h, s = _prepare(h, s)
    target = s[..., None] * np.conj(h)
    index = quantize_qce_index(target, alphabet.levels)
    transmit = alphabet.points[index]
    theta = wrap_phase(alphabet.phases[index] - np.angle(target))
    beta = alphabet.amplitude * np.sum(np.abs(h) * np.exp(1j * theta), axis=-1)
    return PrecodeResult(transmit=transmit, theta=np.asarray(theta), beta=_scalar_if_single(beta))
