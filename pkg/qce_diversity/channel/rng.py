"""
Reproducible random streams, Rayleigh fading channels and AWGN

Every stream is a Philox-4x64 counter-based generator keyed by
(master_seed, stream_id) through numpy's SeedSequence spawn keys. Gaussian
variates come from ``Generator.standard_normal`` (ziggurat). Both choices are
fixed for a release so seeded regressions stay stable.
"""
import math
from typing import Optional, Tuple

import numpy as np

from qce_diversity.exceptions import InvalidArgumentError, InvalidSigmaError

_UINT64_LIMIT = 2 ** 64


class RandomStream:
    """Independent, reproducible substream identified by (master_seed, stream_id)"""

    def __init__(self, master_seed: int, stream_id: int = 0):
        for name, value in (('master_seed', master_seed), ('stream_id', stream_id)):
            if not 0 <= int(value) < _UINT64_LIMIT:
                raise InvalidArgumentError(f"{name} must be a 64-bit unsigned integer, got {value}")
        self.master_seed = int(master_seed)
        self.stream_id = int(stream_id)
        seed_seq = np.random.SeedSequence(entropy=self.master_seed, spawn_key=(self.stream_id,))
        self._generator = np.random.Generator(np.random.Philox(seed_seq))

    @property
    def generator(self) -> np.random.Generator:
        return self._generator

    def substream(self, stream_id: int) -> 'RandomStream':
        """Fresh stream with the same master seed and a different id"""
        return RandomStream(self.master_seed, stream_id)

    def integers(self, high: int, size: Optional[int] = None):
        return self._generator.integers(0, high, size=size)

    def uniform(self, low: float, high: float, size=None):
        return self._generator.uniform(low, high, size=size)

    def standard_complex_normal(self, shape: Tuple[int, ...]) -> np.ndarray:
        """CN(0, 1) samples: real and imaginary parts i.i.d. N(0, 1/2)"""
        parts = self._generator.standard_normal(tuple(shape) + (2,))
        return (parts[..., 0] + 1j * parts[..., 1]) * math.sqrt(0.5)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RandomStream):
            return NotImplemented
        return (self.master_seed, self.stream_id) == (other.master_seed, other.stream_id)

    def __hash__(self) -> int:
        return hash((self.master_seed, self.stream_id))

    def __repr__(self) -> str:
        return f"RandomStream(master_seed={self.master_seed}, stream_id={self.stream_id})"


def snr_db_to_sigma2(snr_db):
    """rho = 1 / sigma^2, with rho given in dB"""
    return np.power(10.0, -np.asarray(snr_db, dtype=float) / 10.0)


def draw_channel(n: int, stream: RandomStream, size: Optional[int] = None) -> np.ndarray:
    """
    Draw i.i.d. CN(0, 1) channel vectors.

    Returns shape (n,) for a single vector or (size, n) for a batch of trials.
    """
    if int(n) < 1:
        raise InvalidArgumentError(f"channel length must be >= 1, got {n}")
    shape = (int(n),) if size is None else (int(size), int(n))
    return stream.standard_complex_normal(shape)


def draw_noise(sigma2: float, stream: RandomStream, size: Optional[int] = None):
    """Draw CN(0, sigma2) noise samples (a complex scalar when size is None)"""
    if not (np.isscalar(sigma2) and math.isfinite(sigma2) and sigma2 > 0):
        raise InvalidSigmaError(f"noise variance must be positive and finite, got {sigma2}")
    shape = () if size is None else (int(size),)
    noise = stream.standard_complex_normal(shape) * math.sqrt(sigma2)
    if size is None:
        return complex(noise)
    return noise
