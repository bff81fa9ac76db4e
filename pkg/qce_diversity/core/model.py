"""
Core system model for QCE transmission with M-PSK signalling
"""
import math
from dataclasses import dataclass, field, replace
from numbers import Integral
from typing import Tuple, Union

import numpy as np

from qce_diversity.exceptions import ConfigError, InvalidArgumentError, ZeroInputError
from qce_diversity.utils.phase import wrap_phase

# L = INFINITE selects the unquantized constant-envelope limit
INFINITE = math.inf

ZERO_TOL = 1e-300

# Phases closer than this (in sector units) to a sector boundary count as ties
_BOUNDARY_SNAP = 1e-9

Levels = Union[int, float]


def is_infinite(levels: Levels) -> bool:
    return isinstance(levels, float) and math.isinf(levels)


def format_levels(levels: Levels) -> str:
    return "inf" if is_infinite(levels) else str(int(levels))


@dataclass(frozen=True)
class SystemConfig:
    """Full description of one simulated link"""

    n_antennas: int
    psk_order: int
    quant_levels: Levels
    snr_grid_db: Tuple[float, ...]
    trials: int
    seed: int
    total_power: float = 1.0
    min_errors: int = 200
    workers: int = 1

    def __post_init__(self):
        _require_int(self.n_antennas, 'n_antennas', minimum=1)
        _require_int(self.psk_order, 'psk_order', minimum=2)
        if not is_infinite(self.quant_levels):
            _require_int(self.quant_levels, 'quant_levels', minimum=1)
            object.__setattr__(self, 'quant_levels', int(self.quant_levels))
        _require_int(self.trials, 'trials', minimum=1)
        _require_int(self.min_errors, 'min_errors', minimum=0)
        _require_int(self.workers, 'workers', minimum=1)
        _require_int(self.seed, 'seed', minimum=0)
        if self.seed >= 2 ** 64:
            raise ConfigError("seed must fit in 64 unsigned bits", field='seed')

        if not (isinstance(self.total_power, (int, float)) and math.isfinite(self.total_power)
                and self.total_power > 0):
            raise ConfigError("total_power must be a positive real", field='total_power')

        grid = tuple(float(v) for v in self.snr_grid_db)
        if not grid:
            raise ConfigError("SNR grid is empty", field='snr_db')
        if any(not math.isfinite(v) for v in grid):
            raise ConfigError("SNR grid values must be finite", field='snr_db')
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("SNR grid must be strictly increasing", field='snr_db')
        object.__setattr__(self, 'snr_grid_db', grid)

    @property
    def is_ce_limit(self) -> bool:
        return is_infinite(self.quant_levels)

    @property
    def label(self) -> str:
        """Short identifier used for file names, e.g. N2_M4_Linf"""
        return f"N{self.n_antennas}_M{self.psk_order}_L{format_levels(self.quant_levels)}"

    def with_levels(self, levels: Levels) -> 'SystemConfig':
        return replace(self, quant_levels=levels)


def _require_int(value, name: str, minimum: int):
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise ConfigError(f"expected an integer, got {value!r}", field=name)
    if value < minimum:
        raise ConfigError(f"must be >= {minimum}, got {value}", field=name)


@dataclass(frozen=True)
class PskConstellation:
    """M-PSK points s_m = exp(j 2 pi (m-1) / M)"""

    order: int
    points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _require_int(self.order, 'psk_order', minimum=2)
        points = np.exp(2j * np.pi * np.arange(self.order) / self.order)
        points[0] = 1.0 + 0.0j
        points.setflags(write=False)
        object.__setattr__(self, 'points', points)

    @property
    def half_sector(self) -> float:
        return np.pi / self.order


@dataclass(frozen=True)
class QceAlphabet:
    """
    Transmit set X_L: L points of amplitude sqrt(P_T / N) at phases (2l - 1) pi / L.

    With levels = INFINITE the alphabet is the whole circle of that radius and
    ``points`` is None.
    """

    levels: Levels
    amplitude: float
    points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if is_infinite(self.levels):
            object.__setattr__(self, 'points', None)
            return
        _require_int(self.levels, 'quant_levels', minimum=1)
        l_index = np.arange(1, self.levels + 1)
        points = self.amplitude * np.exp(1j * (2 * l_index - 1) * np.pi / self.levels)
        points.setflags(write=False)
        object.__setattr__(self, 'points', points)

    @classmethod
    def for_array(cls, levels: Levels, n_antennas: int, total_power: float = 1.0) -> 'QceAlphabet':
        return cls(levels=levels, amplitude=math.sqrt(total_power / n_antennas))

    @classmethod
    def from_config(cls, config: SystemConfig) -> 'QceAlphabet':
        return cls.for_array(config.quant_levels, config.n_antennas, config.total_power)

    @property
    def is_continuous(self) -> bool:
        return self.points is None

    @property
    def phases(self) -> np.ndarray:
        if self.is_continuous:
            raise InvalidArgumentError("continuous alphabet has no discrete phases")
        return (2 * np.arange(1, self.levels + 1) - 1) * np.pi / self.levels


def _snap(u: np.ndarray) -> np.ndarray:
    nearest = np.round(u)
    return np.where(np.abs(u - nearest) < _BOUNDARY_SNAP, nearest, u)


def _check_nonzero(z: np.ndarray):
    if np.any(np.abs(z) < ZERO_TOL):
        raise ZeroInputError("cannot quantize a zero-magnitude value")


def quantize_qce_index(z, levels: int) -> np.ndarray:
    """
    0-based index l - 1 of the nearest X_L point for every element of ``z``.

    Point l owns the phase sector (2(l-1) pi / L, 2 l pi / L]; phase 0 belongs to
    l = 1. On a boundary the smaller index wins.
    """
    z = np.asarray(z, dtype=complex)
    _check_nonzero(z)
    turns = _snap(np.mod(np.angle(z), 2 * np.pi) * levels / (2 * np.pi))
    # phases just below 2 pi are the same tie as phase 0
    turns = np.where(turns >= levels - _BOUNDARY_SNAP, 0.0, turns)
    index = np.clip(np.ceil(turns).astype(np.int64), 1, levels) - 1
    return index


def quantize_qce(z, alphabet: QceAlphabet):
    """Component-wise nearest-point quantizer q_L onto the alphabet"""
    z_arr = np.asarray(z, dtype=complex)
    if alphabet.is_continuous:
        _check_nonzero(z_arr)
        out = alphabet.amplitude * z_arr / np.abs(z_arr)
    else:
        out = alphabet.points[quantize_qce_index(z_arr, alphabet.levels)]
    if out.ndim == 0:
        return complex(out)
    return out


def angular_error(z, alphabet: QceAlphabet):
    """arg(z) - arg(q_L(z)) wrapped to (-pi, pi]; lies in [-pi/L, pi/L]"""
    z_arr = np.asarray(z, dtype=complex)
    if alphabet.is_continuous:
        _check_nonzero(z_arr)
        err = np.zeros(z_arr.shape)
        return float(err) if err.ndim == 0 else err
    q = quantize_qce(z_arr, alphabet)
    return wrap_phase(np.angle(z_arr) - np.angle(q))


def nearest_psk_decode(y, constellation: PskConstellation):
    """
    Index of the PSK point nearest to ``y``.

    Symbol m owns the phase sector [arg(s_m) - pi/M, arg(s_m) + pi/M): a received
    phase on a boundary goes to the counter-clockwise neighbour. A zero received
    value is decoded as index 0.
    """
    y = np.asarray(y, dtype=complex)
    m = constellation.order
    turns = _snap((np.angle(y) + np.pi / m) * m / (2 * np.pi))
    index = np.mod(np.floor(turns).astype(np.int64), m)
    index = np.where(np.abs(y) < ZERO_TOL, 0, index)
    if index.ndim == 0:
        return int(index)
    return index


def parse_levels(value) -> Levels:
    """Accept an integer or the string 'inf' for the quantization level count"""
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ('inf', 'infinity', '∞'):
            return INFINITE
        try:
            return int(text)
        except ValueError:
            raise ConfigError(f"expected an integer or 'inf', got {value!r}", field='l')
    if isinstance(value, float) and math.isinf(value) and value > 0:
        return INFINITE
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise ConfigError(f"expected an integer or 'inf', got {value!r}", field='l')
    return int(value)
