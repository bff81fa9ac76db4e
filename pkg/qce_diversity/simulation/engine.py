"""
Monte Carlo SER engine for the quantized MF link y = h^T x + n
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from qce_diversity.channel.rng import RandomStream, draw_channel, draw_noise, snr_db_to_sigma2
from qce_diversity.core.model import (
    ZERO_TOL,
    PskConstellation,
    QceAlphabet,
    SystemConfig,
    nearest_psk_decode,
)
from qce_diversity.exceptions import ConfigError, InvalidArgumentError
from qce_diversity.precoding.quantized_mf import quantized_mf
from qce_diversity.theory.analytics import (
    MARGIN_EXACT,
    closed_form_lower_LgtM,
    closed_form_upper_LgtM,
    diversity_regime,
    sep_bounds_semi_analytic_grid,
    ser_floor_LltM,
)

logger = logging.getLogger(__name__)

# Part of the result contract: changing it changes every seeded curve
BLOCK_SIZE = 65536
MIN_TRIALS = 1000
MIN_TRIALS_BEFORE_STOP = 10_000
CI_Z = 1.96

# Stream id reserved for alpha sampling so it never collides with a trial block
BOUNDS_STREAM_ID = 1 << 62

CSV_COLUMNS = [
    'snr_db', 'trials', 'errors', 'ser', 'ci_half_width',
    'bound_lower', 'bound_upper', 'bound_up1', 'bound_lb1', 'bound_floor',
]


@dataclass(frozen=True)
class SerPoint:
    """SER estimate at one SNR with its 95% normal-approximation half width"""

    snr_db: float
    trials: int
    errors: int
    ser: float
    ci_half_width: float
    degenerate_decodes: int = field(default=0, compare=False)

    @classmethod
    def from_counts(cls, snr_db: float, trials: int, errors: int,
                    degenerate_decodes: int = 0) -> 'SerPoint':
        ser = errors / trials
        return cls(
            snr_db=float(snr_db),
            trials=int(trials),
            errors=int(errors),
            ser=ser,
            ci_half_width=CI_Z * math.sqrt(ser * (1.0 - ser) / trials),
            degenerate_decodes=int(degenerate_decodes),
        )

    @property
    def std_error(self) -> float:
        return math.sqrt(self.ser * (1.0 - self.ser) / self.trials)


@dataclass(frozen=True)
class BoundColumns:
    """Analytic bounds attached to one SER point; None where a bound does not apply"""

    lower: Optional[float] = None
    upper: Optional[float] = None
    up1: Optional[float] = None
    lb1: Optional[float] = None
    floor: Optional[float] = None
    alpha_std_error: Optional[float] = field(default=None, compare=False)


@dataclass(frozen=True)
class SerCurve:
    config: SystemConfig
    points: Tuple[SerPoint, ...]
    bounds: Optional[Tuple[BoundColumns, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, 'points', tuple(self.points))
        if self.bounds is not None:
            object.__setattr__(self, 'bounds', tuple(self.bounds))
            if len(self.bounds) != len(self.points):
                raise ValueError("one bound row is required per SER point")

    @property
    def snr_db(self) -> np.ndarray:
        return np.array([p.snr_db for p in self.points])

    @property
    def ser(self) -> np.ndarray:
        return np.array([p.ser for p in self.points])

    def to_frame(self) -> pd.DataFrame:
        """Table in CSV column order; absent bounds are NaN"""
        rows = []
        bounds = self.bounds or (BoundColumns(),) * len(self.points)
        for point, bound in zip(self.points, bounds):
            rows.append({
                'snr_db': point.snr_db,
                'trials': point.trials,
                'errors': point.errors,
                'ser': point.ser,
                'ci_half_width': point.ci_half_width,
                'bound_lower': bound.lower,
                'bound_upper': bound.upper,
                'bound_up1': bound.up1,
                'bound_lb1': bound.lb1,
                'bound_floor': bound.floor,
            })
        frame = pd.DataFrame(rows, columns=CSV_COLUMNS)
        frame[['trials', 'errors']] = frame[['trials', 'errors']].astype('int64')
        bound_cols = CSV_COLUMNS[5:]
        frame[bound_cols] = frame[bound_cols].astype(float)
        return frame

    @classmethod
    def from_frame(cls, config: SystemConfig, frame: pd.DataFrame) -> 'SerCurve':
        missing = [c for c in CSV_COLUMNS if c not in frame.columns]
        if missing:
            raise InvalidArgumentError(f"missing columns: {', '.join(missing)}")

        def optional(value) -> Optional[float]:
            return None if pd.isna(value) else float(value)

        points, bounds = [], []
        for row in frame.itertuples(index=False):
            points.append(SerPoint(
                snr_db=float(row.snr_db),
                trials=int(row.trials),
                errors=int(row.errors),
                ser=float(row.ser),
                ci_half_width=float(row.ci_half_width),
            ))
            bounds.append(BoundColumns(
                lower=optional(row.bound_lower),
                upper=optional(row.bound_upper),
                up1=optional(row.bound_up1),
                lb1=optional(row.bound_lb1),
                floor=optional(row.bound_floor),
            ))
        has_bounds = any(b != BoundColumns() for b in bounds)
        return cls(config=config, points=tuple(points), bounds=tuple(bounds) if has_bounds else None)


@dataclass(frozen=True)
class _BlockCount:
    trials: int
    errors: int
    degenerate: int


def _block_sizes(trials: int) -> List[int]:
    full, rest = divmod(trials, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def simulate_block(config: SystemConfig, sigma2: float, block_index: int, size: int) -> _BlockCount:
    """
    Run ``size`` independent trials on the substream of ``block_index``.

    Draw order inside a block is channel, symbols, noise. Every SNR point reuses
    the same block streams, so curves are built on common random numbers.
    """
    stream = RandomStream(config.seed, block_index)
    constellation = PskConstellation(config.psk_order)
    alphabet = QceAlphabet.from_config(config)

    h = draw_channel(config.n_antennas, stream, size=size)
    sent = stream.integers(config.psk_order, size=size)
    noise = draw_noise(sigma2, stream, size=size)

    precoded = quantized_mf(h, constellation.points[sent], alphabet)
    y = np.sum(h * precoded.transmit, axis=-1) + noise
    decoded = nearest_psk_decode(y, constellation)
    return _BlockCount(
        trials=size,
        errors=int(np.count_nonzero(decoded != sent)),
        degenerate=int(np.count_nonzero(np.abs(y) < ZERO_TOL)),
    )


def _waves(n_blocks: int, width: int) -> Iterator[range]:
    for start in range(0, n_blocks, width):
        yield range(start, min(start + width, n_blocks))


def _simulate_point(config: SystemConfig, snr_db: float, executor: Optional[ThreadPoolExecutor]) -> SerPoint:
    sigma2 = float(snr_db_to_sigma2(snr_db))
    sizes = _block_sizes(config.trials)
    trials = errors = degenerate = 0
    stopped = False

    # Blocks are reduced strictly in index order and the stop rule only looks
    # at completed prefixes, so the result never depends on the worker count.
    for wave in _waves(len(sizes), config.workers):
        if executor is None:
            counts = [simulate_block(config, sigma2, b, sizes[b]) for b in wave]
        else:
            counts = list(executor.map(lambda b: simulate_block(config, sigma2, b, sizes[b]), wave))
        for count in counts:
            trials += count.trials
            errors += count.errors
            degenerate += count.degenerate
            if (config.min_errors > 0 and errors >= config.min_errors
                    and trials >= MIN_TRIALS_BEFORE_STOP):
                stopped = True
                break
        if stopped:
            break

    if degenerate:
        logger.warning("%s at %.2f dB: %d zero received values decoded as symbol 0",
                       config.label, snr_db, degenerate)
    logger.info("%s at %.2f dB: %d errors in %d trials%s", config.label, snr_db, errors, trials,
                " (early stop)" if trials < config.trials else "")
    return SerPoint.from_counts(snr_db, trials, errors, degenerate)


def run_ser(config: SystemConfig) -> SerCurve:
    """
    Estimate the SER at every point of the configured SNR grid.

    Trials are split into blocks of BLOCK_SIZE that run on ``config.workers``
    threads. With ``min_errors > 0`` a point stops at the first block boundary
    where at least ``min_errors`` errors and MIN_TRIALS_BEFORE_STOP trials have
    been accumulated.
    """
    if config.trials < MIN_TRIALS:
        raise ConfigError(f"at least {MIN_TRIALS} trials are required, got {config.trials}", field='trials')

    logger.debug("Simulating %s over %d SNR points with %d worker(s)",
                 config.label, len(config.snr_grid_db), config.workers)
    if config.workers == 1:
        points = [_simulate_point(config, snr, None) for snr in config.snr_grid_db]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as executor:
            points = [_simulate_point(config, snr, executor) for snr in config.snr_grid_db]
    return SerCurve(config=config, points=tuple(points))


def bound_rows(config: SystemConfig, snr_grid_db: Sequence[float], alpha_samples: int,
               stream: Optional[RandomStream] = None) -> List[BoundColumns]:
    """
    Semi-analytic sandwich plus whichever closed forms apply to the (L, M) regime.

    The sandwich averages over the exact safety margin of sampled gains.
    """
    stream = stream or RandomStream(config.seed, BOUNDS_STREAM_ID)
    semi = sep_bounds_semi_analytic_grid(config, snr_grid_db, alpha_samples, stream, margin=MARGIN_EXACT)
    regime = diversity_regime(config)
    floor = ser_floor_LltM(config) if regime == 'zero' else None

    rows = []
    for snr_db, bounds in zip(snr_grid_db, semi):
        up1 = lb1 = None
        if regime == 'full':
            up1 = float(closed_form_upper_LgtM(config, snr_db))
            lb1 = float(closed_form_lower_LgtM(config, snr_db))
        rows.append(BoundColumns(lower=bounds.lower, upper=bounds.upper, up1=up1, lb1=lb1,
                                 floor=floor, alpha_std_error=bounds.std_error))
    return rows


def attach_bounds(curve: SerCurve, alpha_samples: int,
                  stream: Optional[RandomStream] = None) -> SerCurve:
    """Return a copy of ``curve`` with analytic bound columns for every point"""
    if not curve.points:
        raise InvalidArgumentError("cannot attach bounds to an empty curve")
    rows = bound_rows(curve.config, [p.snr_db for p in curve.points], alpha_samples, stream)
    return replace(curve, bounds=tuple(rows))
