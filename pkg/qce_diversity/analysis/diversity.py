"""
Empirical diversity order and SER floor detection from simulated curves
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from qce_diversity.exceptions import InsufficientDataError, InvalidArgumentError
from qce_diversity.simulation.engine import SerCurve
from qce_diversity.theory.analytics import diversity_regime, predicted_diversity

logger = logging.getLogger(__name__)

MIN_FIT_POINTS = 3
MIN_FIT_ERRORS = 50
FLOOR_RATIO = 0.8
FLOOR_SPAN_DB = 10.0

Window = Tuple[float, float]


@dataclass(frozen=True)
class DiversityEstimate:
    """Fitted log-log slope next to the predicted diversity order"""

    slope: float
    fit_window_db: Window
    residual_rms: float
    predicted: Fraction
    regime: str
    n_points: int

    def matches_prediction(self, tolerance: float) -> bool:
        """True when the slope is within ``tolerance`` (relative) of a nonzero prediction"""
        if self.predicted == 0:
            return abs(self.slope) <= tolerance
        target = float(self.predicted)
        return abs(self.slope - target) <= tolerance * target


@dataclass(frozen=True)
class FloorEstimate:
    detected: bool
    floor: float
    ratio: float
    reference_snr_db: float
    highest_snr_db: float


def _in_window(snr_db: np.ndarray, window_db: Optional[Window]) -> np.ndarray:
    if window_db is None:
        return np.ones(snr_db.shape, dtype=bool)
    lo, hi = window_db
    if hi < lo:
        raise InvalidArgumentError(f"fit window is reversed: ({lo}, {hi})")
    return (snr_db >= lo) & (snr_db <= hi)


def fit_slope(snr_db: Sequence[float], values: Sequence[float],
              window_db: Optional[Window] = None) -> Tuple[float, float, int]:
    """
    Negated least-squares slope of log10(values) against log10(rho) = snr_db / 10.

    Non-positive values are skipped. Returns (slope, residual_rms, points used).
    """
    snr = np.asarray(snr_db, dtype=float)
    vals = np.asarray(values, dtype=float)
    usable = _in_window(snr, window_db) & (vals > 0) & np.isfinite(vals)
    if np.count_nonzero(usable) < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"need at least {MIN_FIT_POINTS} usable points, got {int(np.count_nonzero(usable))}"
        )
    x = snr[usable] / 10.0
    y = np.log10(vals[usable])
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    return float(-slope), float(np.sqrt(np.mean(residual ** 2))), int(x.size)


def fit_diversity(curve: SerCurve, window_db: Optional[Window] = None,
                  min_errors: int = MIN_FIT_ERRORS) -> DiversityEstimate:
    """
    Estimate the diversity order over ``window_db`` (inclusive, whole grid if None).

    Points with fewer than ``min_errors`` errors (and always those with none)
    are excluded.
    """
    snr = curve.snr_db
    ser = np.array([p.ser if p.errors >= max(min_errors, 1) else 0.0 for p in curve.points])
    slope, residual, used = fit_slope(snr, ser, window_db)
    if window_db is None:
        kept = snr[ser > 0]
        window_db = (float(kept.min()), float(kept.max()))

    estimate = DiversityEstimate(
        slope=slope,
        fit_window_db=(float(window_db[0]), float(window_db[1])),
        residual_rms=residual,
        predicted=predicted_diversity(curve.config),
        regime=diversity_regime(curve.config),
        n_points=used,
    )
    logger.debug("%s: slope %.3f over %s dB (predicted %s)", curve.config.label,
                 estimate.slope, estimate.fit_window_db, estimate.predicted)
    return estimate


def floor_detect(curve: SerCurve) -> FloorEstimate:
    """
    Compare the SER at the highest SNR with the SER roughly 10 dB below it.

    The reference is the lowest grid point in [hi - 10, hi). A floor is declared
    when the ratio exceeds FLOOR_RATIO and neither confidence interval reaches 0.
    """
    if len(curve.points) < 2:
        raise InsufficientDataError("floor detection needs at least two SNR points")
    top = curve.points[-1]
    candidates = [p for p in curve.points[:-1] if top.snr_db - FLOOR_SPAN_DB <= p.snr_db < top.snr_db]
    if not candidates:
        raise InsufficientDataError(
            f"no SNR point within {FLOOR_SPAN_DB:g} dB below {top.snr_db:g} dB"
        )
    reference = candidates[0]

    ratio = top.ser / reference.ser if reference.ser > 0 else math.nan
    ci_clear = (top.ser - top.ci_half_width > 0) and (reference.ser - reference.ci_half_width > 0)
    detected = bool(ci_clear and ratio > FLOOR_RATIO)
    return FloorEstimate(
        detected=detected,
        floor=top.ser,
        ratio=ratio,
        reference_snr_db=reference.snr_db,
        highest_snr_db=top.snr_db,
    )
