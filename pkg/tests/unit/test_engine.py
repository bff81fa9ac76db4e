"""
Unit tests for the Monte Carlo SER engine
"""
import math
from dataclasses import replace

import pytest

from qce_diversity.core.model import INFINITE, SystemConfig
from qce_diversity.exceptions import ConfigError
from qce_diversity.simulation.engine import (
    BLOCK_SIZE,
    CSV_COLUMNS,
    SerCurve,
    SerPoint,
    attach_bounds,
    run_ser,
)


def test_ser_point_invariants():
    """Test SER and confidence half width follow from the counts"""
    point = SerPoint.from_counts(10.0, 10_000, 250)
    assert point.ser == 0.025
    assert point.ci_half_width == pytest.approx(1.96 * math.sqrt(0.025 * 0.975 / 10_000))
    assert SerPoint.from_counts(0.0, 100, 0).ci_half_width == 0.0


def test_bpsk_matches_rayleigh_average(ce_config):
    """Test N = 1, M = 2, L = inf against the exact Rayleigh-averaged SEP"""
    curve = run_ser(ce_config)
    point = curve.points[0]
    exact = 0.5 * (1 - math.sqrt(10.0 / 11.0))
    assert point.trials == ce_config.trials
    assert abs(point.ser - exact) <= 3 * point.std_error


def test_floor_config_stays_above_bound():
    """Test L < M keeps the SER above its floor at high SNR"""
    config = SystemConfig(n_antennas=2, psk_order=4, quant_levels=3, snr_grid_db=(40.0,),
                          trials=200_000, seed=5, min_errors=0)
    point = run_ser(config).points[0]
    assert point.ser + 3 * point.std_error >= 0.03125


def test_worker_count_does_not_change_results():
    """Test identical counts for one and several workers, early stop included"""
    config = SystemConfig(n_antennas=2, psk_order=4, quant_levels=5, snr_grid_db=(0.0, 20.0, 30.0),
                          trials=3 * BLOCK_SIZE + 123, seed=42, min_errors=200)
    serial = run_ser(config)
    parallel = run_ser(replace(config, workers=3))
    assert serial.points == parallel.points
    again = run_ser(config)
    assert again.points == serial.points


def test_early_stop_on_block_boundary(sample_config):
    """Test a high-error point stops after the first block"""
    config = replace(sample_config, snr_grid_db=(0.0,), trials=4 * BLOCK_SIZE)
    assert run_ser(config).points[0].trials == BLOCK_SIZE
    assert run_ser(replace(config, min_errors=0)).points[0].trials == 4 * BLOCK_SIZE


def test_too_few_trials(sample_config):
    """Test fewer than 1000 trials are rejected"""
    with pytest.raises(ConfigError):
        run_ser(replace(sample_config, trials=999))


def test_array_gain_ordering():
    """Test more antennas lower the SER in the CE limit at 10 dB"""
    points = []
    for n in (1, 2, 4):
        config = SystemConfig(n_antennas=n, psk_order=4, quant_levels=INFINITE, snr_grid_db=(10.0,),
                              trials=200_000, seed=8, min_errors=0)
        points.append(run_ser(config).points[0])
    for upper, lower in zip(points, points[1:]):
        assert lower.ser + lower.ci_half_width < upper.ser - upper.ci_half_width


def test_attach_bounds_columns(sample_config):
    """Test bound columns contain the simulated SER and follow the regime"""
    config = replace(sample_config, trials=200_000, min_errors=0)
    curve = attach_bounds(run_ser(config), alpha_samples=100_000)
    for point, bound in zip(curve.points, curve.bounds):
        tolerance = 3 * (point.std_error + 2 * bound.alpha_std_error)
        assert bound.lower <= point.ser + tolerance
        assert bound.upper >= point.ser - tolerance
        assert bound.up1 >= point.ser - 3 * point.std_error
        assert bound.lb1 <= point.ser + 3 * point.std_error
        assert bound.floor is None

    floor_config = replace(config, quant_levels=3, snr_grid_db=(30.0,))
    floored = attach_bounds(run_ser(floor_config), alpha_samples=10_000)
    bound = floored.bounds[0]
    assert bound.up1 is None and bound.lb1 is None
    assert bound.floor == pytest.approx(0.03125)
    assert bound.floor <= floored.points[0].ser + 3 * floored.points[0].std_error


def test_frame_round_trip(sample_config):
    """Test to_frame and from_frame reproduce the curve"""
    points = (SerPoint.from_counts(0.0, 65536, 12345), SerPoint.from_counts(10.0, 70000, 3))
    curve = SerCurve(config=sample_config, points=points)
    frame = curve.to_frame()
    assert list(frame.columns) == CSV_COLUMNS
    assert frame['bound_up1'].isna().all()
    assert SerCurve.from_frame(sample_config, frame) == curve
