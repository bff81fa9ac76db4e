"""
Test configuration and fixtures
"""
import pytest

from qce_diversity.channel.rng import RandomStream
from qce_diversity.core.model import INFINITE, SystemConfig
from qce_diversity.simulation.engine import SerCurve, SerPoint


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False,
                     help='run long Monte Carlo reproductions')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: long-running Monte Carlo reproduction')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def stream():
    """Fresh seeded random stream"""
    return RandomStream(master_seed=20240601, stream_id=7)


@pytest.fixture
def sample_config():
    """Small N=2, M=4, L=5 link"""
    return SystemConfig(
        n_antennas=2,
        psk_order=4,
        quant_levels=5,
        snr_grid_db=(0.0, 10.0, 20.0),
        trials=20_000,
        seed=1234,
    )


@pytest.fixture
def ce_config():
    """Single-antenna BPSK link without quantization"""
    return SystemConfig(
        n_antennas=1,
        psk_order=2,
        quant_levels=INFINITE,
        snr_grid_db=(10.0,),
        trials=200_000,
        seed=99,
        min_errors=0,
    )


@pytest.fixture
def synthetic_curve():
    """Curve whose SER falls exactly as rho^-2 over 0..30 dB"""
    grid = (0.0, 10.0, 20.0, 30.0)
    trials = 10 ** 9
    points = [
        SerPoint.from_counts(snr, trials, int(round(trials * 10 ** (-2 * snr / 10) * 0.5)))
        for snr in grid
    ]
    config = SystemConfig(
        n_antennas=2, psk_order=4, quant_levels=5, snr_grid_db=grid, trials=trials, seed=1,
    )
    return SerCurve(config=config, points=tuple(points))


@pytest.fixture
def sample_yaml(tmp_path):
    """Minimal valid configuration file"""
    path = tmp_path / 'experiment.yaml'
    path.write_text(
        "n: 2\n"
        "m: 4\n"
        "l: [3, 5, inf]\n"
        "snr_db: '0:10:20'\n"
        "trials: 5000\n"
        "seed: 7\n"
        f"out: {tmp_path / 'out'}\n"
        "alpha_samples: 10000\n"
    )
    return path
