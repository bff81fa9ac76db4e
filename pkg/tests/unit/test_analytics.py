"""
Unit tests for closed-form and semi-analytic SEP results
"""
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from qce_diversity.channel.rng import RandomStream, draw_channel, draw_noise
from qce_diversity.core.model import INFINITE, PskConstellation, SystemConfig, nearest_psk_decode
from qce_diversity.exceptions import DomainError, InvalidArgumentError, InvalidSigmaError
from qce_diversity.theory.analytics import (
    MARGIN_DECOMPOSED,
    MARGIN_EXACT,
    c0_margin,
    closed_form_lower_LgtM,
    closed_form_upper_LgtM,
    craig_lower_LgtM,
    craig_upper_LgtM,
    mgf_chisq_norm,
    predicted_diversity,
    safety_margin,
    sep_bounds_semi_analytic,
    sep_bounds_semi_analytic_grid,
    sep_half_plane_bounds,
    sep_lower_single_antenna,
    sep_sandwich_fixed_beta,
    ser_floor_LltM,
)
from qce_diversity.theory.distributions import pdf_alpha_i
from qce_diversity.theory.qfunc import q_function


def make_config(n, m, l, **kwargs):
    return SystemConfig(n_antennas=n, psk_order=m, quant_levels=l, snr_grid_db=(0.0,),
                        trials=1000, seed=kwargs.pop('seed', 0), **kwargs)


def brute_force_sep(beta, m, sigma2, draws, seed):
    """Error rate of y = beta + n decoded against M-PSK when s_1 is sent"""
    noise = draw_noise(sigma2, RandomStream(seed), size=draws)
    errors = np.count_nonzero(nearest_psk_decode(beta + noise, PskConstellation(m)) != 0)
    p = errors / draws
    return p, math.sqrt(max(p * (1 - p), 1.0 / draws) / draws)


def test_safety_margin_examples():
    """Test the safety margin on real, boundary and generic gains"""
    assert safety_margin(1 + 0j, 4) == pytest.approx(1.0)
    assert safety_margin(1 + 1j, 4) == pytest.approx(0.0, abs=1e-15)
    assert safety_margin(0.8 - 0.2j, 8) == pytest.approx(0.8 - 0.2 / math.tan(math.pi / 8), abs=1e-12)
    assert safety_margin(0.8 - 0.2j, 8) == pytest.approx(0.31716, abs=1e-5)


def test_safety_margin_below_magnitude():
    """Test alpha <= |beta| for random gains"""
    rng = np.random.default_rng(8)
    beta = rng.normal(size=1000) + 1j * rng.normal(size=1000)
    for m in (2, 4, 8, 16):
        assert np.all(safety_margin(beta, m) <= np.abs(beta) + 1e-12)


def test_sandwich_zero_margin():
    """Test alpha = 0 gives bounds 0.5 and 1"""
    bounds = sep_sandwich_fixed_beta(1 + 1j, 4, 0.3)
    assert bounds.lower == pytest.approx(0.5)
    assert bounds.upper == pytest.approx(1.0)
    assert bounds.upper_raw == pytest.approx(1.0)


def test_sandwich_structure_and_monotonicity():
    """Test upper_raw = 2 lower and monotone decay in alpha and rho"""
    beta = np.linspace(0.1, 3.0, 30).astype(complex)
    bounds = sep_sandwich_fixed_beta(beta, 8, 0.5)
    assert np.array_equal(bounds.upper_raw, 2 * bounds.lower)
    assert np.all(np.diff(bounds.lower) <= 0)
    sigmas = [1.0, 0.5, 0.1, 0.01]
    lowers = [sep_sandwich_fixed_beta(0.7 + 0.1j, 8, s).lower for s in sigmas]
    assert all(b <= a for a, b in zip(lowers, lowers[1:]))


def test_sandwich_real_beta_reduction():
    """Test real gains reduce to the classical PSK bound"""
    bounds = sep_sandwich_fixed_beta(1.3, 4, 0.2)
    assert bounds.lower == pytest.approx(q_function(math.sqrt(2) * math.sin(math.pi / 4) * 1.3 / math.sqrt(0.2)))


def test_sandwich_invalid_sigma():
    """Test non-positive noise variance is rejected"""
    with pytest.raises(InvalidSigmaError):
        sep_sandwich_fixed_beta(1.0, 4, 0.0)


@pytest.mark.parametrize("beta,m,sigma2", [
    (1.0 + 0j, 2, 1.0),
    (0.5 + 0.3j, 8, 0.04),
    (0.9 - 0.1j, 4, 0.3),
])
def test_sandwich_contains_brute_force(beta, m, sigma2):
    """Test simulated fixed-gain SEP lies inside the sandwich"""
    sep, se = brute_force_sep(beta, m, sigma2, 1_000_000, seed=17)
    bounds = sep_sandwich_fixed_beta(beta, m, sigma2)
    assert bounds.lower - 3 * se <= sep <= bounds.upper + 3 * se
    half = sep_half_plane_bounds(beta, m, sigma2)
    assert half.lower - 3 * se <= sep <= half.upper + 3 * se


def test_half_plane_bounds_tighter():
    """Test the half-plane bounds sit inside the safety-margin sandwich"""
    rng = np.random.default_rng(21)
    beta = rng.uniform(0, 2, 200) + 1j * rng.uniform(-1, 1, 200)
    for m in (4, 8):
        outer = sep_sandwich_fixed_beta(beta, m, 0.5)
        inner = sep_half_plane_bounds(beta, m, 0.5)
        assert np.all(outer.lower <= inner.lower + 1e-15)
        assert np.all(inner.upper_raw <= outer.upper_raw + 1e-15)


def test_semi_analytic_ce_limit_matches_quadrature():
    """Test the alpha-sampled bound for N = 1, L = inf against Rayleigh quadrature"""
    config = make_config(1, 4, INFINITE)
    bounds = sep_bounds_semi_analytic(config, 10.0, 200_000, RandomStream(3))
    rho = 10.0
    scale = math.sqrt(2) * math.sin(math.pi / 4) * math.sqrt(rho)
    exact, _ = integrate.quad(lambda x: q_function(scale * x) * 2 * x * math.exp(-x * x), 0, np.inf)
    assert abs(bounds.lower - exact) <= 3 * bounds.std_error
    assert bounds.upper_raw == pytest.approx(2 * bounds.lower)
    assert sep_lower_single_antenna(4, INFINITE, 10.0) == pytest.approx(exact, rel=1e-8)


def test_semi_analytic_matches_closed_form_alpha_pdf():
    """Test N = 1, L = M = 4 against quadrature over the alpha_i density"""
    config = make_config(1, 4, 4)
    bounds = sep_bounds_semi_analytic(config, 5.0, 200_000, RandomStream(4))
    scale = math.sqrt(2) * math.sin(math.pi / 4) * math.sqrt(10 ** 0.5)
    exact, _ = integrate.quad(lambda x: q_function(scale * x) * pdf_alpha_i(x, 4), 0, np.inf)
    assert abs(bounds.lower - exact) <= 3 * bounds.std_error
    assert sep_lower_single_antenna(4, 4, 5.0) == pytest.approx(exact, rel=1e-6)


def test_semi_analytic_floor_at_high_snr():
    """Test L < M keeps the averaged bound above (1 - L/M)/2"""
    config = make_config(1, 4, 2)
    bounds = sep_bounds_semi_analytic(config, 60.0, 100_000, RandomStream(5))
    assert bounds.lower >= 0.5 * (1 - 2 / 4) * (1 - 1e-3)


def test_semi_analytic_grid_shares_samples():
    """Test the grid variant equals single-SNR calls on the same stream"""
    config = make_config(2, 4, 5)
    grid = sep_bounds_semi_analytic_grid(config, [0.0, 10.0], 20_000, RandomStream(6))
    single = sep_bounds_semi_analytic(config, 10.0, 20_000, RandomStream(6))
    assert grid[1] == single
    assert grid[0].lower > grid[1].lower


def test_semi_analytic_sample_count():
    """Test fewer than 10^4 samples are rejected"""
    with pytest.raises(InvalidArgumentError):
        sep_bounds_semi_analytic(make_config(1, 4, 4), 0.0, 999, RandomStream(1))


def test_c0_margin():
    """Test c0 for L = 8, M = 4 and the CE limit"""
    assert c0_margin(4, 8) == pytest.approx(0.54120, abs=1e-5)
    assert c0_margin(4, INFINITE) == 1.0
    assert 0 < c0_margin(8, 9) <= 1


def test_closed_form_upper():
    """Test up1 at zero SNR and its Chernoff domination of the semi-analytic upper bound"""
    config = make_config(2, 4, 5)
    assert closed_form_upper_LgtM(config, -np.inf) == pytest.approx(1.0)
    grid = [0.0, 10.0, 20.0, 30.0]
    semi = sep_bounds_semi_analytic_grid(config, grid, 100_000, RandomStream(9))
    for snr_db, bounds in zip(grid, semi):
        assert closed_form_upper_LgtM(config, snr_db) >= bounds.upper_raw - 3 * 2 * bounds.std_error


def test_closed_form_lower():
    """Test lb1 at zero SNR and its high-SNR decay"""
    assert closed_form_lower_LgtM(make_config(1, 4, 5), -np.inf) == pytest.approx(0.23033, abs=1e-5)
    config = make_config(2, 4, 5)
    ratio = closed_form_lower_LgtM(config, 30.0) / closed_form_lower_LgtM(config, 40.0)
    assert ratio == pytest.approx(100.0, rel=0.01)


def test_craig_forms_between_closed_forms():
    """Test lb1 <= Craig lower and Craig upper <= up1"""
    for config in (make_config(2, 4, 5), make_config(4, 8, 9), make_config(3, 4, INFINITE)):
        for snr_db in (0.0, 10.0, 20.0, 40.0):
            assert closed_form_lower_LgtM(config, snr_db) <= craig_lower_LgtM(config, snr_db)
            assert craig_upper_LgtM(config, snr_db) <= closed_form_upper_LgtM(config, snr_db)


def test_closed_forms_domain():
    """Test L <= M is outside the closed-form regime"""
    for l in (3, 4):
        config = make_config(2, 4, l)
        with pytest.raises(DomainError):
            closed_form_upper_LgtM(config, 10.0)
        with pytest.raises(DomainError):
            closed_form_lower_LgtM(config, 10.0)
        with pytest.raises(DomainError):
            craig_upper_LgtM(config, 10.0)


def test_ser_floor():
    """Test the floor arithmetic and its domain"""
    assert ser_floor_LltM(make_config(2, 4, 3)) == pytest.approx(0.03125)
    assert ser_floor_LltM(make_config(2, 4, 2)) == pytest.approx(0.125)
    assert ser_floor_LltM(make_config(4, 8, 7)) == pytest.approx(0.5 / 8 ** 4)
    with pytest.raises(DomainError):
        ser_floor_LltM(make_config(2, 4, 4))


def test_mgf_values():
    """Test closed-form MGF values and its domain"""
    assert mgf_chisq_norm(0.0, 3) == 1.0
    assert mgf_chisq_norm(-1.0, 2) == pytest.approx(0.25)
    with pytest.raises(DomainError):
        mgf_chisq_norm(1.0, 2)


@pytest.mark.parametrize("t,n", [(-0.5, 1), (-0.5, 3), (-1.0, 1), (-1.0, 3)])
def test_mgf_monte_carlo(t, n):
    """Test the MGF against channel draws"""
    h = draw_channel(n, RandomStream(31, n), size=1_000_000)
    samples = np.exp(t * np.sum(np.abs(h) ** 2, axis=-1))
    se = samples.std(ddof=1) / math.sqrt(samples.size)
    assert abs(samples.mean() - mgf_chisq_norm(t, n)) <= 3 * se


def test_predicted_diversity():
    """Test full, half and zero diversity orders"""
    assert predicted_diversity(make_config(2, 4, 5)) == 2
    assert predicted_diversity(make_config(4, 8, 8)) == 2
    assert predicted_diversity(make_config(3, 8, 4)) == 0
    assert predicted_diversity(make_config(3, 4, 4)) == Fraction(3, 2)
    assert predicted_diversity(make_config(3, 4, INFINITE)) == 3


def test_single_antenna_bpsk_closed_form():
    """Test the exact BPSK SEP with unquantized MF"""
    rho = 10.0
    expected = 0.5 * (1 - math.sqrt(rho / (1 + rho)))
    assert sep_lower_single_antenna(2, INFINITE, 10.0) == pytest.approx(expected, rel=1e-12)
    assert sep_lower_single_antenna(2, 64, 10.0) >= expected


def test_exact_margin_variant():
    """Test the exact-margin average never exceeds the decomposed one and agrees for N = 1"""
    config = make_config(3, 4, 5)
    decomposed = sep_bounds_semi_analytic(config, 10.0, 50_000, RandomStream(14))
    exact = sep_bounds_semi_analytic(config, 10.0, 50_000, RandomStream(14), margin=MARGIN_EXACT)
    assert exact.lower <= decomposed.lower

    single = make_config(1, 8, 6)
    a = sep_bounds_semi_analytic(single, 10.0, 20_000, RandomStream(15), margin=MARGIN_DECOMPOSED)
    b = sep_bounds_semi_analytic(single, 10.0, 20_000, RandomStream(15), margin=MARGIN_EXACT)
    assert b.lower == pytest.approx(a.lower, rel=1e-10)

    with pytest.raises(InvalidArgumentError):
        sep_bounds_semi_analytic(single, 10.0, 20_000, RandomStream(15), margin='loose')
