"""
Closed-form and semi-analytic SEP results for the quantized MF link

Covers the safety margin, the fixed-gain SEP sandwich, its average over the
random gain, the L > M closed forms, the L < M error floor and the predicted
diversity order.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np
from scipy import integrate

from qce_diversity.channel.rng import RandomStream, snr_db_to_sigma2
from qce_diversity.core.model import SystemConfig, is_infinite
from qce_diversity.exceptions import DomainError, InvalidArgumentError, InvalidSigmaError
from qce_diversity.theory.distributions import sample_alpha, sample_beta
from qce_diversity.theory.qfunc import DEFAULT_PANELS, craig_nodes, q_function

MIN_ALPHA_SAMPLES = 10_000

MARGIN_DECOMPOSED = "decomposed"
MARGIN_EXACT = "exact"


@dataclass(frozen=True)
class SepBounds:
    """
    Lower/upper SEP bounds; ``upper`` is clipped to 1, ``upper_raw`` is not.

    ``std_error`` is set when the bounds are Monte Carlo estimates.
    """

    lower: float
    upper: float
    upper_raw: float
    std_error: Optional[float] = None


def _output(values):
    return float(values) if np.ndim(values) == 0 else values


def _cot(m: int) -> float:
    return math.cos(math.pi / m) / math.sin(math.pi / m)


def _check_order(m: int):
    if m < 2:
        raise InvalidArgumentError(f"PSK order must be >= 2, got {m}")


def _check_sigma2(sigma2: float):
    if not (math.isfinite(sigma2) and sigma2 > 0):
        raise InvalidSigmaError(f"noise variance must be positive and finite, got {sigma2}")


def _rho(config: SystemConfig, snr_db):
    """Transmit-power-scaled SNR P_T * rho"""
    return config.total_power / snr_db_to_sigma2(snr_db)


def safety_margin(beta, m: int):
    """alpha = Re(beta) - |Im(beta)| cot(pi/M): distance to the nearest decision boundary"""
    _check_order(m)
    beta = np.asarray(beta, dtype=complex)
    return _output(beta.real - np.abs(beta.imag) * _cot(m))


def _argument_scale(m: int, sigma2: float) -> float:
    return math.sqrt(2.0) * math.sin(math.pi / m) / math.sqrt(sigma2)


def _bounds(lower, upper_raw) -> SepBounds:
    return SepBounds(lower=_output(lower), upper=_output(np.minimum(1.0, upper_raw)),
                     upper_raw=_output(upper_raw))


def sep_sandwich_fixed_beta(beta, m: int, sigma2: float) -> SepBounds:
    """Q(sqrt(2) sin(pi/M) alpha / sigma) <= SEP <= 2 Q(...) for y = beta s + n"""
    _check_order(m)
    _check_sigma2(sigma2)
    lower = np.asarray(q_function(_argument_scale(m, sigma2) * np.asarray(safety_margin(beta, m))))
    return _bounds(lower, 2.0 * lower)


def sep_half_plane_bounds(beta, m: int, sigma2: float) -> SepBounds:
    """
    Bounds from the two half-planes bordering the decision sector of s_1.

    With P+ and P- the probabilities of crossing either boundary,
    max(P+, P-) <= SEP <= P+ + P-. These are never looser than the
    safety-margin sandwich.
    """
    _check_order(m)
    _check_sigma2(sigma2)
    beta = np.asarray(beta, dtype=complex)
    scale = _argument_scale(m, sigma2)
    p_plus = q_function(scale * (beta.real - _cot(m) * beta.imag))
    p_minus = q_function(scale * (beta.real + _cot(m) * beta.imag))
    return _bounds(np.maximum(p_plus, p_minus), np.add(p_plus, p_minus))


def sep_bounds_semi_analytic_grid(config: SystemConfig, snr_grid_db: Sequence[float],
                                  alpha_samples: int, stream: RandomStream,
                                  margin: str = MARGIN_DECOMPOSED) -> List[SepBounds]:
    """
    E_alpha[Q(sqrt(2) sin(pi/M) alpha / sigma)] and twice that, for every SNR.

    One set of alpha samples is shared by the whole grid. With ``margin`` set to
    MARGIN_DECOMPOSED alpha is sqrt(P_T/N) sum_i |h_i| v_i; MARGIN_EXACT uses the
    safety margin of the sampled gain beta instead, which is never smaller, so
    its lower bound holds for every N.
    """
    if alpha_samples < MIN_ALPHA_SAMPLES:
        raise InvalidArgumentError(f"alpha_samples must be >= {MIN_ALPHA_SAMPLES}, got {alpha_samples}")
    if margin == MARGIN_DECOMPOSED:
        alpha = sample_alpha(config, stream, size=alpha_samples)
    elif margin == MARGIN_EXACT:
        alpha = np.asarray(safety_margin(sample_beta(config, stream, size=alpha_samples), config.psk_order))
    else:
        raise InvalidArgumentError(f"unknown margin {margin!r}")

    results = []
    for snr_db in snr_grid_db:
        sigma2 = float(snr_db_to_sigma2(snr_db))
        q = np.asarray(q_function(_argument_scale(config.psk_order, sigma2) * alpha))
        estimate = float(q.mean())
        std_error = float(q.std(ddof=1) / math.sqrt(q.size))
        results.append(SepBounds(lower=estimate, upper=min(1.0, 2.0 * estimate),
                                 upper_raw=2.0 * estimate, std_error=std_error))
    return results


def sep_bounds_semi_analytic(config: SystemConfig, snr_db: float, alpha_samples: int,
                             stream: RandomStream, margin: str = MARGIN_DECOMPOSED) -> SepBounds:
    """Monte Carlo estimate of the averaged SEP sandwich at a single SNR"""
    return sep_bounds_semi_analytic_grid(config, [snr_db], alpha_samples, stream, margin)[0]


def c0_margin(m: int, l) -> float:
    """c0 = cos(pi/L) - sin(pi/L) cot(pi/M): worst-case per-antenna margin factor"""
    _check_order(m)
    if is_infinite(l):
        return 1.0
    return math.cos(math.pi / l) - math.sin(math.pi / l) * _cot(m)


def _require_full_diversity(config: SystemConfig):
    if not (config.is_ce_limit or config.quant_levels > config.psk_order):
        raise DomainError(
            f"bound requires L > M, got L={config.quant_levels}, M={config.psk_order}"
        )


def closed_form_upper_LgtM(config: SystemConfig, snr_db):
    """(1 + sin^2(pi/M) c0^2 rho / N)^(-N), valid for L > M"""
    _require_full_diversity(config)
    n = config.n_antennas
    c0 = c0_margin(config.psk_order, config.quant_levels)
    s2 = math.sin(math.pi / config.psk_order) ** 2
    return _output((1.0 + s2 * c0 ** 2 * _rho(config, snr_db) / n) ** (-n))


def closed_form_lower_LgtM(config: SystemConfig, snr_db):
    """(1 / (2 sqrt(pi (N + 1/2)))) (1 + sin^2(pi/M) rho)^(-N), valid for L > M"""
    _require_full_diversity(config)
    n = config.n_antennas
    s2 = math.sin(math.pi / config.psk_order) ** 2
    prefactor = 1.0 / (2.0 * math.sqrt(math.pi * (n + 0.5)))
    return _output(prefactor * (1.0 + s2 * _rho(config, snr_db)) ** (-n))


def _craig_mgf(gain, n: int, panels: int):
    theta, weights = craig_nodes(panels)
    gain = np.asarray(gain, dtype=float)
    integrand = (1.0 + gain[..., None] / np.sin(theta) ** 2) ** (-n)
    return np.sum(weights * integrand, axis=-1) / np.pi


def craig_upper_LgtM(config: SystemConfig, snr_db, panels: int = DEFAULT_PANELS):
    """(2/pi) int_0^{pi/2} (1 + sin^2(pi/M) c0^2 rho / (N sin^2 t))^(-N) dt; tighter than the closed form"""
    _require_full_diversity(config)
    n = config.n_antennas
    c0 = c0_margin(config.psk_order, config.quant_levels)
    s2 = math.sin(math.pi / config.psk_order) ** 2
    return _output(2.0 * _craig_mgf(s2 * c0 ** 2 * _rho(config, snr_db) / n, n, panels))


def craig_lower_LgtM(config: SystemConfig, snr_db, panels: int = DEFAULT_PANELS):
    """(1/pi) int_0^{pi/2} (1 + sin^2(pi/M) rho / sin^2 t)^(-N) dt"""
    _require_full_diversity(config)
    n = config.n_antennas
    s2 = math.sin(math.pi / config.psk_order) ** 2
    return _output(_craig_mgf(s2 * _rho(config, snr_db), n, panels))


def ser_floor_LltM(config: SystemConfig) -> float:
    """0.5 (1 - L/M)^N: SER lower bound at every SNR when L < M"""
    if config.is_ce_limit or config.quant_levels >= config.psk_order:
        raise DomainError(
            f"error floor exists only for L < M, got L={config.quant_levels}, M={config.psk_order}"
        )
    return 0.5 * (1.0 - config.quant_levels / config.psk_order) ** config.n_antennas


def mgf_chisq_norm(t, n: int):
    """E[exp(t ||h||^2)] = (1 - t)^(-N) for h ~ CN(0, I_N)"""
    t = np.asarray(t, dtype=float)
    if np.any(t >= 1):
        raise DomainError("MGF of ||h||^2 is finite only for t < 1")
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    return _output((1.0 - t) ** (-n))


def predicted_diversity(config: SystemConfig) -> Fraction:
    """N for L > M, N/2 for L = M, 0 for L < M"""
    n = config.n_antennas
    if config.is_ce_limit or config.quant_levels > config.psk_order:
        return Fraction(n)
    if config.quant_levels == config.psk_order:
        return Fraction(n, 2)
    return Fraction(0)


def diversity_regime(config: SystemConfig) -> str:
    if config.is_ce_limit or config.quant_levels > config.psk_order:
        return "full"
    if config.quant_levels == config.psk_order:
        return "half"
    return "zero"


def rayleigh_mean_q(a):
    """E[Q(a |h|)] for h ~ CN(0, 1): (1 - a / sqrt(2 + a^2)) / 2, any real a"""
    a = np.asarray(a, dtype=float)
    return _output(0.5 * (1.0 - a / np.sqrt(2.0 + a ** 2)))


def sep_lower_single_antenna(m: int, l, snr_db, total_power: float = 1.0):
    """
    Exact E_alpha[Q(sqrt(2) sin(pi/M) alpha sqrt(rho))] for N = 1.

    Averages the Rayleigh closed form over the uniform quantization angle; for
    M = 2 this is the exact SEP of the link.
    """
    _check_order(m)
    scale = math.sqrt(2.0) * math.sin(math.pi / m)
    sqrt_rho = np.sqrt(total_power / snr_db_to_sigma2(snr_db))
    if is_infinite(l):
        return rayleigh_mean_q(scale * sqrt_rho)

    s = math.sin(math.pi / m)
    lo, hi = math.pi / m - math.pi / l, math.pi / m

    def average(root_rho: float) -> float:
        value, _ = integrate.quad(
            lambda u: rayleigh_mean_q(scale * root_rho * math.sin(u) / s),
            lo, hi, epsabs=1e-13, epsrel=1e-11, limit=200,
        )
        return value / (hi - lo)

    values = np.vectorize(average, otypes=[float])(sqrt_rho)
    return _output(values)
