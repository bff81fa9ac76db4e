"""
Distributions of the per-antenna quantization gain v_i and of alpha_i = |h_i| v_i

With theta uniform on [-pi/L, pi/L], v = sin(pi/M - |theta|) / sin(pi/M), so
v = sin(u) / sin(pi/M) with u uniform on [pi/M - pi/L, pi/M]. All densities
and distribution functions below follow from that representation.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate

from qce_diversity.channel.rng import RandomStream, draw_channel
from qce_diversity.core.model import SystemConfig, is_infinite
from qce_diversity.exceptions import DegenerateDistributionError, InvalidArgumentError
from qce_diversity.theory.qfunc import q_function

_QUAD_OPTIONS = dict(epsabs=1e-13, epsrel=1e-11, limit=200)


def _output(values):
    return float(values) if np.ndim(values) == 0 else values


def _check(m: int, l=None):
    if m < 2:
        raise InvalidArgumentError(f"PSK order must be >= 2, got {m}")
    if l is not None and not is_infinite(l) and l < 1:
        raise InvalidArgumentError(f"quantization levels must be >= 1, got {l}")


def _angle_range(m: int, l):
    """Range [a, b] of u = pi/M - |theta|"""
    return math.pi / m - math.pi / l, math.pi / m


def v_support(m: int, l):
    """(min, max) of v; min is negative when L < M"""
    _check(m, l)
    if is_infinite(l):
        return 1.0, 1.0
    a, _ = _angle_range(m, l)
    lowest = -1.0 if a < -math.pi / 2 else math.sin(a)
    return lowest / math.sin(math.pi / m), 1.0


def pdf_v(x, m: int, l):
    """
    Density of v_i: L sin(pi/M) / (pi sqrt(1 - sin^2(pi/M) x^2)) on its support.

    For L = 1 the angle range passes -pi/2 and the part of the support below
    -1 is covered twice, which doubles the density there.
    """
    _check(m, l)
    if is_infinite(l):
        raise DegenerateDistributionError("v is the point mass at 1 when L is infinite")
    s = math.sin(math.pi / m)
    x = np.asarray(x, dtype=float)
    lower, upper = v_support(m, l)
    y = s * x
    inside = (x >= lower) & (x <= upper)
    multiplicity = inside.astype(float)
    a, _ = _angle_range(m, l)
    if a < -math.pi / 2:
        multiplicity = multiplicity + (inside & (x < -1.0))
    with np.errstate(divide='ignore', invalid='ignore'):
        density = l * s / (math.pi * np.sqrt(1.0 - np.minimum(y * y, 1.0)))
        density = np.where(inside, density * multiplicity, 0.0)
    return _output(density)


def cdf_v(x, m: int, l):
    """P(v_i <= x); for L <= M, cdf_v(0) = 1 - L/M"""
    _check(m, l)
    x = np.asarray(x, dtype=float)
    if is_infinite(l):
        return _output((x >= 1.0).astype(float))
    a, b = _angle_range(m, l)
    y = np.clip(math.sin(math.pi / m) * x, -1.0, 1.0)
    arcsin_y = np.arcsin(y)
    measure = np.minimum(b, arcsin_y) - np.maximum(a, -math.pi - arcsin_y)
    cdf = np.clip(l * np.maximum(measure, 0.0) / math.pi, 0.0, 1.0)
    cdf = np.where(x >= 1.0, 1.0, cdf)
    return _output(cdf)


def pdf_rayleigh(x):
    """Density 2x exp(-x^2) of |h_i| for h_i ~ CN(0, 1)"""
    x = np.asarray(x, dtype=float)
    return _output(np.where(x >= 0, 2.0 * x * np.exp(-x * x), 0.0))


def pdf_alpha_i(x, m: int):
    """
    Closed-form density of alpha_i when L = M:
    (2M sin(pi/M) / sqrt(pi)) exp(-sin^2(pi/M) x^2) Q(sqrt(2) cos(pi/M) x) for x >= 0.
    """
    _check(m)
    s, c = math.sin(math.pi / m), math.cos(math.pi / m)
    x = np.asarray(x, dtype=float)
    xp = np.maximum(x, 0.0)
    density = 2.0 * m * s / math.sqrt(math.pi) * np.exp(-(s * xp) ** 2) * q_function(math.sqrt(2.0) * c * xp)
    return _output(np.where(x >= 0, density, 0.0))


def _tail_integral(xi: float, s: float, lo: float, hi: float) -> float:
    """int_lo^hi exp(-x^2 s^2 / sin^2 u) du"""
    if hi <= lo:
        return 0.0

    def integrand(u: float) -> float:
        sin_u = math.sin(u)
        if sin_u == 0.0:
            return 0.0 if xi != 0.0 else 1.0
        return math.exp(-(xi * s / sin_u) ** 2)

    value, _ = integrate.quad(integrand, lo, hi, **_QUAD_OPTIONS)
    return value


def cdf_alpha_i(x, m: int, l):
    """
    P(alpha_i <= x) for any L, conditioning on v_i:
    1 - E[exp(-x^2/v^2); v > 0] for x >= 0 and E[exp(-x^2/v^2); v < 0] for x < 0.
    """
    _check(m, l)
    x = np.asarray(x, dtype=float)
    if is_infinite(l):
        return _output(np.where(x >= 0, 1.0 - np.exp(-x * x), 0.0))
    s = math.sin(math.pi / m)
    a, b = _angle_range(m, l)

    def cdf_one(xi: float) -> float:
        if xi >= 0:
            return 1.0 - l / math.pi * _tail_integral(xi, s, max(a, 0.0), b)
        return l / math.pi * _tail_integral(xi, s, a, min(0.0, b))

    return _output(np.vectorize(cdf_one, otypes=[float])(x))


def pdf_alpha_i_product(x, m: int, l):
    """
    Density of alpha_i for any L by the product rule p(x) = E_v[p_|h|(x/v) / |v|].

    Matches pdf_alpha_i when L = M. At x = 0 the right-hand limit is returned.
    """
    _check(m, l)
    x = np.asarray(x, dtype=float)
    if is_infinite(l):
        return pdf_rayleigh(x)
    s = math.sin(math.pi / m)
    a, b = _angle_range(m, l)

    def pdf_one(xi: float) -> float:
        if xi == 0.0:
            return l * s / math.sqrt(math.pi) if a <= 0 else 0.0
        lo, hi = (max(a, 0.0), b) if xi > 0 else (a, min(0.0, b))
        if hi <= lo:
            return 0.0
        scale = abs(xi) * s

        def integrand(u: float) -> float:
            sin2 = math.sin(u) ** 2
            if sin2 == 0.0:
                return 0.0
            return 2.0 * scale * s / sin2 * math.exp(-scale * scale / sin2)

        # the integrand peaks where |sin u| is close to |x| sin(pi/M)
        peak = math.copysign(math.asin(min(scale, 1.0)), xi)
        points = [peak] if lo < peak < hi else None
        value, _ = integrate.quad(integrand, lo, hi, points=points, **_QUAD_OPTIONS)
        return l / math.pi * value

    return _output(np.vectorize(pdf_one, otypes=[float])(x))


def pdf_alpha_bound(x, m: int, n: int):
    """Constant bound M^N sin(pi/M) / sqrt(pi) on the density of alpha for L = M, x >= 0"""
    _check(m)
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise InvalidArgumentError("density bound is stated for x >= 0")
    bound = float(m) ** n * math.sin(math.pi / m) / math.sqrt(math.pi)
    return _output(np.full(x.shape, bound))


def pdf_partial_sum_bound(x, m: int, n_terms: int):
    """(M^n sin(pi/M) / sqrt(n pi)) exp(-sin^2(pi/M) x^2 / n) bounds the density of alpha_1 + ... + alpha_n"""
    _check(m)
    if n_terms < 1:
        raise InvalidArgumentError(f"n_terms must be >= 1, got {n_terms}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise InvalidArgumentError("density bound is stated for x >= 0")
    s = math.sin(math.pi / m)
    prefactor = float(m) ** n_terms * s / math.sqrt(n_terms * math.pi)
    return _output(prefactor * np.exp(-(s * x) ** 2 / n_terms))


@dataclass(frozen=True)
class QuantGainSample:
    """Per-antenna draws: gain factor v, alpha_i = |h_i| v and quantization angle theta"""

    v: np.ndarray
    alpha_i: np.ndarray
    theta: np.ndarray


def v_from_theta(theta, m: int):
    """v = sin(pi/M - |theta|) / sin(pi/M) = cos(theta) - |sin(theta)| cot(pi/M)"""
    _check(m)
    theta = np.asarray(theta, dtype=float)
    return _output(np.sin(math.pi / m - np.abs(theta)) / math.sin(math.pi / m))


def sample_theta(l, stream: RandomStream, size=None):
    """Quantization angles uniform on [-pi/L, pi/L]; identically 0 when L is infinite"""
    if is_infinite(l):
        return 0.0 if size is None else np.zeros(size)
    if l < 1:
        raise InvalidArgumentError(f"quantization levels must be >= 1, got {l}")
    return stream.uniform(-math.pi / l, math.pi / l, size=size)


def sample_v(m: int, l, stream: RandomStream, size: Optional[int] = None):
    _check(m, l)
    return v_from_theta(sample_theta(l, stream, size), m)


def sample_quant_gain(m: int, l, stream: RandomStream, size: int) -> QuantGainSample:
    """Draw |h_i| from the channel first, then theta_i, for ``size`` antennas"""
    _check(m, l)
    h = draw_channel(1, stream, size=size)[:, 0]
    theta = np.asarray(sample_theta(l, stream, size), dtype=float)
    v = np.asarray(v_from_theta(theta, m))
    return QuantGainSample(v=v, alpha_i=np.abs(h) * v, theta=theta)


def _draw_gains(config: SystemConfig, stream: RandomStream, count: int):
    n = config.n_antennas
    h = draw_channel(n, stream, size=count)
    theta = np.asarray(sample_theta(config.quant_levels, stream, (count, n)), dtype=float)
    return np.abs(h), theta


def sample_alpha(config: SystemConfig, stream: RandomStream, size: Optional[int] = None):
    """
    Decomposed safety margin alpha = sqrt(P_T/N) sum_i |h_i| v_i.

    A fresh channel is drawn for each sample, then the quantization angles.
    This never exceeds the safety margin of the corresponding gain beta.
    """
    count = 1 if size is None else int(size)
    magnitude, theta = _draw_gains(config, stream, count)
    v = np.asarray(v_from_theta(theta, config.psk_order))
    alpha = math.sqrt(config.total_power / config.n_antennas) * np.sum(magnitude * v, axis=-1)
    return float(alpha[0]) if size is None else alpha


def sample_beta(config: SystemConfig, stream: RandomStream, size: Optional[int] = None):
    """Effective gain beta = sqrt(P_T/N) sum_i |h_i| exp(j theta_i), same draw order as sample_alpha"""
    count = 1 if size is None else int(size)
    magnitude, theta = _draw_gains(config, stream, count)
    beta = math.sqrt(config.total_power / config.n_antennas) * np.sum(magnitude * np.exp(1j * theta), axis=-1)
    return complex(beta[0]) if size is None else beta
