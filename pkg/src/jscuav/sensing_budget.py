"""Mutual sensing interference, detection thresholds and maximum sensing range."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, log_ndtr

from .params import NetworkParams, sensing_noise_w

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def gaussian_q(x):
    """Gaussian tail probability Q(x) = P(N(0,1) > x)."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def gaussian_q_inv(p: float) -> float:
    """Inverse of :func:`gaussian_q` for ``0 < p < 1``.

    Newton iterations on ``log Q(x) - log p`` (well scaled even for p ~ 1e-300),
    falling back to bisection whenever a step leaves the current bracket.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must lie in (0, 1), got {p}")
    target = math.log(p)
    lo, hi = -40.0, 40.0
    x = 0.0
    for _ in range(200):
        logq = float(log_ndtr(-x))
        f = logq - target
        if f > 0:
            lo = x  # Q decreasing: root lies to the right
        else:
            hi = x
        slope = -math.exp(-0.5 * x * x - _LOG_SQRT_2PI - logq)
        step = f / slope
        x_new = x - step
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 1e-15 * (1.0 + abs(x)):
            return x_new
        x = x_new
    return x


def annulus_inverse_quartic_expectation(r_g: float, x_q: float, h: float) -> float:
    """E[(R^2 + 4h^2)^-2] for R the radius of a point uniform on the annulus r_g < R < x_q.

    Written as 1/((r_g^2+4h^2)(x_q^2+4h^2)), which equals the difference quotient
    of the reciprocals without its cancellation as x_q -> r_g.
    """
    if not 0.0 < r_g < x_q:
        raise ValueError(f"degenerate annulus: need 0 < r_g < x_q, got r_g={r_g}, x_q={x_q}")
    if h <= 0:
        raise ValueError("h must be > 0")
    return 1.0 / ((r_g**2 + 4 * h**2) * (x_q**2 + 4 * h**2))


def interference_coefficient(p: NetworkParams) -> float:
    """Per-SU interference scale P_r*lambda^2*sigma*g_ts*g_rs/(4 pi^3)."""
    return (p.sensing_power_w * p.wavelength_m**2 * p.mean_rcs_m2
            * p.tx_sense_gain * p.rx_sense_gain / (4 * math.pi**3))


def mutual_interference(p: NetworkParams, x_q: float, num_sus: int | None = None) -> float:
    """Mean sensing interference at the fusion UAV with each beam intersection at the
    SU-fusion midpoint (watts). This bounds the true mean only while x_q <= 2h."""
    m = p.num_sus if num_sus is None else num_sus
    e = annulus_inverse_quartic_expectation(p.guard_radius_m, x_q, p.altitude_m)
    if m == 0:
        return 0.0
    return m * interference_coefficient(p) * e


def min_sinr(alpha_f: float, alpha_d: float, g_p: float) -> float:
    """Smallest pre-integration SINR meeting both the false-alarm and detection targets."""
    for name, v in (("alpha_f", alpha_f), ("alpha_d", alpha_d)):
        if not 0.0 < v < 1.0:
            raise ValueError(f"{name} must lie in (0, 1), got {v}")
    if g_p < 1:
        raise ValueError("processing gain must be >= 1")
    return (gaussian_q_inv(alpha_f) - gaussian_q_inv(alpha_d)) ** 2 / g_p


def detection_probability(sinr, alpha_f: float, g_p: float):
    if np.any(np.asarray(sinr) < 0):
        raise ValueError("sinr must be >= 0")
    return gaussian_q(gaussian_q_inv(alpha_f) - np.sqrt(g_p * np.asarray(sinr, dtype=float)))


def _radar_numerator(p: NetworkParams) -> float:
    return (p.sensing_power_w * p.tx_sense_gain * p.rx_sense_gain * p.wavelength_m**2
            * p.mean_rcs_m2 * p.processing_gain / ((4 * math.pi) ** 3 * p.prop_loss))


def sensing_sinr_at_range(p: NetworkParams, r: float, i_sen: float) -> float:
    """Radar-equation echo SINR, including the coherent processing gain, at slant range ``r``.

    :func:`max_sensing_range` is the range at which this equals the required SINR.
    """
    return _radar_numerator(p) / (r**4 * (sensing_noise_w(p) + i_sen))


def max_sensing_range(p: NetworkParams, i_sen: float, sinr_req: float | None = None) -> float:
    if i_sen < 0:
        raise ValueError("i_sen must be >= 0")
    if p.sensing_power_ratio == 0.0:
        return 0.0
    if sinr_req is None:
        sinr_req = min_sinr(p.max_false_alarm, p.min_detection, p.processing_gain)
    return (_radar_numerator(p) / (sinr_req * (sensing_noise_w(p) + i_sen))) ** 0.25


@dataclass(frozen=True)
class SensingBudget:
    i_sen_w: float  # nan when the annulus is degenerate
    sinr_min: float
    r_max_m: float
    thermal_w: float
    annulus: tuple[float, float]

    @property
    def degenerate(self) -> bool:
        return math.isnan(self.i_sen_w)


def compute_budget(p: NetworkParams, x_q: float) -> SensingBudget:
    s = min_sinr(p.max_false_alarm, p.min_detection, p.processing_gain)
    thermal = sensing_noise_w(p)
    if x_q <= p.guard_radius_m:
        return SensingBudget(math.nan, s, math.nan, thermal, (p.guard_radius_m, x_q))
    i_sen = mutual_interference(p, x_q)
    return SensingBudget(i_sen, s, max_sensing_range(p, i_sen, s), thermal, (p.guard_radius_m, x_q))
