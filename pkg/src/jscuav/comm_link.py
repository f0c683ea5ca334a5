"""Rician-fading communication link: Marcum Q, STP, outage capacity and cooperative range."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .params import NetworkParams

# ---------------------------------------------------------------------------
# special functions


def bessel_i0e(x):
    """Exponentially scaled modified Bessel function exp(-|x|) * I0(x).

    Power series below 20, Hankel asymptotic expansion above.
    """
    x = np.abs(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    small = x <= 20.0
    xs = x[small]
    if xs.size:
        q = xs * xs / 4.0
        term = np.ones_like(xs)
        total = np.ones_like(xs)
        for k in range(1, 80):
            term = term * q / (k * k)
            total += term
        out[small] = total * np.exp(-xs)
    xl = x[~small]
    if xl.size:
        term = np.ones_like(xl)
        total = np.ones_like(xl)
        for k in range(1, 30):
            term = term * (2 * k - 1) ** 2 / (8.0 * k * xl)
            total += term
        out[~small] = total / np.sqrt(2 * math.pi * xl)
    return out if out.ndim else float(out)


def bessel_i0(x):
    x = np.asarray(x, dtype=float)
    return bessel_i0e(x) * np.exp(np.abs(x))


def _poisson_logpmf(k: np.ndarray, mu: float) -> np.ndarray:
    if mu == 0.0:
        return np.where(k == 0, 0.0, -np.inf)
    return k * math.log(mu) - mu - gammaln(k + 1.0)


def marcum_q1(a: float, b: float) -> float:
    """First-order Marcum Q-function Q1(a, b).

    Uses the Poisson mixture of the noncentral chi-square tail:
    Q1(a, b) = sum_n Pois(n; a^2/2) * P(Pois(b^2/2) <= n).
    """
    if not (a >= 0 and b >= 0 and math.isfinite(a) and math.isfinite(b)):
        raise ValueError(f"marcum_q1 needs finite nonnegative arguments, got ({a}, {b})")
    if b == 0.0:
        return 1.0
    if a == 0.0:
        return math.exp(-0.5 * b * b)
    lam, mu = 0.5 * a * a, 0.5 * b * b
    spread = 40.0 * math.sqrt(lam) + 40.0
    n_lo = max(0, int(lam - spread))
    n_hi = int(lam + spread) + 1
    k = np.arange(n_hi + 1, dtype=float)
    cdf = np.minimum(np.cumsum(np.exp(_poisson_logpmf(k, mu))), 1.0)
    n = k[n_lo:]
    weights = np.exp(_poisson_logpmf(n, lam))
    return float(min(1.0, np.dot(weights, cdf[n_lo:])))


@functools.lru_cache(maxsize=4096)
def marcum_q1_inverse(a: float, p: float) -> float:
    """Return b with Q1(a, b) = p, by bisection."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if a == 0.0:
        return math.sqrt(-2.0 * math.log(p))
    lo, hi = 0.0, a + 40.0
    while marcum_q1(a, hi) > p:
        lo, hi = hi, 2.0 * hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if marcum_q1(a, mid) > p:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * hi:
            break
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# link model


@dataclass(frozen=True)
class CommLink:
    distance_m: float
    comm_power_w: float
    gain: float
    rician_k: float
    noise_w: float
    path_loss_exp: float

    def __post_init__(self):
        for name in ("distance_m", "comm_power_w", "gain", "noise_w", "path_loss_exp"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if self.rician_k < 0:
            raise ValueError("rician_k must be >= 0")

    def mean_snr(self) -> float:
        """Average received SNR with unit-mean channel power."""
        return self.gain * self.comm_power_w / (self.distance_m**self.path_loss_exp * self.noise_w)


def link_from_params(p: NetworkParams, distance_m: float) -> CommLink:
    return CommLink(distance_m, p.comm_power_w, p.comm_gain, p.rician_k, p.comm_noise_w,
                    p.path_loss_exp)


def rician_power_pdf(x, k: float):
    """Density of the channel power gain under Rician fading with unit mean."""
    x = np.asarray(x, dtype=float)
    z = 2.0 * np.sqrt(k * (k + 1.0) * np.maximum(x, 0.0))
    val = (k + 1.0) * np.exp(z - k - (k + 1.0) * x) * bessel_i0e(z)
    return np.where(x >= 0, val, 0.0)


def stp(link: CommLink, gamma: float) -> float:
    """Probability that the received SNR exceeds ``gamma``."""
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    k = link.rician_k
    b = math.sqrt(2.0 * gamma * (1.0 + k) / link.mean_snr())
    return marcum_q1(math.sqrt(2.0 * k), b)


def outage_probability(link: CommLink, gamma: float) -> float:
    return 1.0 - stp(link, gamma)


def _b_eps(k: float, epsilon: float) -> float:
    return marcum_q1_inverse(math.sqrt(2.0 * k), 1.0 - epsilon)


def capacity_threshold(link: CommLink, epsilon: float) -> float:
    """SNR threshold exceeded with probability exactly 1 - epsilon."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    return link.mean_snr() * _b_eps(link.rician_k, epsilon) ** 2 / (2.0 * (1.0 + link.rician_k))


def outage_capacity(link: CommLink, epsilon: float, bandwidth: float) -> float:
    """Rate (bits/s) supported with outage probability epsilon."""
    return bandwidth * (1.0 - epsilon) * math.log2(1.0 + capacity_threshold(link, epsilon))


def tdma_slot(tau_det: float, m: int) -> float:
    if m < 1:
        raise ValueError("m must be >= 1")
    return tau_det / m


def max_coop_range(p: NetworkParams) -> float:
    """Largest distance whose outage capacity still carries M * V_data."""
    if p.sensing_power_ratio >= 1.0:
        return 0.0
    k, eps = p.rician_k, p.max_outage
    exponent = p.num_sus * p.data_rate_bps / (p.bandwidth_hz * (1.0 - eps))
    try:
        snr_req = math.expm1(exponent * math.log(2.0))
    except OverflowError:
        return 0.0
    den = 2.0 * (1.0 + k) * p.comm_noise_w * snr_req
    num = p.comm_gain * p.comm_power_w * _b_eps(k, eps) ** 2
    return (num / den) ** (1.0 / p.path_loss_exp)
