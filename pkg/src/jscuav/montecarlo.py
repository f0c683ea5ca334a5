"""Seeded sampling oracles for the closed-form results.

Every draw comes from a Philox-4x64 counter-based generator keyed by
``SeedSequence(seed, spawn_key=(stream,))``, so each (seed, stream) pair names an
independent, reproducible stream regardless of which worker consumes it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .params import NetworkParams
from .sensing_budget import interference_coefficient

_CHUNK = 1 << 20


class SampleKind(enum.Enum):
    ANNULUS_POINT = "annulus_point"
    RICIAN_POWER = "rician_power"
    DISK_UNION = "disk_union"
    INTERFERENCE_SUM = "interference_sum"


@dataclass(frozen=True)
class SampleSpec:
    seed: int
    n_samples: int
    kind: SampleKind

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")


def rng(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream,))))


def _chunks(n: int):
    while n > 0:
        k = min(n, _CHUNK)
        yield k
        n -= k


def _annulus_radii(g: np.random.Generator, r_g: float, x_q: float, n: int) -> np.ndarray:
    return np.sqrt(r_g**2 + g.random(n) * (x_q**2 - r_g**2))


def sample_annulus(r_g: float, x_q: float, n: int, seed: int, stream: int = 0) -> np.ndarray:
    """Radii with density 2r/(x_q^2 - r_g^2), by inverse CDF."""
    if not 0.0 <= r_g < x_q:
        raise ValueError("need 0 <= r_g < x_q")
    return _annulus_radii(rng(seed, stream), r_g, x_q, n)


def sample_annulus_points(r_g: float, x_q: float, n: int, seed: int, stream: int = 0) -> np.ndarray:
    """Points uniform on the annulus, shape (n, 2)."""
    if not 0.0 <= r_g < x_q:
        raise ValueError("need 0 <= r_g < x_q")
    g = rng(seed, stream)
    r = _annulus_radii(g, r_g, x_q, n)
    phi = g.random(n) * 2 * math.pi
    return np.column_stack([r * np.cos(phi), r * np.sin(phi)])


def sample_rician_power(k: float, n: int, seed: int, stream: int = 0) -> np.ndarray:
    """Unit-mean Rician channel power gains |h|^2."""
    g = rng(seed, stream)
    nu = math.sqrt(k / (k + 1.0))
    sigma = math.sqrt(0.5 / (k + 1.0))
    re = nu + sigma * g.standard_normal(n)
    im = sigma * g.standard_normal(n)
    return re * re + im * im


def estimate_union_area(centers, radius: float, n: int, seed: int, stream: int = 0) -> tuple[float, float]:
    """Union area of equal disks by uniform sampling of their bounding box.

    Returns ``(area, standard_error)``.
    """
    c = np.atleast_2d(np.asarray(centers, dtype=float))
    if c.shape[0] == 0:
        raise ValueError("need at least one centre")
    lo = c.min(axis=0) - radius
    hi = c.max(axis=0) + radius
    box = float(np.prod(hi - lo))
    g = rng(seed, stream)
    hits = 0
    r2 = radius * radius
    for k in _chunks(n):
        pts = lo + g.random((k, 2)) * (hi - lo)
        inside = np.zeros(k, dtype=bool)
        # loop over disks keeps memory at O(chunk)
        for cx, cy in c:
            inside |= (pts[:, 0] - cx) ** 2 + (pts[:, 1] - cy) ** 2 <= r2
        hits += int(inside.sum())
    frac = hits / n
    return box * frac, box * math.sqrt(frac * (1.0 - frac) / n)


def estimate_expected_union_area(r_g: float, x_q: float, r_d: float, m: int, n: int, seed: int,
                                 stream: int = 0) -> tuple[float, float]:
    """Mean union area of the fusion-UAV disk and ``m`` SU disks over random placements.

    The union splits into the disjoint pieces D_j minus (D_0 u ... u D_{j-1}). Each
    sample draws a fresh placement, a disk index j and a point uniform in D_j, and
    scores a hit when no earlier disk covers the point; (m+1)*pi*r_d^2 times the hit
    fraction is then unbiased for the mean union area even when the zones are
    sparse. Returns ``(area, standard_error)``.
    """
    if m < 0 or n < 1:
        raise ValueError("need m >= 0 and n >= 1")
    if r_d <= 0:
        return 0.0, 0.0
    g = rng(seed, stream)
    hits = 0
    r2 = r_d * r_d
    per_chunk = max(1, _CHUNK // (m + 1))
    done = 0
    while done < n:
        k = min(per_chunk, n - done)
        r = _annulus_radii(g, r_g, x_q, k * m).reshape(k, m)
        phi = g.random((k, m)) * 2 * math.pi
        cx = np.hstack([np.zeros((k, 1)), r * np.cos(phi)])
        cy = np.hstack([np.zeros((k, 1)), r * np.sin(phi)])
        j = g.integers(0, m + 1, size=k)
        rho = r_d * np.sqrt(g.random(k))
        psi = g.random(k) * 2 * math.pi
        rows = np.arange(k)
        px = cx[rows, j] + rho * np.cos(psi)
        py = cy[rows, j] + rho * np.sin(psi)
        earlier = np.arange(m + 1)[None, :] < j[:, None]
        covered = ((px[:, None] - cx) ** 2 + (py[:, None] - cy) ** 2 <= r2) & earlier
        hits += int(k - np.count_nonzero(covered.any(axis=1)))
        done += k
    frac = hits / n
    total = (m + 1) * math.pi * r2
    return total * frac, total * math.sqrt(frac * (1.0 - frac) / n)


def mc_inverse_quartic_expectation(r_g: float, x_q: float, h: float, n: int, seed: int,
                                   stream: int = 0) -> tuple[float, float]:
    """Sample mean of (R^2 + 4h^2)^-2 over uniform annulus radii, with its standard error."""
    g = rng(seed, stream)
    s = s2 = 0.0
    for k in _chunks(n):
        y = 1.0 / (_annulus_radii(g, r_g, x_q, k) ** 2 + 4 * h * h) ** 2
        s += float(y.sum())
        s2 += float(np.dot(y, y))
    mean = s / n
    var = max(s2 / n - mean * mean, 0.0)
    return mean, math.sqrt(var / n)


def mc_interference(p: NetworkParams, x_q: float, n_trials: int, seed: int, stream: int = 0,
                    worst_case: bool = True) -> tuple[float, float]:
    """Mean total interference at the fusion UAV over random SU placements.

    Each trial places ``p.num_sus`` SUs uniformly on the annulus and sums the
    bistatic interference of each. With ``worst_case`` the beam intersection sits
    at r_i = R_i/2, which maximises the per-SU term only while R_i <= 2h (beyond
    that the midpoint is a local minimum); otherwise r_i is uniform on [0, R_i].
    """
    g = rng(seed, stream)
    m, h = p.num_sus, p.altitude_m
    coef = interference_coefficient(p) / 16.0  # per-SU scale for 1/(R1^2 R2^2)
    totals = np.empty(n_trials)
    done = 0
    per_chunk = max(1, _CHUNK // m)
    while done < n_trials:
        k = min(per_chunk, n_trials - done)
        r = _annulus_radii(g, p.guard_radius_m, x_q, k * m).reshape(k, m)
        ri = r / 2 if worst_case else g.random((k, m)) * r
        d1 = ri**2 + h * h
        d2 = (r - ri) ** 2 + h * h
        totals[done:done + k] = coef * (1.0 / (d1 * d2)).sum(axis=1)
        done += k
    return float(totals.mean()), float(totals.std(ddof=1) / math.sqrt(n_trials)) if n_trials > 1 else 0.0


def mc_stp(k: float, snr_mean: float, gamma: float, n: int, seed: int, stream: int = 0) -> tuple[float, float]:
    """Fraction of Rician draws whose SNR exceeds gamma, with binomial standard error."""
    hits = 0
    g_seed = rng(seed, stream)
    nu = math.sqrt(k / (k + 1.0))
    sigma = math.sqrt(0.5 / (k + 1.0))
    thresh = gamma / snr_mean
    for c in _chunks(n):
        re = nu + sigma * g_seed.standard_normal(c)
        im = sigma * g_seed.standard_normal(c)
        hits += int(np.count_nonzero(re * re + im * im > thresh))
    q = hits / n
    return q, math.sqrt(q * (1.0 - q) / n)
