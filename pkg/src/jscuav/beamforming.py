"""Two-step iterative least-squares beam synthesis and beam-pattern analysis."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from .array_geometry import (ArrayKind, ArrayLayout, Direction, build_coma, build_sena,
                             steering_matrix)
from .params import NetworkParams

HALF_POWER_DB = 10.0 * math.log10(0.5)
_POLE_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class DesiredResponse:
    """Constraint directions and the amplitude wanted in each."""

    azimuth_rad: np.ndarray
    elevation_rad: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        n = len(self.amplitudes)
        if n == 0 or len(self.azimuth_rad) != n or len(self.elevation_rad) != n:
            raise ValueError("directions and amplitudes must be nonempty and equally long")
        if np.any(self.amplitudes < 0) or not np.any(self.amplitudes > 0):
            raise ValueError("amplitudes must be nonnegative with at least one positive entry")

    @classmethod
    def from_arrays(cls, azimuth, elevation, amplitudes) -> DesiredResponse:
        return cls(np.asarray(azimuth, dtype=float).ravel(),
                   np.asarray(elevation, dtype=float).ravel(),
                   np.asarray(amplitudes, dtype=float).ravel())

    @classmethod
    def from_directions(cls, aoas: Sequence[Direction], amplitudes) -> DesiredResponse:
        return cls.from_arrays([d.azimuth_rad for d in aoas], [d.elevation_rad for d in aoas],
                               amplitudes)

    @property
    def aoas(self) -> list[Direction]:
        return [Direction(a, e) for a, e in zip(self.azimuth_rad, self.elevation_rad)]

    def __len__(self):
        return len(self.amplitudes)


@dataclass(frozen=True, eq=False)
class BeamWeights:
    weights: np.ndarray
    iterations_used: int
    converged: bool
    objective_history: tuple[float, ...] = ()


def response(layout: ArrayLayout, weights: np.ndarray, azimuth, elevation) -> np.ndarray:
    """Complex array response a(p)^T w* in each direction."""
    return steering_matrix(layout, azimuth, elevation).T @ np.conj(weights)


def solve_weights(layout: ArrayLayout, desired: DesiredResponse, max_iter: int = 200,
                  tol: float = 1e-6, w0: np.ndarray | None = None) -> BeamWeights:
    """Fit |a(p_k)^T w*| to the desired amplitudes by alternating phase and LS updates.

    Each pass keeps the current response phases, then solves the linear least-squares
    problem for those phases. The squared amplitude error never increases. ``w0``
    defaults to the matched-filter weights of the first constraint direction.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    r = desired.amplitudes
    if np.any(r == 0):
        raise ValueError("desired amplitudes must be nonzero (zero entries make the phase "
                         "normalisation undefined)")
    a = steering_matrix(layout, desired.azimuth_rad, desired.elevation_rad)
    n_el, n_con = a.shape
    try:
        a_pinv = np.linalg.pinv(a.conj().T, rcond=1e-10)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"least-squares solve failed with {n_con} constraints for "
                         f"{n_el} elements") from exc
    w = a[:, 0].copy() if w0 is None else np.asarray(w0, dtype=complex)
    if w.shape != (n_el,):
        raise ValueError(f"w0 must have {n_el} entries")
    history = []
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        y = a.T @ np.conj(w)
        mag = np.abs(y)
        phase = np.ones_like(y)
        nz = mag > 0
        phase[nz] = y[nz] / mag[nz]
        w_new = a_pinv @ (r * np.conj(phase))
        history.append(float(np.sum((np.abs(a.T @ np.conj(w_new)) - r) ** 2)))
        step = np.linalg.norm(w_new - w)
        w = w_new
        if step < tol * np.linalg.norm(w):
            converged = True
            break
    norm = np.linalg.norm(w)
    if not np.isfinite(norm) or norm == 0:
        raise ValueError(f"least-squares solve is rank deficient ({n_con} constraints, "
                         f"{n_el} elements)")
    return BeamWeights(w / norm, it, converged, tuple(history))


# ---------------------------------------------------------------------------
# pattern evaluation


@dataclass(frozen=True, eq=False)
class BeamPattern:
    azimuth_rad: np.ndarray  # (n_az,)
    elevation_rad: np.ndarray  # (n_el,)
    grid_res_rad: float
    power_db: np.ndarray  # (n_el, n_az), peak at 0 dB
    mainlobe_dir: Direction
    az_beamwidth_rad: float
    el_beamwidth_rad: float
    peak_sidelobe_db: float
    mainlobe_mask: np.ndarray


def _default_el_span(layout: ArrayLayout) -> tuple[float, float]:
    # A planar array radiates a mirror image below its plane; one hemisphere suffices.
    return (0.0, math.pi / 2) if layout.kind is ArrayKind.SENA else (0.0, math.pi)


def _cut_width(x: np.ndarray, y: np.ndarray, i0: int, period: float | None) -> float:
    """Width of the half-power interval around index ``i0`` of a 1D cut."""
    n = len(y)
    thr = y[i0] + HALF_POWER_DB
    if period is not None:
        x = np.concatenate([x - period, x, x + period])
        y = np.tile(y, 3)
        i0 += n
        lo_lim, hi_lim = i0 - n + 1, i0 + n - 1
    else:
        lo_lim, hi_lim = 0, n - 1

    def edge(direction):
        seg = y[i0 + direction::direction] if direction > 0 else y[i0 - 1::-1]
        limit = (hi_lim - i0) if direction > 0 else (i0 - lo_lim)
        below = np.flatnonzero(seg[:limit] < thr)
        if below.size == 0:
            return None
        k = i0 + direction * (below[0] + 1)
        kp = k - direction
        return x[kp] + (x[k] - x[kp]) * (thr - y[kp]) / (y[k] - y[kp])

    right, left = edge(1), edge(-1)
    if period is not None and (left is None or right is None):
        return period
    if right is None:
        right = x[hi_lim]
    if left is None:
        left = x[lo_lim]
    return float(right - left)


def _meridian(power_db, el, j):
    """Great-circle cut through the pole along azimuth column ``j``.

    Returns (coordinate, values, period, offset) where row ``i`` of column ``j``
    sits at index ``offset + i``; the coordinate is the polar angle, signed
    negative on the opposite half-plane. Grids that stop short of the pole give
    the plain column.
    """
    if el[0] > _POLE_EPS:
        return el, power_db[:, j], None, 0
    n_az = power_db.shape[1]
    j2 = (j + n_az // 2) % n_az
    x = np.concatenate([-el[:0:-1], el])
    y = np.concatenate([power_db[:0:-1, j2], power_db[:, j]])
    if el[-1] >= math.pi - _POLE_EPS:
        return x[1:], y[1:], 2 * math.pi, len(el) - 2
    return x, y, None, len(el) - 1


def _flood_mainlobe(power_db: np.ndarray, i0: int, j0: int, el: np.ndarray) -> np.ndarray:
    """Cells reachable from the peak along paths that never increase in power."""
    mask = np.zeros(power_db.shape, dtype=bool)
    mask[i0, j0] = True
    tol = 1e-12
    pole_rows = [r for r, v in ((0, el[0]), (-1, el[-1]))
                 if v <= _POLE_EPS or v >= math.pi - _POLE_EPS]
    while True:
        grown = mask.copy()
        for shift in (1, -1):
            src_val = np.roll(power_db, shift, axis=1)
            grown |= np.roll(mask, shift, axis=1) & (power_db <= src_val + tol)
        grown[1:] |= mask[:-1] & (power_db[1:] <= power_db[:-1] + tol)
        grown[:-1] |= mask[1:] & (power_db[:-1] <= power_db[1:] + tol)
        for r in pole_rows:  # every sample in a pole row is the same direction
            if grown[r].any():
                grown[r] |= power_db[r] <= power_db[r][grown[r]].max() + tol
        if np.array_equal(grown, mask):
            return mask
        mask = grown


def pattern_power(layout: ArrayLayout, weights: np.ndarray, azimuth: np.ndarray,
                  elevation: np.ndarray, chunk_rows: int = 16) -> np.ndarray:
    """|w^H a(p)|^2 on the (elevation x azimuth) grid."""
    out = np.empty((len(elevation), len(azimuth)))
    wc = np.conj(weights)
    for s in range(0, len(elevation), chunk_rows):
        el = elevation[s:s + chunk_rows]
        az_g, el_g = np.meshgrid(azimuth, el)
        a = steering_matrix(layout, az_g.ravel(), el_g.ravel())
        out[s:s + len(el)] = (np.abs(wc @ a) ** 2).reshape(len(el), len(azimuth))
    return out


def evaluate_pattern(layout: ArrayLayout, w: BeamWeights | np.ndarray,
                     grid_res_rad: float = math.radians(0.5),
                     el_span: tuple[float, float] | None = None) -> BeamPattern:
    if not 0.0 < grid_res_rad <= math.pi / 8:
        raise ValueError("grid resolution must lie in (0, pi/8]")
    weights = w.weights if isinstance(w, BeamWeights) else np.asarray(w, dtype=complex)
    lo, hi = _default_el_span(layout) if el_span is None else el_span
    n_az = 4 * math.ceil(2 * math.pi / grid_res_rad / 4)  # quarter turns land on the grid
    az = np.arange(n_az) * (2 * math.pi / n_az)
    el = np.linspace(lo, hi, math.ceil((hi - lo) / grid_res_rad) + 1)

    p = pattern_power(layout, weights, az, el)
    pmax = p.max()
    if not pmax > 0:
        raise ValueError("weights produce no radiated power")
    power_db = 10 * np.log10(np.maximum(p / pmax, 1e-30))
    i0, j0 = np.unravel_index(int(np.argmax(p)), p.shape)
    theta0 = el[i0]

    x, y, period, offset = _meridian(power_db, el, j0)
    el_bw = _cut_width(x, y, offset + i0, period)
    if math.sin(theta0) < _POLE_EPS:
        # at a pole the azimuth width is read along the orthogonal meridian
        x, y, period, offset = _meridian(power_db, el, (j0 + n_az // 4) % n_az)
        az_bw = _cut_width(x, y, offset + i0, period)
    else:
        az_bw = _cut_width(az, power_db[i0], j0, 2 * math.pi)
        if az_bw < 2 * math.pi:
            az_bw *= math.sin(theta0)

    mask = _flood_mainlobe(power_db, i0, j0, el)
    outside = power_db[~mask]
    sll = float(outside.max()) if outside.size else -math.inf
    return BeamPattern(az, el, grid_res_rad, power_db, Direction(float(az[j0]), float(theta0)),
                       az_bw, el_bw, sll, mask)


def approx_gain(az_bw_rad: float, el_bw_rad: float) -> float:
    """Directivity estimate 26000 / (az width in degrees * el width in degrees)."""
    if az_bw_rad <= 0 or el_bw_rad <= 0:
        raise ValueError("beamwidths must be > 0")
    return 26000.0 / (math.degrees(az_bw_rad) * math.degrees(el_bw_rad))


def write_pattern_csv(pattern: BeamPattern, out: TextIO) -> None:
    w = csv.writer(out)
    w.writerow(["azimuth_rad", "elevation_rad", "power_db"])
    for i, el in enumerate(pattern.elevation_rad):
        for j, az in enumerate(pattern.azimuth_rad):
            w.writerow([f"{az:.10g}", f"{el:.10g}", f"{pattern.power_db[i, j]:.6f}"])


# ---------------------------------------------------------------------------
# default designs


def _gaussian_mainlobe(offset, half_bw):
    """Amplitude of a Gaussian beam that is 3 dB down at ``half_bw``."""
    return 10 ** (-3 * (offset / half_bw) ** 2 / 20)


def fibonacci_hemisphere(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Near-uniform directions over the upper hemisphere (azimuth, elevation)."""
    i = np.arange(n) + 0.5
    el = np.arccos(1 - i / n)
    az = (math.pi * (1 + math.sqrt(5)) * i) % (2 * math.pi)
    return az, el


def senb_design(beamwidth_deg: float = 4.5, sidelobe_start_bw: float = 1.4,
                floor: float = 0.025, n_points: int = 5000,
                ring_azimuths: int = 16) -> DesiredResponse:
    """Zenith pencil beam: Gaussian mainlobe samples plus a flat sidelobe floor.

    Sidelobe constraints cover the hemisphere beyond ``sidelobe_start_bw`` beamwidths
    from zenith on a Fibonacci lattice.
    """
    hb = math.radians(beamwidth_deg) / 2
    az_ring = np.arange(ring_azimuths) * (2 * math.pi / ring_azimuths)
    ring_el = np.repeat([0.5 * hb, hb], ring_azimuths)
    ring_az = np.tile(az_ring, 2)
    f_az, f_el = fibonacci_hemisphere(n_points)
    side = f_el >= sidelobe_start_bw * 2 * hb
    az = np.concatenate([[0.0], ring_az, f_az[side]])
    el = np.concatenate([[0.0], ring_el, f_el[side]])
    amp = np.concatenate([[1.0], _gaussian_mainlobe(ring_el, hb), np.full(side.sum(), floor)])
    return DesiredResponse.from_arrays(az, el, amp)


def comb_design(beamwidth_deg: float = 9.0, sidelobe_start_bw: float = 1.5,
                floor: float = 0.1, n_points: int = 161) -> DesiredResponse:
    """Broadside fan beam for the linear array, constrained along elevation only."""
    hb = math.radians(beamwidth_deg) / 2
    th = np.linspace(0.0, math.pi, n_points)
    off = np.abs(th - math.pi / 2)
    main = off <= hb
    side = off >= sidelobe_start_bw * 2 * hb
    keep = main | side
    amp = np.where(main, _gaussian_mainlobe(off, hb), floor)
    el = np.concatenate([[math.pi / 2], th[keep]])
    amp = np.concatenate([[1.0], amp[keep]])
    return DesiredResponse.from_arrays(np.zeros_like(el), el, amp)


def synthesize_senb(p: NetworkParams | None = None, **design) -> tuple[ArrayLayout, BeamWeights]:
    p = NetworkParams() if p is None else p
    layout = build_sena(p.sena_layers, int(math.log2(p.sena_ring_size)), wavelength=p.wavelength_m)
    return layout, solve_weights(layout, senb_design(**design))


def synthesize_comb(p: NetworkParams | None = None, **design) -> tuple[ArrayLayout, BeamWeights]:
    p = NetworkParams() if p is None else p
    layout = build_coma(p.coma_elements, wavelength=p.wavelength_m)
    return layout, solve_weights(layout, comb_design(**design))
