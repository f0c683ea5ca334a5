"""Symbol-domain OFDM radar: frame generation, point-target echoes and range/Doppler estimation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .montecarlo import rng
from .params import SPEED_OF_LIGHT

GUARD_FRACTION = 1.0 / 8.0


class Modulation(enum.Enum):
    QPSK = "qpsk"
    CONST_UNIT = "const-unit"


@dataclass(frozen=True, eq=False)
class OfdmFrame:
    symbols: np.ndarray  # (M_s, N_c) transmit symbols
    subcarrier_spacing_hz: float
    symbol_duration_s: float  # includes the guard interval
    carrier_hz: float

    @property
    def num_symbols(self) -> int:
        return self.symbols.shape[0]

    @property
    def num_subcarriers(self) -> int:
        return self.symbols.shape[1]

    @property
    def bandwidth_hz(self) -> float:
        return self.subcarrier_spacing_hz * self.num_subcarriers


@dataclass(frozen=True)
class TargetEcho:
    range_m: float
    radial_velocity_mps: float = 0.0
    fading: complex = 1.0 + 0.0j
    noise_power_w: float = 0.0

    def __post_init__(self):
        if self.range_m < 0:
            raise ValueError("range must be >= 0")
        if self.noise_power_w < 0:
            raise ValueError("noise power must be >= 0")


@dataclass(frozen=True)
class RangeDopplerEstimate:
    range_index: int
    doppler_index: int
    range_m: float
    doppler_hz: float
    peak_to_floor_db: float


def processing_gain(n_c: int, m_s: int) -> int:
    if n_c < 1 or m_s < 1:
        raise ValueError("frame dimensions must be positive")
    return n_c * m_s


def doppler_shift(v_rel: float, carrier_hz: float) -> float:
    return 2.0 * v_rel * carrier_hz / SPEED_OF_LIGHT


def make_frame(n_c: int, m_s: int, bandwidth: float, modulation: Modulation | str = Modulation.QPSK,
               seed: int = 0, carrier_hz: float = 24e9,
               guard_fraction: float = GUARD_FRACTION) -> OfdmFrame:
    if n_c < 1 or m_s < 1:
        raise ValueError("n_c and m_s must be >= 1")
    if bandwidth <= 0:
        raise ValueError("bandwidth must be > 0")
    modulation = Modulation(modulation)
    if modulation is Modulation.CONST_UNIT:
        sym = np.ones((m_s, n_c), dtype=complex)
    else:
        bits = rng(seed).integers(0, 4, size=(m_s, n_c))
        sym = np.exp(1j * (np.pi / 4 + np.pi / 2 * bits))
    return OfdmFrame(sym, bandwidth / n_c, n_c / bandwidth * (1.0 + guard_fraction), carrier_hz)


def simulate_echo(frame: OfdmFrame, echo: TargetEcho, seed: int | None = None) -> np.ndarray:
    m_s, n_c = frame.symbols.shape
    tau = 2.0 * echo.range_m / SPEED_OF_LIGHT
    f_d = doppler_shift(echo.radial_velocity_mps, frame.carrier_hz)
    f_q = np.arange(n_c) * frame.subcarrier_spacing_hz
    t_m = np.arange(m_s) * frame.symbol_duration_s
    rx = (frame.symbols * echo.fading
          * np.exp(-2j * np.pi * f_q * tau)[None, :]
          * np.exp(2j * np.pi * t_m * f_d)[:, None])
    if echo.noise_power_w > 0:
        g = rng(0 if seed is None else seed, stream=1)
        s = math.sqrt(echo.noise_power_w / 2.0)
        rx = rx + s * (g.standard_normal(rx.shape) + 1j * g.standard_normal(rx.shape))
    return rx


def _divide(frame: OfdmFrame, received: np.ndarray) -> np.ndarray:
    received = np.asarray(received)
    if received.shape != frame.symbols.shape:
        raise ValueError(f"received shape {received.shape} != frame shape {frame.symbols.shape}")
    if np.any(frame.symbols == 0):
        raise ValueError("transmit frame contains zero symbols")
    return received / frame.symbols


def range_doppler_map(frame: OfdmFrame, received: np.ndarray) -> np.ndarray:
    """Coherent range-Doppler power map, shape (M_s, N_c): Doppler rows, range columns."""
    d = _divide(frame, received)
    n_c = d.shape[1]
    profile = np.fft.ifft(d, axis=1) * n_c  # undo numpy's 1/N so both axes are plain sums
    return np.abs(np.fft.fft(profile, axis=0)) ** 2


def estimate(frame: OfdmFrame, received: np.ndarray) -> RangeDopplerEstimate:
    d = _divide(frame, received)
    m_s, n_c = d.shape
    range_profile = np.abs(np.fft.ifft(d, axis=1)).sum(axis=0)
    doppler_profile = np.abs(np.fft.fft(d, axis=0)).sum(axis=1)
    ind_r = int(np.argmax(range_profile))
    ind_d = int(np.argmax(doppler_profile))
    rd = range_doppler_map(frame, received)
    peak = rd.max()
    floor = (rd.sum() - peak) / (rd.size - 1) if rd.size > 1 else 0.0
    ptf = 10 * math.log10(peak / floor) if floor > 0 else math.inf
    b = frame.bandwidth_hz
    return RangeDopplerEstimate(
        range_index=ind_r,
        doppler_index=ind_d,
        range_m=ind_r * SPEED_OF_LIGHT / (2.0 * b),
        doppler_hz=ind_d / (frame.symbol_duration_s * m_s),
        peak_to_floor_db=ptf,
    )
