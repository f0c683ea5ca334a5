"""Element layouts for the sensing (concentric-ring) and communication (linear) subarrays."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from typing import TextIO

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Direction:
    azimuth_rad: float
    elevation_rad: float

    def __post_init__(self):
        if not 0.0 <= self.elevation_rad <= math.pi:
            raise ValueError(f"elevation {self.elevation_rad} outside [0, pi]")
        object.__setattr__(self, "azimuth_rad", float(self.azimuth_rad) % TWO_PI)


class ArrayKind(enum.Enum):
    SENA = "SenA"
    COMA = "ComA"


@dataclass(frozen=True, eq=False)
class ArrayLayout:
    kind: ArrayKind
    positions_m: np.ndarray  # (N, 2); row 0 is the phase reference
    wavelength_m: float
    ring_pitch_m: float | None = None
    coma_pitch_m: float | None = None

    @property
    def num_elements(self) -> int:
        return self.positions_m.shape[0]


def build_sena(n_layers: int, b: int, pitch: float | None = None, wavelength: float = 1.0) -> ArrayLayout:
    """Concentric rings of ``2**b`` elements around a central reference element.

    Ring ``p`` (1..n_layers-1) has radius ``p*pitch``; element ``q`` of a ring sits at
    polar angle ``q*2*pi/2**b``. Ordering is (ring, index) lexicographic.
    """
    if n_layers < 1 or b < 1:
        raise ValueError("n_layers and b must be >= 1")
    if wavelength <= 0:
        raise ValueError("wavelength must be > 0")
    pitch = wavelength / 2 if pitch is None else pitch
    if pitch <= 0:
        raise ValueError("pitch must be > 0")
    n = 2**b
    p, q = np.meshgrid(np.arange(1, n_layers), np.arange(n), indexing="ij")
    psi = q.ravel() * (TWO_PI / n)
    r = p.ravel() * pitch
    rings = np.column_stack([r * np.cos(psi), r * np.sin(psi)])
    pos = np.vstack([np.zeros((1, 2)), rings])
    return ArrayLayout(ArrayKind.SENA, pos, wavelength, ring_pitch_m=pitch)


def build_coma(n_elements: int, wavelength: float = 1.0, pitch: float | None = None) -> ArrayLayout:
    if n_elements < 1 or wavelength <= 0:
        raise ValueError("n_elements and wavelength must be positive")
    pitch = wavelength / 2 if pitch is None else pitch
    if pitch <= 0:
        raise ValueError("pitch must be > 0")
    pos = np.column_stack([np.arange(n_elements) * pitch, np.zeros(n_elements)])
    return ArrayLayout(ArrayKind.COMA, pos, wavelength, coma_pitch_m=pitch)


def steering_matrix(layout: ArrayLayout, azimuth, elevation) -> np.ndarray:
    """Steering vectors for a batch of directions, shape ``(N, K)``."""
    az = np.atleast_1d(np.asarray(azimuth, dtype=float))
    el = np.atleast_1d(np.asarray(elevation, dtype=float))
    k = TWO_PI / layout.wavelength_m
    if layout.kind is ArrayKind.COMA:
        return np.exp(1j * k * np.outer(layout.positions_m[:, 0], np.cos(el)))
    v = np.stack([np.cos(az) * np.sin(el), np.sin(az) * np.sin(el)])
    return np.exp(-1j * k * (layout.positions_m @ v))


def steering_vector(layout: ArrayLayout, direction: Direction) -> np.ndarray:
    return steering_matrix(layout, direction.azimuth_rad, direction.elevation_rad)[:, 0]


def write_layout_csv(layout: ArrayLayout, out: TextIO) -> None:
    w = csv.writer(out)
    w.writerow(["element_index", "x_m", "y_m"])
    for i, (x, y) in enumerate(layout.positions_m):
        w.writerow([i, repr(float(x)), repr(float(y))])
