"""Ground sensing-zone geometry and the cooperative coverage bound UB-ACSA."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .comm_link import max_coop_range
from .params import NetworkParams
from .sensing_budget import max_sensing_range, min_sinr, mutual_interference


class Branch(enum.Enum):
    F1 = "F1"
    F2 = "F2"
    DEGENERATE = "degenerate"


def arccot(x: float) -> float:
    """Inverse cotangent with range (0, pi)."""
    return math.pi / 2 - math.atan(x)


def ground_radius(r_max: float, h: float) -> float:
    if r_max < 0 or h < 0:
        raise ValueError("r_max and h must be >= 0")
    return math.sqrt(r_max * r_max - h * h) if r_max >= h else 0.0


def overlap_area(r_i, r_d):
    """Lens area shared by two radius-r_d disks whose centres are r_i apart."""
    r_i = np.asarray(r_i, dtype=float)
    if r_d == 0:
        return np.zeros_like(r_i) if r_i.ndim else 0.0
    x = np.minimum(r_i, 2 * r_d)
    lens = 2 * r_d**2 * np.arccos(x / (2 * r_d)) - x * np.sqrt(np.maximum(r_d**2 - (x / 2) ** 2, 0.0))
    out = np.where(r_i < 2 * r_d, lens, 0.0)
    return out if out.ndim else float(out)


def _f1(x_q, r_g, r_d):
    """Mean union area when every annulus distance allows overlap (x_q < 2 r_d)."""
    a, g = x_q, r_g
    sa = math.sqrt(4 * r_d**2 - a**2)
    sg = math.sqrt(4 * r_d**2 - g**2)
    t = (a * sa * (2 * r_d**2 + a**2)
         + 8 * math.pi * r_d**2 * a**2
         + 8 * r_d**2 * (g**2 * math.acos(g / (2 * r_d)) - a**2 * math.acos(a / (2 * r_d)))
         + 8 * r_d**4 * (2 * math.asin(g / (2 * r_d)) + arccot(sa / a) - arccot(sg / g)
                         - 2 * math.asin(a / (2 * r_d)))
         - g * sg * (2 * r_d**2 + g**2)
         - 8 * math.pi * r_d**2 * g**2)
    return t / (4 * (a**2 - g**2))


def _f2(x_q, r_g, r_d):
    """Mean union area when the annulus extends past 2 r_d (x_q >= 2 r_d)."""
    x = x_q**2 - r_g**2
    sg = math.sqrt(4 * r_d**2 - r_g**2)
    t = (2 * math.pi * r_d**2 * x + math.pi * r_d**4 - 2 * r_d**4 * arccot(sg / r_g)
         - 2 * r_d**2 * math.acos(r_g / (2 * r_d)) * (2 * r_d**2 - r_g**2)
         - 0.25 * r_g * sg * (2 * r_d**2 + r_g**2))
    return t / x


def expected_pair_union(x_q: float, r_g: float, r_d: float) -> float:
    """Mean union area of the fusion-UAV zone and one SU zone, SU uniform on the annulus."""
    return _pair_union(x_q, r_g, r_d)[0]


def _pair_union(x_q, r_g, r_d):
    if not 0.0 < r_g < x_q:
        raise ValueError(f"degenerate annulus: need 0 < r_g < x_q, got r_g={r_g}, x_q={x_q}")
    if r_d < 0:
        raise ValueError("r_d must be >= 0")
    if r_d == 0.0:
        return 0.0, Branch.DEGENERATE
    if r_g >= 2 * r_d:
        return 2 * math.pi * r_d**2, Branch.F2
    if x_q < 2 * r_d:
        return float(_f1(x_q, r_g, r_d)), Branch.F1
    return float(_f2(x_q, r_g, r_d)), Branch.F2


@dataclass(frozen=True)
class CoverageResult:
    r_d_m: float
    e_s_m2: float
    ub_acsa_m2: float
    branch: Branch
    x_q_m: float
    i_sen_w: float  # nan when the annulus is degenerate
    r_max_m: float


def ub_acsa(p: NetworkParams) -> CoverageResult:
    """Evaluate the whole pipeline at the operating point held in ``p``."""
    x_q = max_coop_range(p)
    r_g, m = p.guard_radius_m, p.num_sus
    if x_q <= r_g:
        return CoverageResult(0.0, 0.0, 0.0, Branch.DEGENERATE, x_q, math.nan, math.nan)
    i_sen = mutual_interference(p, x_q)
    r_max = max_sensing_range(p, i_sen, min_sinr(p.max_false_alarm, p.min_detection,
                                                 p.processing_gain))
    r_d = ground_radius(r_max, p.altitude_m)
    if r_d == 0.0:
        return CoverageResult(0.0, 0.0, 0.0, Branch.DEGENERATE, x_q, i_sen, r_max)
    e_s, branch = _pair_union(x_q, r_g, r_d)
    s = m * e_s - (m - 1) * math.pi * r_d**2
    return CoverageResult(r_d, e_s, s, branch, x_q, i_sen, r_max)
