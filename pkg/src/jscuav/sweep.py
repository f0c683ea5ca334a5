"""Grid sweep of the coverage bound over (sensing power ratio, fleet size)."""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .coverage import ub_acsa
from .params import NetworkParams

CSV_HEADER = ["beta_r", "m", "x_q_m", "i_sen_w", "r_max_m", "r_d_m", "e_s_m2", "ub_acsa_m2"]


@dataclass(frozen=True)
class SweepPoint:
    beta_r: float
    m: int
    x_q_m: float
    i_sen_w: float
    r_max_m: float
    r_d_m: float
    e_s_m2: float
    ub_acsa_m2: float


@dataclass(frozen=True)
class SweepResult:
    grid: tuple[SweepPoint, ...]
    argmax: tuple[float, int, float]
    meta: dict = field(default_factory=dict)

    def best(self) -> SweepPoint:
        b, m, _ = self.argmax
        return next(pt for pt in self.grid if pt.beta_r == b and pt.m == m)


def default_beta_grid() -> np.ndarray:
    return np.arange(1, 100) / 100.0


def default_m_grid() -> np.ndarray:
    return np.arange(1, 201)


def evaluate_point(p: NetworkParams, beta: float, m: int) -> SweepPoint:
    c = ub_acsa(p.at(beta, m))
    return SweepPoint(float(beta), int(m), float(c.x_q_m), float(c.i_sen_w), float(c.r_max_m),
                      float(c.r_d_m), float(c.e_s_m2), float(c.ub_acsa_m2))


def _eval_chunk(args):
    p, pairs = args
    return [evaluate_point(p, b, m) for b, m in pairs]


def _argmax(points: Sequence[SweepPoint]) -> tuple[float, int, float]:
    # points are sorted by (m, beta); the first maximum is the tie-break winner
    best = points[0]
    for pt in points[1:]:
        if pt.ub_acsa_m2 > best.ub_acsa_m2:
            best = pt
    return best.beta_r, best.m, best.ub_acsa_m2


def sweep(p: NetworkParams, beta_grid: Iterable[float] | None = None,
          m_grid: Iterable[int] | None = None, threads: int = 1, seed: int = 0) -> SweepResult:
    """Evaluate the coverage bound at every (beta, M) grid point.

    With ``threads > 1`` points are spread over worker processes; every point is
    computed by the same code either way, so results are bit-identical.
    """
    betas = [float(b) for b in (default_beta_grid() if beta_grid is None else beta_grid)]
    ms = [int(m) for m in (default_m_grid() if m_grid is None else m_grid)]
    if not betas or not ms:
        raise ValueError("sweep grids must be nonempty")
    for b in betas:
        if not 0.0 <= b < 1.0:
            raise ValueError(f"beta values must lie in [0, 1), got {b}")
    if any(m < 1 for m in ms):
        raise ValueError("M values must be >= 1")

    t0 = time.perf_counter()
    pairs = [(b, m) for m in ms for b in betas]
    if threads > 1 and len(pairs) > 1:
        n_chunks = min(len(pairs), 4 * threads)
        chunks = [pairs[i::n_chunks] for i in range(n_chunks)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            points = [pt for part in pool.map(_eval_chunk, [(p, c) for c in chunks]) for pt in part]
    else:
        points = _eval_chunk((p, pairs))
    points.sort(key=lambda pt: (pt.m, pt.beta_r))
    meta = {
        "config_sha256": p.digest(),
        "seed": seed,
        "version": __version__,
        "wall_time_s": time.perf_counter() - t0,
        "threads": threads,
    }
    return SweepResult(tuple(points), _argmax(points), meta)


def _fmt(v) -> str:
    return str(v) if isinstance(v, int) else "%.17g" % v


def write_csv(result: SweepResult, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for pt in result.grid:
        w.writerow([_fmt(getattr(pt, k)) for k in CSV_HEADER])


def to_json(result: SweepResult) -> str:
    doc = {
        "meta": result.meta,
        "argmax": {"beta_r": result.argmax[0], "m": result.argmax[1],
                   "ub_acsa_m2": result.argmax[2]},
        "grid": [asdict(pt) for pt in result.grid],
    }
    # json writes floats with repr, the shortest string that round-trips exactly
    return json.dumps(doc, indent=1)


def emit(result: SweepResult, fmt: str, path: str | Path) -> None:
    if not result.grid:
        raise ValueError("empty sweep result")
    path = Path(path)
    if fmt == "csv":
        with path.open("w", newline="") as fh:
            write_csv(result, fh)
    elif fmt == "json":
        path.write_text(to_json(result) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def _point_from_row(row: dict) -> SweepPoint:
    return SweepPoint(**{f.name: (int(row[f.name]) if f.name == "m" else float(row[f.name]))
                         for f in fields(SweepPoint)})


def read_result(path: str | Path) -> list[SweepPoint]:
    """Read back the grid written by :func:`emit` (either format)."""
    path = Path(path)
    text = path.read_text()
    if text.lstrip().startswith("{"):
        return [_point_from_row(r) for r in json.loads(text)["grid"]]
    return [_point_from_row(r) for r in csv.DictReader(text.splitlines())]


def same_point(a: SweepPoint, b: SweepPoint) -> bool:
    """Bit-exact equality that treats nan as equal to nan."""
    for f in fields(SweepPoint):
        x, y = getattr(a, f.name), getattr(b, f.name)
        if not (x == y or (isinstance(x, float) and math.isnan(x) and math.isnan(y))):
            return False
    return True
