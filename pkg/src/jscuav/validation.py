"""Quick oracle suite: every closed form checked against an independent route."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, optimize, special

from . import comm_link as cl
from . import coverage as cov
from . import montecarlo as mc
from . import ofdm_radar as rad
from . import sensing_budget as sb
from .params import NetworkParams


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _bisect_q_inv(p: float) -> float:
    lo, hi = -40.0, 40.0
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if 0.5 * math.erfc(mid / math.sqrt(2)) > p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _marcum_quad(a: float, b: float) -> float:
    def f(t):
        return t * math.exp(-0.5 * (t - a) ** 2) * special.i0e(a * t)
    val, _ = integrate.quad(f, b, max(b, a) + 60.0, epsabs=1e-14, epsrel=1e-12, limit=400)
    return val


def _pair_union_quad(x_q: float, r_g: float, r_d: float) -> float:
    x = x_q**2 - r_g**2

    def f(r):
        return 2 * r / x * (2 * math.pi * r_d**2 - cov.overlap_area(r, r_d))
    pts = [2 * r_d] if r_g < 2 * r_d < x_q else None
    val, _ = integrate.quad(f, r_g, x_q, points=pts, epsabs=0, epsrel=1e-13, limit=400)
    return val


def check_q_inverse(seed: int) -> CheckResult:
    ps = [1e-12, 1e-8, 1e-3, 0.1, 0.5, 0.9, 1 - 1e-8]
    err = max(abs(sb.gaussian_q_inv(p) - _bisect_q_inv(p)) for p in ps)
    return CheckResult("gaussian Q inverse vs erfc bisection", err < 1e-8, f"max |dx| = {err:.2e}")


def check_marcum(seed: int) -> CheckResult:
    grid = np.linspace(0.0, 8.0, 6)
    err = max(abs(cl.marcum_q1(a, b) - _marcum_quad(a, b)) for a in grid for b in grid)
    return CheckResult("Marcum Q1 vs quadrature", err < 1e-10, f"max abs err = {err:.2e}")


def check_marcum_inverse(seed: int) -> CheckResult:
    err = 0.0
    for a in (0.5, 2.0, math.sqrt(20.0)):
        for b in (0.5, 3.0, 6.0):
            err = max(err, abs(cl.marcum_q1_inverse(a, cl.marcum_q1(a, b)) - b))
    return CheckResult("Marcum Q1 inverse round trip", err < 1e-8, f"max |db| = {err:.2e}")


def check_stp(seed: int) -> CheckResult:
    p = NetworkParams()
    n = 10**6
    worst = 0.0
    for i, (beta, c) in enumerate([(0.3, 0.6), (0.5, 1.0), (0.8, 1.4)]):
        q = p.at(beta)
        # distance at which the mean SNR is gamma/c, so the STP is far from 0 and 1
        snr = p.snr_threshold / c
        d = (q.comm_gain * q.comm_power_w / (q.comm_noise_w * snr)) ** (1 / q.path_loss_exp)
        link = cl.link_from_params(q, d)
        exact = cl.stp(link, p.snr_threshold)
        est, _ = mc.mc_stp(link.rician_k, link.mean_snr(), p.snr_threshold, n, seed, i)
        worst = max(worst, abs(est - exact) / math.sqrt(exact * (1 - exact) / n))
    return CheckResult("STP vs Rician draws", worst < 3.0, f"max deviation = {worst:.2f} sigma")


def check_annulus(seed: int) -> CheckResult:
    worst = 0.0
    for i, (r_g, x_q, h) in enumerate([(10.0, 400.0, 150.0), (50.0, 300.0, 100.0)]):
        exact = sb.annulus_inverse_quartic_expectation(r_g, x_q, h)
        est, se = mc.mc_inverse_quartic_expectation(r_g, x_q, h, 10**6, seed, i)
        worst = max(worst, abs(est - exact) / se)
    return CheckResult("annulus expectation vs sampling", worst < 3.0,
                       f"max deviation = {worst:.2f} sigma")


def check_pair_union(seed: int) -> CheckResult:
    cases = [(800.0, 10.0, 476.97), (600.0, 10.0, 476.97), (3000.0, 100.0, 700.0)]
    worst = max(abs(cov.expected_pair_union(*c) / _pair_union_quad(*c) - 1) for c in cases)
    return CheckResult("pair-union closed form vs quadrature", worst < 1e-9, f"max rel err = {worst:.2e}")


def check_coop_range(seed: int) -> CheckResult:
    p = NetworkParams().at(0.543, 100)
    x_q = cl.max_coop_range(p)
    target = p.num_sus * p.data_rate_bps

    def g(x):
        return cl.outage_capacity(cl.link_from_params(p, x), p.max_outage, p.bandwidth_hz) - target
    root = optimize.brentq(g, 1e-3, 1e7, xtol=1e-12, rtol=1e-14)
    rel = abs(x_q / root - 1)
    return CheckResult("cooperative range vs capacity root", rel < 1e-9, f"rel err = {rel:.2e}")


def check_range(seed: int) -> CheckResult:
    p = NetworkParams().at(1.0)
    s = sb.min_sinr(p.max_false_alarm, p.min_detection, p.processing_gain)
    r_max = sb.max_sensing_range(p, 0.0, s)
    root = optimize.brentq(lambda r: sb.sensing_sinr_at_range(p, r, 0.0) - s, 1.0, 1e7,
                           xtol=1e-12, rtol=1e-14)
    rel = abs(r_max / root - 1)
    return CheckResult("sensing range vs SINR root", rel < 1e-9, f"rel err = {rel:.2e}")


def check_ofdm(seed: int) -> CheckResult:
    frame = rad.make_frame(1024, 16, 100e6, seed=seed)
    bad = 0
    for ir in (0, 100, 333, 700):
        for idop in (0, 5, 11):
            v = idop / (frame.symbol_duration_s * 16) * 3e8 / (2 * frame.carrier_hz)
            echo = rad.TargetEcho(ir * 3e8 / (2 * 100e6), v)
            est = rad.estimate(frame, rad.simulate_echo(frame, echo))
            bad += (est.range_index, est.doppler_index) != (ir, idop)
    return CheckResult("OFDM noiseless bin recovery", bad == 0, f"{bad} of 12 targets missed")


def check_union_bound(seed: int) -> CheckResult:
    p = NetworkParams()
    worst = -math.inf
    for i, (beta, m) in enumerate([(0.5, 5), (0.9, 20)]):
        q = p.at(beta, m)
        res = cov.ub_acsa(q)
        pts = mc.sample_annulus_points(q.guard_radius_m, res.x_q_m, m, seed, 2 * i)
        centers = np.vstack([[0.0, 0.0], pts])
        area, se = mc.estimate_union_area(centers, res.r_d_m, 10**5, seed, 2 * i + 1)
        worst = max(worst, (area - res.ub_acsa_m2) / max(se, 1e-12))
    return CheckResult("coverage bound vs sampled union", worst <= 3.0,
                       f"max excess = {worst:.2f} sigma")


CHECKS: tuple[Callable[[int], CheckResult], ...] = (
    check_q_inverse, check_marcum, check_marcum_inverse, check_stp, check_annulus,
    check_pair_union, check_coop_range, check_range, check_ofdm, check_union_bound,
)


def run_all(seed: int = 0) -> list[CheckResult]:
    return [check(seed) for check in CHECKS]


def format_table(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}" for r in results]
    return "\n".join(lines)
