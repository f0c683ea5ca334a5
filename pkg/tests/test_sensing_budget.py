import math

import numpy as np
import pytest
from scipy import integrate, stats

from jscuav import montecarlo as mc
from jscuav import sensing_budget as sb
from jscuav.params import NetworkParams, sensing_noise_w


@pytest.mark.parametrize("p", [1e-300, 1e-12, 1e-8, 0.01, 0.5, 0.9, 1 - 1e-12])
def test_q_inverse_matches_scipy(p):
    x = sb.gaussian_q_inv(p)
    assert x == pytest.approx(stats.norm.isf(p), rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 2.0])
def test_q_inverse_domain(p):
    with pytest.raises(ValueError):
        sb.gaussian_q_inv(p)


@pytest.mark.parametrize("r_g, x_q, h", [(10.0, 400.0, 150.0), (1.0, 5.0, 300.0), (90.0, 3000.0, 50.0)])
def test_annulus_expectation_vs_quadrature(r_g, x_q, h):
    val, _ = integrate.quad(lambda r: 2 * r / (x_q**2 - r_g**2) / (r * r + 4 * h * h) ** 2, r_g, x_q,
                            epsrel=1e-13, epsabs=0)
    assert sb.annulus_inverse_quartic_expectation(r_g, x_q, h) == pytest.approx(val, rel=1e-10)


def test_annulus_limits_and_bounds():
    h = 150.0
    # shrinking annulus tends to the point value
    e = sb.annulus_inverse_quartic_expectation(100.0, 100.0 + 1e-9, h)
    assert e == pytest.approx(1 / (100.0**2 + 4 * h * h) ** 2, rel=1e-10)
    # bounded by the integrand at the outer and inner radii
    e = sb.annulus_inverse_quartic_expectation(10.0, 900.0, h)
    assert 1 / (900.0**2 + 4 * h * h) ** 2 < e < 1 / (10.0**2 + 4 * h * h) ** 2


@pytest.mark.parametrize("args", [(10.0, 10.0, 150.0), (10.0, 5.0, 150.0), (0.0, 5.0, 1.0), (1.0, 5.0, 0.0)])
def test_annulus_rejects_degenerate(args):
    with pytest.raises(ValueError):
        sb.annulus_inverse_quartic_expectation(*args)


def test_interference_linear_in_m_and_power():
    p = NetworkParams()
    x_q = 800.0
    assert sb.mutual_interference(p, x_q, 0) == 0.0
    i1 = sb.mutual_interference(p, x_q, 1)
    assert sb.mutual_interference(p, x_q, 37) == pytest.approx(37 * i1, rel=1e-14)
    assert sb.mutual_interference(p.at(0.2), x_q, 5) == pytest.approx(
        0.4 * sb.mutual_interference(p.at(0.5), x_q, 5), rel=1e-14)


@pytest.mark.parametrize("x_q", [250.0, 700.0])
def test_midpoint_interference_vs_sampled_placements(x_q):
    p = NetworkParams().at(0.5, 8)
    exact = sb.mutual_interference(p, x_q)
    mid, se = mc.mc_interference(p, x_q, 200_000, seed=3, worst_case=True)
    assert abs(mid - exact) < 4 * se


def test_midpoint_dominates_only_inside_two_altitudes():
    p = NetworkParams().at(0.5, 8)
    h = p.altitude_m
    # every SU within 2h: the midpoint term is the per-SU maximum
    exact = sb.mutual_interference(p, 2 * h)
    uniform, se = mc.mc_interference(p, 2 * h, 200_000, seed=4, worst_case=False)
    assert uniform <= exact + 3 * se
    # far SUs: an intersection near either UAV gives more than the midpoint
    far = 20 * h
    uniform, se = mc.mc_interference(p, far, 200_000, seed=5, worst_case=False)
    assert uniform > sb.mutual_interference(p, far) + 3 * se


def test_min_sinr_reference_value():
    assert sb.min_sinr(1e-8, 0.99999999, 1024) == pytest.approx(0.12302562, rel=1e-7)


def test_min_sinr_edges():
    assert sb.min_sinr(0.1, 0.1, 16) == 0.0
    assert sb.min_sinr(1e-6, 0.5, 1) == pytest.approx(stats.norm.isf(1e-6) ** 2, rel=1e-10)
    for bad in [(0.0, 0.9, 10), (1e-6, 1.0, 10), (1e-6, 0.9, 0.5)]:
        with pytest.raises(ValueError):
            sb.min_sinr(*bad)


def test_detection_chain_closes():
    for a_f, a_d, g in [(1e-8, 0.99, 1024), (1e-3, 0.9, 64), (1e-6, 0.5, 1)]:
        s = sb.min_sinr(a_f, a_d, g)
        assert float(sb.detection_probability(s, a_f, g)) == pytest.approx(a_d, rel=1e-9)
    assert float(sb.detection_probability(0.0, 1e-4, 100)) == pytest.approx(1e-4, rel=1e-9)
    pd = sb.detection_probability(np.linspace(0, 1, 50), 1e-6, 256)
    assert np.all(np.diff(pd) >= 0) and pd[-1] > pd[0]
    with pytest.raises(ValueError):
        sb.detection_probability(-1.0, 1e-6, 256)


def test_max_range_monotone_and_root():
    p = NetworkParams()
    s = sb.min_sinr(p.max_false_alarm, p.min_detection, p.processing_gain)
    r = [sb.max_sensing_range(p, i, s) for i in (0.0, 1e-12, 1e-10, 1e-8)]
    assert all(a > b for a, b in zip(r, r[1:]))
    assert sb.sensing_sinr_at_range(p, r[2], 1e-10) == pytest.approx(s, rel=1e-12)
    assert sb.max_sensing_range(p.at(0.0), 0.0) == 0.0
    rb = [sb.max_sensing_range(p.at(b), 1e-11, s) for b in (0.1, 0.4, 0.9)]
    assert rb[0] < rb[1] < rb[2]
    with pytest.raises(ValueError):
        sb.max_sensing_range(p, -1.0)


def test_budget_record():
    p = NetworkParams()
    b = sb.compute_budget(p, 800.0)
    assert not b.degenerate
    assert b.thermal_w == sensing_noise_w(p)
    assert b.r_max_m == pytest.approx(sb.max_sensing_range(p, b.i_sen_w))
    d = sb.compute_budget(p, p.guard_radius_m)
    assert d.degenerate and math.isnan(d.r_max_m)
