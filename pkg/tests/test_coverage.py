import math

import numpy as np
import pytest
from scipy import integrate

from jscuav import coverage as cov
from jscuav import montecarlo as mc
from jscuav.params import NetworkParams


def test_ground_radius():
    assert cov.ground_radius(500.0, 150.0) == pytest.approx(476.97, abs=0.01)
    assert cov.ground_radius(150.0, 150.0) == 0.0
    assert cov.ground_radius(100.0, 150.0) == 0.0
    with pytest.raises(ValueError):
        cov.ground_radius(-1.0, 150.0)


def test_arccot_range():
    assert cov.arccot(1.0) == pytest.approx(math.pi / 4)
    assert cov.arccot(-1.0) == pytest.approx(3 * math.pi / 4)
    assert cov.arccot(0.0) == pytest.approx(math.pi / 2)


def test_overlap_area():
    assert cov.overlap_area(0.0, 1.0) == pytest.approx(math.pi)
    assert cov.overlap_area(1.0, 1.0) == pytest.approx(2 * math.pi / 3 - math.sqrt(3) / 2)
    assert cov.overlap_area(1.0, 1.0) == pytest.approx(1.2284, abs=1e-4)
    assert cov.overlap_area(2.0, 1.0) == 0.0
    assert cov.overlap_area(5.0, 1.0) == 0.0
    assert cov.overlap_area(1.0, 0.0) == 0.0
    np.testing.assert_allclose(cov.overlap_area(np.array([0.0, 3.0]), 1.0), [math.pi, 0.0])


def test_overlap_vs_sampling():
    area, se = mc.estimate_union_area([[0.0, 0.0], [1.0, 0.0]], 1.0, 10**6, seed=5)
    assert abs((2 * math.pi - area) - cov.overlap_area(1.0, 1.0)) < 4 * se


def _quad(x_q, r_g, r_d):
    f = lambda r: 2 * r / (x_q**2 - r_g**2) * (2 * math.pi * r_d**2 - cov.overlap_area(r, r_d))
    pts = [2 * r_d] if r_g < 2 * r_d < x_q else None
    return integrate.quad(f, r_g, x_q, points=pts, epsrel=1e-13, epsabs=0, limit=400)[0]


@pytest.mark.parametrize("x_q, r_g, r_d, branch", [
    (800.0, 10.0, 476.97, cov.Branch.F1),
    (953.0, 10.0, 476.97, cov.Branch.F1),
    (2000.0, 10.0, 476.97, cov.Branch.F2),
    (954.0, 10.0, 476.97, cov.Branch.F2),
    (300.0, 50.0, 30.0, cov.Branch.F2),
])
def test_pair_union_branches_vs_quadrature(x_q, r_g, r_d, branch):
    val, b = cov._pair_union(x_q, r_g, r_d)
    assert b is branch
    assert val == pytest.approx(_quad(x_q, r_g, r_d), rel=1e-10)


def test_pair_union_continuity_at_switch():
    r_d = 400.0
    lo = cov.expected_pair_union(2 * r_d * (1 - 1e-12), 10.0, r_d)
    hi = cov.expected_pair_union(2 * r_d, 10.0, r_d)
    assert lo == pytest.approx(hi, rel=1e-9)


def test_pair_union_far_apart_and_degenerate():
    assert cov.expected_pair_union(500.0, 100.0, 40.0) == pytest.approx(2 * math.pi * 1600.0)
    assert cov.expected_pair_union(500.0, 10.0, 0.0) == 0.0
    with pytest.raises(ValueError):
        cov.expected_pair_union(10.0, 10.0, 5.0)


def test_pair_union_bounds():
    for x_q, r_d in [(300.0, 476.0), (1000.0, 476.0), (5000.0, 100.0)]:
        e = cov.expected_pair_union(x_q, 10.0, r_d)
        assert math.pi * r_d**2 <= e <= 2 * math.pi * r_d**2


def test_ub_acsa_bounds_and_single_su():
    for beta, m in [(0.5, 1), (0.3, 20), (0.8, 150)]:
        res = cov.ub_acsa(NetworkParams().at(beta, m))
        a = math.pi * res.r_d_m**2
        assert a <= res.ub_acsa_m2 <= (m + 1) * a
        if m == 1:
            assert res.ub_acsa_m2 == res.e_s_m2


def test_ub_acsa_degenerate_when_no_cooperation():
    res = cov.ub_acsa(NetworkParams(data_rate_bps=1e12).at(0.5, 200))
    assert res.branch is cov.Branch.DEGENERATE
    assert res.ub_acsa_m2 == 0.0 and math.isnan(res.i_sen_w)


def test_ub_acsa_types_are_builtin_floats():
    res = cov.ub_acsa(NetworkParams())
    assert all(type(v) is float for v in (res.r_d_m, res.e_s_m2, res.ub_acsa_m2, res.x_q_m))
