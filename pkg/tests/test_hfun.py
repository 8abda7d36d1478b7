import math

import mpmath as mp

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mlfineq import hfun

from oracles import FROZEN, F_h, h_mp

# limit of h(x) - x^2/log 2 + x, from the Stirling expansion of F
GAP_LIMIT = 0.5 + math.log(2) / 6


def test_F_examples():
    assert hfun.F_of(1, 1) == pytest.approx(0, abs=1e-15)
    assert hfun.F_of(2, 1e-10) < -20
    assert abs(hfun.F_of(2, 4.37228)) < 1e-4


@pytest.mark.parametrize("x,y", [(0.3, 0.05), (1.0, 3.0), (2.5, 19.9), (2.5, 20.1), (30.0, 500.0), (200.0, 6e4)])
def test_F_matches_mpmath(x, y):
    assert hfun.F_of(x, y) == pytest.approx(float(F_h(x, y)), rel=1e-12, abs=1e-13)


def test_solve_h_anchors():
    assert hfun.solve_h(1).h == pytest.approx(1.0, abs=1e-10)
    assert hfun.solve_h(2).h == pytest.approx(4.37228, abs=5e-5)
    assert hfun.solve_h(0).h == 0.0


@pytest.mark.parametrize("x", [0.5, 1.5, 3, 6])
def test_solve_h_frozen(x):
    assert hfun.solve_h(x).h == pytest.approx(FROZEN[f"h({x})"], rel=1e-11)


@pytest.mark.parametrize("x", [1e-6, 0.01, 0.2, 4.0, 17.0, 80.0])
def test_solve_h_live_oracle(x):
    s = hfun.solve_h(x)
    assert abs(s.residual) <= max(1e-12, hfun._noise_floor(x, s.h))
    assert s.h == pytest.approx(float(h_mp(x)), rel=1e-10)


def test_solve_h_validation():
    with pytest.raises(ValueError):
        hfun.solve_h(-1)
    with pytest.raises(ValueError):
        hfun.solve_h(1, tol=0)


def test_h_prime():
    assert hfun.h_prime(1) == pytest.approx(2.0, abs=1e-6)
    assert hfun.h_prime(1e-4) == pytest.approx(math.sqrt(2) - 1, abs=1e-4)
    assert hfun.h_prime(0) == math.sqrt(2) - 1
    d = 1e-4
    fd = (hfun.h(3 + d, 1e-15) - hfun.h(3 - d, 1e-15)) / (2 * d)
    assert hfun.h_prime(3) == pytest.approx(fd, rel=1e-6)


def test_h_second_matches_finite_difference():
    d = 1e-3
    fd = (hfun.h(2 + d, 1e-15) - 2 * hfun.h(2, 1e-15) + hfun.h(2 - d, 1e-15)) / d ** 2
    assert hfun.h_second(2) == pytest.approx(fd, rel=1e-5)


def test_curvature_formula():
    c = hfun.h_curvature(1.0, 1.0, 2.0)
    from scipy.special import polygamma
    tri = lambda t: float(polygamma(1, t))
    assert c.H_value == pytest.approx(18 * tri(2) - 4 * tri(1) - 16 * tri(3))


def test_asymptote_gap_trend():
    gaps = [hfun.asymptote_gap(x) for x in (50, 100, 200, 1000)]
    assert all(g1 < g2 for g1, g2 in zip(gaps, gaps[1:]))
    # extended-precision solve at x = 200
    with mp.workdps(40):
        ref200 = float(h_mp(200) - mp.mpf(200) ** 2 / mp.log(2) + 200)
    # h(200) is about 5.8e4 and is resolved to the rounding level of F there
    assert gaps[2] == pytest.approx(ref200, abs=1e-7)
    assert gaps[3] == pytest.approx(GAP_LIMIT, abs=1e-5)
    with pytest.raises(ValueError):
        hfun.asymptote_gap(1.5)


def test_quadratic_growth():
    ratios = [hfun.h(x) / x ** 2 for x in (10, 20, 40, 80)]
    assert all(r1 < r2 for r1, r2 in zip(ratios, ratios[1:]))
    assert ratios[-1] == pytest.approx(1 / math.log(2), rel=0.02)


def test_monotone_and_convex_on_grid():
    xs = np.linspace(1, 100, 120)
    hs = np.array([hfun.h(x) for x in xs])
    assert np.all(np.diff(hs) > 0)
    assert np.all(np.diff(hs, 2) >= 0)
    small = np.array([hfun.h(x) for x in np.linspace(0.01, 1, 50)])
    assert np.all(np.diff(small) > 0)


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-3, 150.0))
def test_root_properties(x):
    s = hfun.solve_h(x)
    assert s.h > 0
    assert abs(s.residual) <= max(1e-12, hfun._noise_floor(x, s.h))
    assert hfun.dF_dy(x, s.h) > 0
    assert hfun.h_prime(x) > 0
