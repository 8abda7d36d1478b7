import math

import numpy as np
import pytest

from mlfineq import hfun, zeros
from mlfineq.core import Params
from mlfineq.errors import ContourThroughZero
from mlfineq.zeros import Rect

from oracles import FROZEN

PI2 = math.pi ** 2


def test_rect_validation():
    with pytest.raises(ValueError):
        Rect(1, 0, -1, 1)
    assert Rect(-2, 1, -3, 3).is_symmetric()
    assert not Rect(-2, 1, -3, 4).is_symmetric()


def test_sinh_zeros():
    found = zeros.real_zero_scan(Params(2, 2), -160, 0)
    locs = [z.location for z in found]
    expected = sorted(-(n * n) * PI2 for n in range(1, 5))
    assert len(locs) == 4
    for got, want in zip(locs, expected):
        assert got == pytest.approx(want, rel=1e-8)
    assert all(z.multiplicity == 1 for z in found)
    assert all(z.width <= 1e-10 * max(1, abs(z.location)) for z in found)


def test_double_zero_of_e23():
    found = zeros.real_zero_scan(Params(2, 3), -45, -35)
    assert len(found) == 1
    assert found[0].multiplicity == 2
    assert found[0].location == pytest.approx(-4 * PI2, rel=1e-6)


def test_no_real_zeros():
    assert zeros.real_zero_scan(Params(2, 4), -100, 0) == []
    assert zeros.real_zero_scan(Params(1, 1), -50, 0) == []


def test_single_zero_of_e1_half():
    found = zeros.real_zero_scan(Params(1, 0.5), -20, 0)
    assert len(found) == 1
    assert found[0].location == pytest.approx(FROZEN["zero(1,0.5)"], rel=1e-9)


def test_first_negative_zero():
    assert zeros.first_negative_zero(Params(2, 2), -50) == pytest.approx(-PI2, rel=1e-9)
    assert zeros.first_negative_zero(Params(1, 1), -50) is None
    b = zeros.first_negative_zero(Params(1.5, 1.5), -50)
    assert b == pytest.approx(FROZEN["zero(1.5,1.5)"], rel=1e-9)
    with pytest.raises(ValueError):
        zeros.first_negative_zero(Params(1, 1), 1)


def test_scan_validation():
    with pytest.raises(ValueError):
        zeros.real_zero_scan(Params(1, 1), 0, -1)
    with pytest.raises(ValueError):
        zeros.real_zero_scan(Params(1, 1), -1, 0, step_hint=-1)


def test_default_step_clamped():
    assert zeros.default_step(0.5, -100) == 0.25
    assert 1e-3 <= zeros.default_step(2.0, -1e6) <= 1.0


def test_rect_counts():
    assert zeros.count_zeros_rect(Params(2, 3), Rect(-45, -35, -1, 1)) == 2
    assert zeros.count_zeros_rect(Params(1, 1), Rect(-10, 10, -10, 10)) == 0
    n = zeros.count_zeros_rect(Params(2, 4), Rect(-120, -1, -60, 60))
    assert n == 2
    with pytest.raises(ValueError):
        zeros.count_zeros_rect(Params(1, 1), Rect(-1, 1, -1, 1), n_boundary=10)


def test_count_matches_real_scan_for_real_rooted_cases():
    for beta in (1.0, 2.0, 2.5, 3.0):
        p = Params(2, beta)
        r = Rect(-300, -1, -5, 5)
        report = zeros.classify_zero_reality(p, r)
        assert report.rect_count == report.real_count
        assert report.nonreal_count == 0


def test_count_additivity():
    p = Params(2, 3.5)
    whole = zeros.count_zeros_rect(p, Rect(-200, -1, -80, 80))
    upper = zeros.count_zeros_rect(p, Rect(-200, -1, 0.5, 80))
    lower = zeros.count_zeros_rect(p, Rect(-200, -1, -80, -0.5))
    middle = zeros.count_zeros_rect(p, Rect(-200, -1, -0.5, 0.5))
    assert whole == upper + lower + middle == 4
    assert upper == lower


def test_contour_through_zero():
    with pytest.raises(ContourThroughZero):
        zeros.count_zeros_rect(Params(2, 2), Rect(-PI2, 1, -1, 1))


def test_classify_examples():
    r = zeros.classify_zero_reality(Params(2, 3.5), Rect(-200, -1, -80, 80))
    assert r.nonreal_count >= 2 and r.nonreal_count % 2 == 0
    r = zeros.classify_zero_reality(Params(2, 2.5), Rect(-100, -1, -10, 10))
    assert r.nonreal_count == 0 and r.rect_count == 2
    beta = hfun.h(3) + 0.5
    r = zeros.classify_zero_reality(Params(3, beta), Rect(-5000, 1500, -5000, 5000))
    assert r.nonreal_count >= 2
    with pytest.raises(ValueError):
        zeros.classify_zero_reality(Params(2, 2), Rect(-10, -1, -1, 2))


def test_complex_zero_of_e24():
    roots = zeros.find_complex_zeros(Params(2, 4), Rect(-120, -1, -60, 60))
    ref = FROZEN["zero(2,4)"]
    assert len(roots) == 2
    assert min(abs(z - ref) for z in roots) < 1e-9 * abs(ref)
    assert min(abs(z - ref.conjugate()) for z in roots) < 1e-9 * abs(ref)


def test_nonreal_zero_spacing():
    # zeros of E_{2,b}, 3 < b < 4, approach -4 pi^2 n^2
    roots = zeros.find_complex_zeros(Params(2, 3.5), Rect(-700, -1, 0.5, 200), n_grid=96)
    assert len(roots) == 4
    dev = [abs(z / (-4 * PI2 * n * n) - 1) for n, z in enumerate(roots, 1)]
    assert all(d1 > d2 for d1, d2 in zip(dev, dev[1:]))
    assert dev[-1] < 0.25


def test_newton_zero():
    z = zeros.newton_zero(Params(2, 2), -9.5 + 0.3j)
    assert z == pytest.approx(-PI2, abs=1e-10)
