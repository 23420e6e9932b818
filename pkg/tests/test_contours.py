import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gammapolymer.asymptotics import critical_constants
from gammapolymer.fredholm import CONTOUR_KINDS, admissible, build_contour, circle, prelimit_contours, wedge_v, wedge_w
from gammapolymer.fredholm.contours import TWO_PI_I, cv_descent, cw_descent, polygon, reverse, vertical_line
from gammapolymer.specfn import DomainError


def winding(contour, z0, order=48):
    rule = contour.rule(order)
    return rule.integrate(1.0 / (rule.nodes - z0)) / TWO_PI_I


def test_circle_winding_and_exactness():
    c = build_contour("circle", delta=0.1)
    assert c.closed and c.gaps() < 1e-15
    assert abs(winding(c, 0.0) - 1.0) < 1e-10
    assert abs(c.rule(48).integrate(1.0)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 5.0), st.floats(-3, 3), st.floats(-3, 3), st.floats(0.0, 0.9))
def test_circle_cauchy_property(radius, cx, cy, frac):
    center = complex(cx, cy)
    c = circle(radius, center)
    inside = center + frac * radius * 0.5
    outside = center + 2.5 * radius
    assert abs(winding(c, inside) - 1.0) < 1e-10
    assert abs(winding(c, outside)) < 1e-10
    assert abs(c.rule(32).integrate(1.0)) < 1e-12 * max(1.0, radius)


def test_wedge_v_geometry():
    c = wedge_v(3.0)
    ends = [c.pieces[0].start(), c.pieces[-1].end()]
    assert abs(ends[0] - 3.0 * np.exp(-2j * math.pi / 3)) < 1e-14
    assert abs(ends[1] - 3.0 * np.exp(2j * math.pi / 3)) < 1e-14
    assert min(abs(c.sample())) < 1e-14  # vertex at 0
    assert c.gaps() < 1e-14 and not c.closed and c.truncation == 3.0


def test_wedge_w_geometry():
    c = wedge_w(4.0, offset=0.7)
    ends = [c.pieces[0].start(), c.pieces[-1].end()]
    assert abs(ends[0] - (0.7 + 4.0 * np.exp(-1j * math.pi / 3))) < 1e-14
    assert abs(ends[1] - (0.7 + 4.0 * np.exp(1j * math.pi / 3))) < 1e-14
    assert np.all(c.sample().real >= 0.7 - 1e-14)


def test_wedges_oriented_upward():
    for c in (wedge_v(5.0), wedge_w(5.0), vertical_line(0.2, 10.0)):
        z = c.sample()
        assert z[0].imag < 0 < z[-1].imag


def test_cv_descent_kite_case():
    c, gamma = 2.0, 0.1
    z = critical_constants(c, gamma).z_star
    cv = cv_descent(z, c, gamma)
    assert cv.closed and cv.gaps() < 1e-14
    leg = 2 * gamma / (c - 1)
    p_up = cv.pieces[0].end()
    assert cv.pieces[0].start() == pytest.approx(z)
    assert abs(p_up - z) == pytest.approx(leg)
    assert np.angle(p_up - z) == pytest.approx(2 * math.pi / 3)
    assert abs(winding(cv, 0.0) - 1.0) < 1e-10
    assert abs(winding(cv, z - 0.01) - 1.0) < 1e-10


def test_cv_descent_arc_case():
    c, gamma = 4.0, 0.1
    z = critical_constants(c, gamma).z_star
    cv = cv_descent(z, c, gamma)
    leg = 6 * gamma / (5 * (math.sqrt(c) - 1))
    assert abs(cv.pieces[0].end() - z) == pytest.approx(leg)
    assert cv.gaps() < 1e-14
    assert abs(winding(cv, z - 0.5 * leg) - 1.0) < 1e-10


def test_cw_descent_vertex_offset():
    z, gamma, n = 0.5, 0.3, 8
    cw = cw_descent(z, gamma, n, leg=0.4, T=3.0)
    pts = cw.sample()
    assert pts.real.min() == pytest.approx(z + gamma * n ** (-1 / 3), abs=1e-12)
    assert cw.gaps() < 1e-14


@pytest.mark.parametrize("n", [2, 10, 50, 100, 400])
def test_prelimit_contours_admissible(n):
    k = critical_constants(2.0, 0.3)
    pc = prelimit_contours(k.z_star, 0.3, n, T=3.0)
    assert admissible(pc.cv, pc.cw)
    assert abs(winding(pc.cv, 0.0) - 1.0) < 1e-10
    assert pc.cv.gaps() < 1e-14 and pc.cw.gaps() < 1e-14


def test_admissible_rejects_crossing():
    cv = circle(0.25)
    assert not admissible(cv, vertical_line(0.2, 5.0))
    assert not admissible(cv, vertical_line(1.1, 5.0))
    assert admissible(cv, vertical_line(0.55, 5.0))


def test_reverse_negates_integrals():
    c = polygon([0, 1, 1 + 1j], closed=False)
    f = lambda z: np.exp(z)  # noqa: E731
    r1, r2 = c.rule(16), reverse(c).rule(16)
    assert r1.integrate(f(r1.nodes)) == pytest.approx(-r2.integrate(f(r2.nodes)), rel=1e-14)
    assert r1.integrate(f(r1.nodes)) == pytest.approx(np.exp(1 + 1j) - 1, rel=1e-14)


def test_build_contour_kinds():
    params = {
        "circle": {"delta": 0.2},
        "line": {"x": 0.3, "T": 10.0},
        "cv_descent": {"z_star": 0.5, "c": 2.0, "gamma": 0.3},
        "cw_descent": {"z_star": 0.5, "gamma": 0.3, "n": 10, "leg": 0.3, "T": 3.0},
        "wedge_v": {"M": 5.0},
        "wedge_w": {"M": 5.0},
        "cv_prelimit": {"z_star": 0.55, "gamma": 0.3, "n": 10},
        "cw_prelimit": {"z_star": 0.55, "gamma": 0.3, "n": 10},
    }
    assert set(params) == set(CONTOUR_KINDS)
    for kind, p in params.items():
        c = build_contour(kind, **p)
        assert len(c.rule(8)) > 0


def test_build_contour_errors():
    with pytest.raises(DomainError):
        build_contour("spiral")
    with pytest.raises(DomainError):
        build_contour("circle")
    with pytest.raises(DomainError):
        circle(1.0).rule(3)
