import numpy as np
import pytest

from gammapolymer.fredholm import (
    RangeError,
    limit_det,
    matched_argument,
    tracy_widom_cdf,
    tracy_widom_direct,
    tw_scale_candidates,
)
from gammapolymer.fredholm.tracy_widom import RANGE, tracy_widom_table

from oracles import airy_oracle


@pytest.mark.parametrize("x", [-8.0, -5.0, -3.5, -1.77, 0.0, 1.0, 3.0, 6.0])
def test_direct_vs_airy_oracle(x):
    assert tracy_widom_direct(x) == pytest.approx(airy_oracle(x), abs=1e-10)


def test_table_vs_airy_oracle():
    xs = np.linspace(-7.9, 5.9, 37)
    ref = np.array([airy_oracle(x) for x in xs])
    assert np.max(np.abs(tracy_widom_cdf(xs) - ref)) < 1e-6


def test_tails():
    assert abs(tracy_widom_cdf(RANGE[1]) - 1) < 1e-8
    assert abs(tracy_widom_cdf(RANGE[0])) < 1e-8


def test_monotone_and_total_mass():
    xs = np.linspace(*RANGE, 1000)
    f = tracy_widom_cdf(xs)
    assert np.all(np.diff(f) >= 0)
    assert f[-1] - f[0] == pytest.approx(1.0, abs=1e-6)
    grid, vals = tracy_widom_table()
    assert np.all(np.diff(vals) >= 0)


def test_truncation_stability():
    for x in np.linspace(-8, 5, 14):
        assert limit_det(2.0, x, M=8.0) == pytest.approx(limit_det(2.0, x, M=12.0), abs=1e-7)


@pytest.mark.parametrize("g_bar", [0.5, 2.0, 8.0])
@pytest.mark.parametrize("r", [-3.0, -1.0, 0.5, 2.0])
def test_scale_covariance(g_bar, r):
    assert limit_det(g_bar, r) == pytest.approx(tracy_widom_cdf(matched_argument(g_bar, r)), abs=1e-8)


@pytest.mark.parametrize("g_bar", [0.5, 8.0])
def test_scale_covariance_fixed_contours(g_bar):
    # Same wedges for every g_bar: the identity then rests on the kernel alone.
    for r in (-2.0, 0.0, 1.5):
        got = limit_det(g_bar, r, scale_contours=False)
        assert got == pytest.approx(tracy_widom_direct(matched_argument(g_bar, r)), abs=1e-6)


def test_large_r_tends_to_one():
    assert limit_det(2.0, 9.0) == pytest.approx(1.0, abs=1e-12)


def test_w_offset_invariance():
    for off in (0.5, 2.0):
        assert limit_det(2.0, -2.0, offset=off) == pytest.approx(limit_det(2.0, -2.0), abs=1e-8)


def test_range_error():
    with pytest.raises(RangeError):
        tracy_widom_cdf(10.5)
    with pytest.raises(RangeError):
        tracy_widom_cdf(np.array([0.0, -16.0]))


def test_scalar_in_scalar_out():
    assert isinstance(tracy_widom_cdf(0.0), float)


def test_scale_candidates():
    c = tw_scale_candidates(16.0)
    assert c["cube_root"] == pytest.approx(2.0)
    assert c["inverse_cube_root"] == pytest.approx(0.5)
    assert c["cube"] == pytest.approx(512.0)
    assert matched_argument(16.0, 3.0) == pytest.approx(1.5)
