"""GUE Tracy-Widom distribution from the cubic contour kernel.

``F_GUE(x) = det(I + K)`` on the left wedge, where ``K`` is the limit
kernel with ``g_bar = 2`` and ``r = x``.  Values on ``[-15, 10]`` come from
a monotone cubic Hermite interpolant of a table built once per process.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from ..specfn import DomainError
from .contours import wedge_v, wedge_w
from .kernels import limit_spec
from .nystrom import nystrom_det

RANGE = (-15.0, 10.0)
TABLE_STEP = 0.02
DEFAULT_M = 12.0
DEFAULT_ORDER = 48
W_OFFSET = 1.0
SPLIT = 0.0  # a table node with F > 1/2


class RangeError(DomainError):
    pass


@lru_cache(maxsize=16)
def _wedge_rules(M: float, order: int, offset: float):
    return wedge_v(M).rule(order), wedge_w(M, offset).rule(order)


def limit_det(g_bar: float, r: float, M: float = DEFAULT_M, order: int = DEFAULT_ORDER,
              offset: float = W_OFFSET, scale_contours: bool = True) -> float:
    """``det(I + K)`` for the cubic kernel on the truncated wedges.

    With ``scale_contours`` the wedges (size ``M``, offset ``offset``) are
    shrunk by ``(2/g_bar)^{1/3}`` so the nodes sample the integrand the way
    they do at ``g_bar = 2``; this is a contour deformation and does not
    change the determinant, only the quadrature error for large ``g_bar``.
    """
    k = (2.0 / g_bar) ** (1.0 / 3.0) if scale_contours else 1.0
    v_rule, w_rule = _wedge_rules(float(M) * k, int(order), float(offset) * k)
    return nystrom_det(limit_spec(g_bar, r, w_rule), v_rule)


def tracy_widom_direct(x: float, M: float = DEFAULT_M, order: int = DEFAULT_ORDER) -> float:
    """``F_GUE(x)`` by one Nystrom determinant (no table, no range check)."""
    return limit_det(2.0, float(x), M, order)


def _monotone_slopes(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Fourth-order difference slopes, limited so the Hermite cubic stays monotone.

    The limiter (slope in ``[0, 3 min(adjacent secants)]``) is the
    Fritsch-Carlson sufficient condition; it only binds where the table is
    flat to rounding, so smooth regions keep ``O(h^4)`` accuracy.
    """
    h = x[1] - x[0]
    d = np.gradient(y, h, edge_order=2)
    d[2:-2] = (y[:-4] - 8.0 * y[1:-3] + 8.0 * y[3:-1] - y[4:]) / (12.0 * h)
    sec = np.diff(y) / h
    bound = np.minimum(np.concatenate([[sec[0]], sec]), np.concatenate([sec, [sec[-1]]]))
    return np.clip(d, 0.0, 3.0 * bound)


@lru_cache(maxsize=4)
def _table(step: float, M: float, order: int):
    lo, hi = RANGE
    count = int(round((hi - lo) / step)) + 1
    x = np.linspace(lo, hi, count)
    y = np.array([tracy_widom_direct(xi, M, order) for xi in x])
    # Quadrature noise is ~1e-14; clip it so the table is a CDF.
    y = np.maximum.accumulate(np.clip(y, 0.0, 1.0))
    slopes = _monotone_slopes(x, y)
    # Above SPLIT interpolate 1 - F: values near 1 would otherwise wiggle by an ulp.
    k = int(np.searchsorted(x, SPLIT))
    lower = CubicHermiteSpline(x[: k + 1], y[: k + 1], slopes[: k + 1])
    upper = CubicHermiteSpline(x[k:], 1.0 - y[k:], -slopes[k:])
    return x, y, (lower, upper, y[k])


def _evaluate(arr: np.ndarray, pieces) -> np.ndarray:
    lower, upper, y_split = pieces
    left = arr < SPLIT
    out = np.empty_like(arr)
    out[left] = np.clip(lower(arr[left]), 0.0, y_split)
    out[~left] = 1.0 - np.clip(upper(arr[~left]), 0.0, 1.0 - y_split)
    return out


def tracy_widom_table(step: float = TABLE_STEP, M: float = DEFAULT_M, order: int = DEFAULT_ORDER):
    """Grid and values behind ``tracy_widom_cdf`` (built on first use)."""
    x, y, _ = _table(step, float(M), int(order))
    return x.copy(), y.copy()


def tracy_widom_cdf(x, M: float = DEFAULT_M, order: int = DEFAULT_ORDER):
    """``F_GUE(x)`` for ``x`` in ``[-15, 10]``; scalars in, scalar out.

    Raises
    ------
    RangeError
        If any ``x`` lies outside the tabulated range.
    """
    arr = np.asarray(x, dtype=float)
    lo, hi = RANGE
    if np.any(~((arr >= lo) & (arr <= hi))):
        raise RangeError(f"tracy_widom_cdf is tabulated on [{lo}, {hi}]")
    _, _, pieces = _table(TABLE_STEP, float(M), int(order))
    out = _evaluate(np.atleast_1d(arr), pieces)
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def tracy_widom_mean(M: float = DEFAULT_M, order: int = DEFAULT_ORDER, nodes: int = 24) -> float:
    """Mean of ``F_GUE`` as ``hi F(hi) - lo F(lo) - int_lo^hi F``, Gauss-Legendre on panels.

    Uses direct determinants, not the table, so it doubles as an
    independent check of the interpolant.
    """
    lo, hi = RANGE
    edges = [lo, -8.0, -5.0, -3.0, -1.0, 1.0, 3.0, 6.0, hi]
    gx, gw = np.polynomial.legendre.leggauss(nodes)
    integral = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        xs = 0.5 * (b - a) * gx + 0.5 * (a + b)
        fs = np.array([tracy_widom_direct(xi, M, order) for xi in xs])
        integral += 0.5 * (b - a) * float(np.dot(gw, fs))
    return hi * tracy_widom_direct(hi, M, order) - lo * tracy_widom_direct(lo, M, order) - integral


def tw_scale_candidates(g_bar: float) -> dict[str, float]:
    """Candidate factors ``sigma`` with ``(ln Z - n mu)/n^{1/3} * sigma ~ F_GUE``."""
    q = g_bar / 2.0
    return {
        "cube_root": q ** (1.0 / 3.0),
        "inverse_cube_root": q ** (-1.0 / 3.0),
        "cube": q**3,
    }


def matched_argument(g_bar: float, r: float) -> float:
    """``(2/g_bar)^{1/3} r``: the F_GUE argument the cubic kernel reduces to."""
    return (2.0 / g_bar) ** (1.0 / 3.0) * r


__all__ = [
    "RANGE", "RangeError", "limit_det", "tracy_widom_direct", "tracy_widom_cdf",
    "tracy_widom_table", "tracy_widom_mean", "tw_scale_candidates", "matched_argument",
]
