"""Saddle-point constants for the large-n behaviour of ``ln Z``.

With ``H(z) = ln Gamma(z) - c ln Gamma(z + gamma) + mu z``, the critical point
``z*`` solves ``H''(z*) = 0``, ``mu = c psi(z* + gamma) - psi(z*)`` makes it a
double critical point, and ``g_bar = -H'''(z*)`` sets the cube-root scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfn import DomainError, digamma_difference, log_gamma_complex, polygamma

BRACKET = (1e-10, 1e3)
_SCAN_POINTS = 400


class NoCriticalPointError(RuntimeError):
    """``H''`` has no sign change on the search bracket."""


@dataclass(frozen=True)
class AsymptoticConstants:
    c: float
    gamma: float
    z_star: float
    mu: float
    g_bar: float
    c_n_tilde: float | None = None

    def tw_scale(self) -> float:
        """Factor ``(2 / g_bar)^{1/3}`` mapping the fluctuation variable to F_GUE."""
        return (2.0 / self.g_bar) ** (1.0 / 3.0)


def H_derivative(order: int, z, c: float, gamma: float, mu: float = 0.0):
    """``H`` (order 0) and its first three derivatives at real ``z > 0``."""
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr <= 0.0):
        raise DomainError("H_derivative: need z > 0")
    if order == 0:
        out = log_gamma_complex(z_arr).real - c * log_gamma_complex(z_arr + gamma).real + mu * z_arr
    elif order == 1:
        out = polygamma(0, z_arr) - c * polygamma(0, z_arr + gamma) + mu
    elif order == 2:
        out = polygamma(1, z_arr) - c * polygamma(1, z_arr + gamma)
    elif order == 3:
        out = polygamma(2, z_arr) - c * polygamma(2, z_arr + gamma)
    else:
        raise DomainError(f"H_derivative: unsupported order {order}")
    return float(out) if np.ndim(z) == 0 else out


def H_complex(z, c: float, gamma: float, mu: float):
    """``H`` at complex arguments (principal log-gamma branches)."""
    z = np.asarray(z, dtype=complex)
    return log_gamma_complex(z) - c * log_gamma_complex(z + gamma) + mu * z


def _h2(z, c, gamma):
    return H_derivative(2, z, c, gamma)


def sign_changes(c: float, gamma: float, points: int = _SCAN_POINTS) -> np.ndarray:
    """Left ends of the grid cells on which ``H''`` changes sign."""
    grid = np.geomspace(*BRACKET, points)
    vals = _h2(grid, c, gamma)
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    return grid[idx], grid[idx + 1]


def critical_point(c: float, gamma: float, rtol: float = 1e-12) -> float:
    if not c > 1.0:
        raise DomainError("need c > 1")
    if not gamma > 0.0:
        raise DomainError("need gamma > 0")
    lo, hi = sign_changes(c, gamma)
    if lo.size == 0:
        raise NoCriticalPointError(f"H'' has no sign change on {BRACKET} for c={c}, gamma={gamma}")
    a, b = float(lo[0]), float(hi[0])
    fa = _h2(a, c, gamma)
    while b - a > rtol * b:
        mid = 0.5 * (a + b)
        if mid in (a, b):
            break
        fm = _h2(mid, c, gamma)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (fa > 0.0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def critical_constants(c: float, gamma: float, n: int | None = None) -> AsymptoticConstants:
    """``z*``, ``mu`` and ``g_bar`` for aspect ``c > 1`` and shape ``gamma``.

    If ``n`` is given, ``c_n_tilde = ceil(c n) / n`` is recorded as well;
    the constants themselves are always those of the limit ``c``.
    """
    z = critical_point(c, gamma)
    mu = c * polygamma(0, z + gamma) - polygamma(0, z)
    g_bar = c * polygamma(2, z + gamma) - polygamma(2, z)
    c_n = None if n is None else math.ceil(c * n) / n
    return AsymptoticConstants(c=c, gamma=gamma, z_star=z, mu=mu, g_bar=g_bar, c_n_tilde=c_n)


def argmin_mu(c: float, gamma: float, lo: float | None = None, hi: float | None = None, tol: float = 1e-13) -> float:
    """Golden-section minimiser of ``f(z) = c psi(z + gamma) - psi(z)`` over ``z > 0``.

    Independent of the ``H''`` root finder.  Each step only needs the sign
    of ``f(x1) - f(x2)``, which is formed from ``digamma_difference`` so the
    search keeps resolving the minimiser far below the ``sqrt(eps)`` limit
    of comparing rounded function values.  The default bracket is the grid
    cell around the sign change widened by a factor 10 each way.
    """
    if lo is None or hi is None:
        left, right = sign_changes(c, gamma)
        if left.size == 0:
            raise NoCriticalPointError("no interior minimum on the bracket")
        lo, hi = left[0] / 10.0, right[0] * 10.0

    def f_gap(x1, x2):
        return c * digamma_difference(x1 + gamma, x2 + gamma) - digamma_difference(x1, x2)

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    while b - a > tol * (abs(a) + abs(b)):
        if f_gap(x1, x2) <= 0.0:
            b, x2 = x2, x1
            x1 = b - invphi * (b - a)
        else:
            a, x1 = x1, x2
            x2 = a + invphi * (b - a)
    return 0.5 * (a + b)


def small_gamma_limits(c: float) -> dict[str, float]:
    """Leading small-gamma behaviour of the rescaled constants.

    ``z*/gamma -> 1/(sqrt c - 1)``, ``gamma mu -> -(sqrt c - 1)^2`` and
    ``gamma^3 g_bar -> 2 (sqrt c - 1)^3 (1 - c^{-1/2})``; the last follows
    from ``psi_2(x) ~ -2/x^3`` at the rescaled critical point.
    """
    s = math.sqrt(c) - 1.0
    return {
        "z_tilde": 1.0 / s,
        "mu_tilde": -s * s,
        "g_tilde": 2.0 * s**3 * (1.0 - 1.0 / math.sqrt(c)),
    }


def fpp_consistency(alpha: float, gamma: float = 1e-4) -> float:
    """``-gamma mu`` at small ``gamma`` with ``c = 1 + alpha``; tends to ``(sqrt(1+alpha) - 1)^2``."""
    if not alpha > 0.0:
        raise DomainError("need alpha > 0")
    return -gamma * critical_constants(1.0 + alpha, gamma).mu
