"""Independent reference implementations shared by several test files."""

import numpy as np
from scipy import special


def airy_oracle(x, nodes=80, length=16.0):
    """F_GUE(x) = det(I - K_Airy) on L^2(x, inf), Gauss-Legendre on [x, x + length]."""
    t, w = np.polynomial.legendre.leggauss(nodes)
    u = x + 0.5 * length * (t + 1)
    w = 0.5 * length * w
    ai, aip, _, _ = special.airy(u)
    du = u[:, None] - u[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        K = (ai[:, None] * aip[None, :] - aip[:, None] * ai[None, :]) / du
    K[np.diag_indices(nodes)] = aip**2 - u * ai**2
    sw = np.sqrt(w)
    return float(np.linalg.det(np.eye(nodes) - sw[:, None] * K * sw[None, :]))


def airy_mean(lo=-12.0, hi=8.0, nodes=200):
    """Mean of F_GUE as ``hi - int_lo^hi F`` from the Airy-kernel determinant."""
    t, w = np.polynomial.legendre.leggauss(nodes)
    x = lo + 0.5 * (hi - lo) * (t + 1)
    f = np.array([airy_oracle(xi) for xi in x])
    return hi - 0.5 * (hi - lo) * float(np.dot(w, f))
