"""``det(I + K_{n,r})`` on steepest-descent contours through the critical point."""

from __future__ import annotations

from ..asymptotics import AsymptoticConstants
from ..specfn import DomainError
from .contours import admissible, prelimit_contours
from .kernels import prelimit_spec
from .nystrom import nystrom_det


def prelimit_truncation(c: float, n: int) -> float:
    """Tail height for ``C^w``: the integrand decays like ``exp(-n (c-1) pi |y| / 2)``."""
    return max(3.0, 40.0 / (n * (c - 1.0)))


def prelimit_det(constants: AsymptoticConstants, n: int, r: float, order: int = 48, T: float | None = None) -> float:
    """Pre-limit determinant at size ``n`` and fluctuation coordinate ``r``.

    Equals ``E exp(-s Z)`` for the Gamma(gamma) polymer with
    ``h = ceil(c n)`` and ``s = exp(-n mu - r n^{1/3})``.
    """
    if T is None:
        T = prelimit_truncation(constants.c, n)
    pc = prelimit_contours(constants.z_star, constants.gamma, n, T)
    if not admissible(pc.cv, pc.cw):
        raise DomainError("default pre-limit contours are not admissible for these constants")
    kernel = prelimit_spec(constants, n, r, pc.cw.rule(order))
    return nystrom_det(kernel, pc.cv, order)
