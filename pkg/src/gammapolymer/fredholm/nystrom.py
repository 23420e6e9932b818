"""Nystrom discretisation of ``det(I + K)`` on ``L^2(C^v, dv / 2 pi i)``."""

from __future__ import annotations

import numpy as np
import scipy.linalg

from ..specfn import DomainError
from .contours import Contour, QuadratureRule
from .kernels import KernelSpec

IMAG_TOL = 1e-8


class ImaginaryResidueError(ArithmeticError):
    """The determinant of a real quantity came out with a sizeable imaginary part."""


class NumericalError(ArithmeticError):
    pass


def _lu_det(mat: np.ndarray) -> complex:
    lu, piv = scipy.linalg.lu_factor(mat, check_finite=False)
    sign = (-1.0) ** np.count_nonzero(piv != np.arange(piv.size))
    return complex(sign * np.prod(np.diag(lu)))


def nystrom_matrix(kernel: KernelSpec, v_rule: QuadratureRule) -> np.ndarray:
    """``K(v_j, v_k) p_k / 2 pi i`` over the nodes of ``v_rule``."""
    A, B = kernel.factors(v_rule.nodes, v_rule.weights)
    mat = A @ B
    if not np.all(np.isfinite(mat)):
        raise NumericalError("kernel matrix has non-finite entries (contours too far from the saddle?)")
    return mat


def nystrom_det_complex(kernel: KernelSpec, contour: Contour | QuadratureRule, order: int = 48) -> complex:
    if isinstance(contour, QuadratureRule):
        rule = contour
    else:
        if order < 4:
            raise DomainError("order must be >= 4")
        rule = contour.rule(order)
    mat = nystrom_matrix(kernel, rule)
    mat[np.diag_indices_from(mat)] += 1.0
    return _lu_det(mat)


def nystrom_det(kernel: KernelSpec, contour: Contour | QuadratureRule, order: int = 48, imag_tol: float = IMAG_TOL) -> float:
    """Real part of the Nystrom determinant; checks the imaginary residue.

    Raises
    ------
    ImaginaryResidueError
        If ``|Im det| >= imag_tol * (1 + |det|)``.
    """
    d = nystrom_det_complex(kernel, contour, order)
    if abs(d.imag) >= imag_tol * (1.0 + abs(d)):
        raise ImaginaryResidueError(f"imaginary part {d.imag:.3e} of determinant {d.real:.6g}")
    return d.real
