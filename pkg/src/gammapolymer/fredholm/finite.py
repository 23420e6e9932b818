"""Finite-rank routes to ``E exp(-s Z)``: the n x n determinant and the Sklyanin integral."""

from __future__ import annotations

import math

import numpy as np

from ..specfn import DomainError, log_gamma_complex, log_pi_over_sin
from .contours import TWO_PI_I, QuadratureRule, circle, vertical_line
from .kernels import ContourConfigurationError, ParameterSet, finite_lt_spec, line_rule, log_F
from .nystrom import nystrom_det

DEGENERACY_TOL = 1e-6
SKLYANIN_TAIL_TOL = 1e-10


class DegenerateParameterError(DomainError):
    """Coincident ``a_j``: use ``det_matrix_formula_limit`` (perturbation path)."""


class TruncationError(ArithmeticError):
    pass


def _check_distinct(a: np.ndarray):
    if a.size > 1:
        gaps = np.abs(a[:, None] - a[None, :])[~np.eye(a.size, dtype=bool)]
        if gaps.min() < DEGENERACY_TOL:
            raise DegenerateParameterError(
                "coincident a_j make the residue constants singular; "
                "call det_matrix_formula_limit, which perturbs and extrapolates"
            )


def _log_C(params: ParameterSet) -> np.ndarray:
    """``ln C_j = -ln F_s(a_j) + sum_{l != j} ln Gamma(a_j - a_l)``."""
    a = params.a
    out = -log_F(a, params.s, params.b)
    for j in range(a.size):
        for l in range(a.size):
            if l != j:
                out[j] = out[j] + log_gamma_complex(complex(a[j] - a[l]))
    return out


def matrix_formula_entries(params: ParameterSet, w_rule: QuadratureRule) -> np.ndarray:
    """``delta_{jl} + (1/2 pi i) int f_j(w) g_l(w) dw`` on the line rule."""
    _check_distinct(params.a)
    a = params.a
    w, q = w_rule.nodes, w_rule.weights
    log_G = log_F(w, params.s, params.b)
    for aj in a:
        log_G = log_G - log_gamma_complex(w - aj)
    log_C = _log_C(params)
    try:
        log_sine = log_pi_over_sin(a[:, None] - w[None, :])
    except DomainError as exc:
        raise ContourConfigurationError(str(exc)) from exc
    g = np.exp(log_C[:, None] + log_G[None, :] + log_sine)
    f = 1.0 / (w[None, :] - a[:, None])
    mat = (f * (q / TWO_PI_I)[None, :]) @ g.T
    return np.eye(a.size) + mat


def det_matrix_formula(params: ParameterSet, w_rule: QuadratureRule | None = None, order: int = 48) -> float:
    """``det[I_n + (1/2 pi i) int f_j g_l]`` over the line ``delta2 + iR``.

    Raises
    ------
    DegenerateParameterError
        If two ``a_j`` coincide.
    """
    if params.s == 0.0:
        return 1.0
    if w_rule is None:
        w_rule = line_rule(params, order)
    return float(np.linalg.det(matrix_formula_entries(params, w_rule)).real)


def det_matrix_formula_limit(params: ParameterSet, eta: float = 1e-2, w_rule: QuadratureRule | None = None,
                             order: int = 48) -> float:
    """Matrix formula at coincident (or nearly coincident) ``a`` by symmetric perturbation.

    The ``a_j`` are replaced by ``a_j + t (j - (n+1)/2)``.  The transform is
    symmetric in ``a``, so the result is even in ``t`` and the Richardson
    combination ``(4 f(eta/2) - f(eta)) / 3`` removes the ``t^2`` term.
    """
    n = params.n
    if n == 1:
        return det_matrix_formula(params, w_rule, order)
    d = np.arange(1, n + 1) - 0.5 * (n + 1)

    def f(t):
        return det_matrix_formula(params.with_a(params.a + t * d), w_rule, order)

    return (4.0 * f(0.5 * eta) - f(eta)) / 3.0


def _inv_gamma_pair(x):
    """``1 / (Gamma(x) Gamma(-x)) = -x sin(pi x) / pi`` (entire)."""
    return -x * np.sin(np.pi * x) / np.pi


def sklyanin_abscissa(params: ParameterSet) -> float:
    """Real part of the integration line: midway between ``-min b`` and ``min a``."""
    return 0.5 * (params.a.min() - params.b.min())


def _sklyanin_log_single(lam: np.ndarray, params: ParameterSet) -> np.ndarray:
    """Per-variable log factor: ``sum_i ln Gamma(a_i - lam) + lam ln s + sum_i ln Gamma(b_i + lam)``."""
    out = lam * math.log(params.s)
    for ai in params.a:
        out = out + log_gamma_complex(ai - lam)
    for bi in params.b:
        out = out + log_gamma_complex(bi + lam)
    return out


def sklyanin_lt(params: ParameterSet, T: float = 40.0, order: int = 48, x: float | None = None) -> float:
    """``E exp(-s Z)`` by direct quadrature over ``(x + iR)^n``, ``n <= 2``.

    The density uses the product over ``i != j`` of ``1/Gamma(lam_i - lam_j)``.
    The line sits at ``Re lam = x`` (default ``sklyanin_abscissa``), which
    separates the poles of ``Gamma(a_i - lam)`` from those of
    ``Gamma(b_i + lam)``.

    Raises
    ------
    TruncationError
        If the integrand at ``|Im lam| = T`` exceeds ``SKLYANIN_TAIL_TOL`` of its peak.
    """
    n = params.n
    if n not in (1, 2):
        raise DomainError("sklyanin_lt handles n in {1, 2}")
    if n == 2:
        _check_distinct(params.a)
    if params.s == 0.0:
        return 1.0
    if x is None:
        x = sklyanin_abscissa(params)
    if not -params.b.min() < x < params.a.min():
        raise ContourConfigurationError("line must separate the poles: need -min b < x < min a")
    rule = vertical_line(x, T, first=0.25).rule(order)
    lam, dl = rule.nodes, rule.weights
    log_single = _sklyanin_log_single(lam, params)
    const = -(math.log(params.s) * params.a.sum()
              + sum(log_gamma_complex(complex(bi + aj)) for bi in params.b for aj in params.a))

    edge = np.array([x - 1j * T, x + 1j * T])
    log_edge = _sklyanin_log_single(edge, params)

    if n == 1:
        vals = np.exp(log_single + const)
        peak = np.abs(vals).max()
        if np.exp(log_edge.real + const.real).max() > SKLYANIN_TAIL_TOL * peak:
            raise TruncationError("Sklyanin integrand not negligible at the truncation height")
        total = np.sum(vals * dl) / TWO_PI_I
        return float(total.real)

    # n == 2: tensor rule, density 1/(2 pi i)^2 / 2! * 1/(Gamma(l1-l2) Gamma(l2-l1))
    e = np.exp(log_single + 0.5 * const)
    dens = _inv_gamma_pair(lam[:, None] - lam[None, :])
    vals = (e[:, None] * e[None, :]) * dens
    total = np.sum(vals * (dl[:, None] * dl[None, :])) / (TWO_PI_I**2 * 2.0)
    peak = np.abs(vals).max()
    e_edge = np.exp(log_edge + 0.5 * const)
    tail = np.abs(e_edge[:, None] * e[None, :] * _inv_gamma_pair(edge[:, None] - lam[None, :])).max()
    if tail > SKLYANIN_TAIL_TOL * peak:
        raise TruncationError("Sklyanin integrand not negligible at the truncation height")
    return float(total.real)


def lt_det(params: ParameterSet, order: int = 48, w_rule: QuadratureRule | None = None) -> float:
    """``det(I + K^{LT})`` on the circle of radius ``delta1`` (Nystrom route)."""
    if params.s == 0.0:
        return 1.0
    spec = finite_lt_spec(params, w_rule, order)
    return nystrom_det(spec, circle(params.delta1), order)
