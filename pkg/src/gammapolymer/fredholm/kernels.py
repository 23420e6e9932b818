"""Two-contour kernels and their parameter sets.

Every kernel here has the shape

    K(v1, v2) = (1/2 pi i) int_{C^w} dw / (w - v2) * S(v1 - w) * exp(phi(v1) - phi(w))

with ``S(x) = pi / sin(pi x)`` for the finite-n kernels and ``S(x) = 1/x``
for the limit kernel.  A ``KernelSpec`` carries ``phi``, the choice of
``S`` and the quadrature rule on ``C^w``; operators act on
``L^2(C^v, dv / 2 pi i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..asymptotics import AsymptoticConstants
from ..specfn import DomainError, log_gamma_complex, log_pi_over_sin
from .contours import TWO_PI_I, QuadratureRule, vertical_line

VARIANTS = ("finite_LT", "prelimit", "limit", "tw_reference")
DEFAULT_ORDER = 48
MIN_LINE_T = 50.0
TAIL_RATIO = 1e-14


class ContourConfigurationError(DomainError):
    """A quadrature node sits on (or numerically at) a pole of the integrand."""


@dataclass(frozen=True)
class ParameterSet:
    """Parameters of the finite-n Laplace transform ``E exp(-s Z)``.

    ``a`` has length ``n`` and ``b`` length ``h``; the polymer weights are
    ``Gamma(a_{n-j+1} + b_{i+j-1})``.  ``delta1`` is the radius of the
    circle carrying ``v`` and ``delta2`` the abscissa of the ``w`` line.
    """

    a: np.ndarray
    b: np.ndarray
    s: float
    delta1: float
    delta2: float
    gamma: float | None = None
    r: float | None = None
    mu: float | None = None
    c_n_tilde: float | None = None

    def __post_init__(self):
        a = np.array(self.a, dtype=float).ravel()
        b = np.array(self.b, dtype=float).ravel()
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if a.size < 1 or b.size < a.size:
            raise DomainError(f"need len(b) >= len(a) >= 1, got n={a.size}, h={b.size}")
        if not self.s >= 0.0 or not math.isfinite(self.s):
            raise DomainError("need s >= 0")
        d1, d2 = self.delta1, self.delta2
        if not 0.0 < d1 < min(d2, 1.0 - d2):
            raise DomainError(f"need 0 < delta1 < min(delta2, 1 - delta2), got {d1}, {d2}")
        if not np.all(np.abs(a) < d1):
            raise DomainError("need |a_j| < delta1 for all j")
        if not np.all(b > d2):
            raise DomainError("need b_i > delta2 for all i")

    @property
    def n(self) -> int:
        return self.a.size

    @property
    def h(self) -> int:
        return self.b.size

    @property
    def m(self) -> int:
        return self.h - self.n + 1

    def with_s(self, s: float) -> "ParameterSet":
        return ParameterSet(self.a, self.b, s, self.delta1, self.delta2, self.gamma, self.r, self.mu, self.c_n_tilde)

    def with_a(self, a) -> "ParameterSet":
        return ParameterSet(a, self.b, self.s, self.delta1, self.delta2, self.gamma, self.r, self.mu, self.c_n_tilde)

    @classmethod
    def from_polymer(cls, n: int, h: int, gamma: float, eps: float, s: float,
                     delta1: float | None = None, delta2: float | None = None) -> "ParameterSet":
        """``a_j = eps j``, ``b_i = gamma - eps i`` (so every shape is within ``h eps`` of gamma).

        ``eps = 0`` gives the i.i.d. Gamma(gamma) polymer with all ``a_j``
        equal, which the Nystrom route handles directly.
        """
        if n < 1 or h < n:
            raise DomainError(f"need h >= n >= 1, got n={n}, h={h}")
        if not gamma > 0.0 or eps < 0.0:
            raise DomainError("need gamma > 0 and eps >= 0")
        a = eps * np.arange(1, n + 1)
        b = gamma - eps * np.arange(1, h + 1)
        if np.any(b <= 0.0):
            raise DomainError("eps too large: some b_i <= 0")
        if delta2 is None:
            delta2 = min(0.5 * b.min(), 0.5)
        if delta1 is None:
            delta1 = 0.5 * (np.abs(a).max() + min(delta2, 1.0 - delta2))
        return cls(a, b, s, delta1, delta2, gamma=gamma)


def log_F(z, s: float, b) -> np.ndarray:
    """``ln F_s(z) = z ln s + sum_i ln Gamma(b_i + z)``."""
    z = np.asarray(z, dtype=complex)
    out = z * math.log(s)
    for bi in np.asarray(b, dtype=float):
        out = out + log_gamma_complex(z + bi)
    return out


def _phi_finite(params: ParameterSet) -> Callable[[np.ndarray], np.ndarray]:
    a, b, s = params.a, params.b, params.s

    def phi(z):
        z = np.asarray(z, dtype=complex)
        out = -log_F(z, s, b)
        for aj in a:
            out = out + log_gamma_complex(z - aj)
        return out

    return phi


def _phi_prelimit(constants: AsymptoticConstants, n: int, r: float) -> Callable[[np.ndarray], np.ndarray]:
    c_n = math.ceil(constants.c * n) / n
    g, mu = constants.gamma, constants.mu
    scale = r * n ** (1.0 / 3.0)

    def phi(z):
        z = np.asarray(z, dtype=complex)
        return n * (log_gamma_complex(z) - c_n * log_gamma_complex(z + g) + mu * z) + scale * z

    return phi


def _phi_limit(g_bar: float, r: float) -> Callable[[np.ndarray], np.ndarray]:
    def phi(z):
        z = np.asarray(z, dtype=complex)
        return -g_bar * z**3 / 6.0 + r * z

    return phi


@dataclass(frozen=True)
class KernelSpec:
    variant: str
    phi: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    sine: bool
    w_rule: QuadratureRule = field(repr=False)
    source: object = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DomainError(f"unknown kernel variant {self.variant!r}")
        if self.variant == "finite_LT" and not isinstance(self.source, ParameterSet):
            raise DomainError("finite_LT kernels need a ParameterSet")
        if self.variant == "prelimit" and not isinstance(self.source, tuple):
            raise DomainError("prelimit kernels need (AsymptoticConstants, n, r)")
        if self.variant in ("limit", "tw_reference") and not isinstance(self.source, tuple):
            raise DomainError("limit kernels need (g_bar, r)")

    def factors(self, v: np.ndarray, v_weights: np.ndarray | None = None):
        """``A`` (``len(v) x len(w)``) and ``B`` (``len(w) x len(v)``) with ``K = A B``.

        ``A[i, k] = S(v_i - w_k) exp(phi(v_i) - phi(w_k)) q_k / 2 pi i`` and
        ``B[k, j] = 1 / (w_k - v_j)``, times ``p_j / 2 pi i`` if
        ``v_weights`` are given.
        """
        v = np.asarray(v, dtype=complex).ravel()
        w, q = self.w_rule.nodes, self.w_rule.weights
        diff = v[:, None] - w[None, :]
        if np.min(np.abs(diff)) < 1e-12:
            raise ContourConfigurationError("a w node coincides with a v node")
        log_e = self.phi(v)[:, None] - self.phi(w)[None, :]
        if self.sine:
            try:
                log_e = log_e + log_pi_over_sin(diff)
            except DomainError as exc:
                raise ContourConfigurationError(str(exc)) from exc
            with np.errstate(over="ignore", invalid="ignore"):
                A = np.exp(log_e)
        else:
            with np.errstate(over="ignore", invalid="ignore"):
                A = np.exp(log_e) / diff
        A = A * (q / TWO_PI_I)[None, :]
        B = 1.0 / (-diff.T)
        if v_weights is not None:
            B = B * (np.asarray(v_weights) / TWO_PI_I)[None, :]
        return A, B

    def __call__(self, v1, v2):
        """Kernel values on the grid ``v1 x v2`` (scalars give a scalar)."""
        scalar = np.ndim(v1) == 0 and np.ndim(v2) == 0
        v1 = np.atleast_1d(np.asarray(v1, dtype=complex))
        v2 = np.atleast_1d(np.asarray(v2, dtype=complex))
        A, _ = self.factors(v1)
        w = self.w_rule.nodes
        B = 1.0 / (w[:, None] - v2[None, :])
        out = A @ B
        return complex(out[0, 0]) if scalar else out


# Constructors ---------------------------------------------------------------


def line_truncation(params: ParameterSet, ratio: float = TAIL_RATIO) -> float:
    """Height beyond which the line integrand stays below ``ratio`` of its peak.

    The integrand is probed at ``v = delta1`` along ``delta2 + i y`` and the
    result is floored at ``MIN_LINE_T``.
    """
    phi = _phi_finite(params)
    y = np.concatenate([[0.0], np.geomspace(1e-2, 1e3, 600)])
    w = params.delta2 + 1j * y
    v = complex(params.delta1)
    with np.errstate(over="ignore"):
        lg = np.real(-phi(w) + log_pi_over_sin(v - w)) - np.log(np.abs(w - v))
    lg = np.maximum(lg, np.real(-phi(np.conj(w)) + log_pi_over_sin(v - np.conj(w))) - np.log(np.abs(np.conj(w) - v)))
    peak = lg.max()
    above = np.nonzero(lg > peak + math.log(ratio))[0]
    t = y[above[-1] + 1] if above.size and above[-1] + 1 < y.size else y[-1]
    return float(max(MIN_LINE_T, t))


def line_rule(params: ParameterSet, order: int = DEFAULT_ORDER, T: float | None = None) -> QuadratureRule:
    """Gauss-Legendre rule on the truncated line ``delta2 + i[-T, T]``."""
    if T is None:
        T = line_truncation(params)
    return vertical_line(params.delta2, T, first=0.25).rule(order)


def finite_lt_spec(params: ParameterSet, w_rule: QuadratureRule | None = None, order: int = DEFAULT_ORDER) -> KernelSpec:
    if w_rule is None:
        w_rule = line_rule(params, order)
    return KernelSpec("finite_LT", _phi_finite(params), True, w_rule, params)


def prelimit_spec(constants: AsymptoticConstants, n: int, r: float, w_rule: QuadratureRule) -> KernelSpec:
    if n < 1:
        raise DomainError("need n >= 1")
    return KernelSpec("prelimit", _phi_prelimit(constants, n, r), True, w_rule, (constants, n, r))


def limit_spec(g_bar: float, r: float, w_rule: QuadratureRule, variant: str = "limit") -> KernelSpec:
    if not g_bar > 0.0:
        raise DomainError("need g_bar > 0")
    return KernelSpec(variant, _phi_limit(g_bar, r), False, w_rule, (g_bar, r))


def kernel_finite_LT(v1, v2, params: ParameterSet, w_rule: QuadratureRule):
    """``K^{LT}(v1, v2)`` with the ``w`` integral done by ``w_rule`` on the line."""
    return finite_lt_spec(params, w_rule)(v1, v2)


def kernel_prelimit(v1, v2, constants: AsymptoticConstants, n: int, r: float, w_rule: QuadratureRule):
    """``K_{n,r}(v1, v2)`` with ``H_n`` built from ``ceil(cn)/n``."""
    return prelimit_spec(constants, n, r, w_rule)(v1, v2)


def kernel_limit(v1, v2, g_bar: float, r: float, w_rule: QuadratureRule):
    """Cubic limit kernel with ``exp(g_bar (w^3 - v1^3)/6 + r (v1 - w))``."""
    return limit_spec(g_bar, r, w_rule)(v1, v2)
