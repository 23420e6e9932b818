"""The strict-weak gamma polymer.

A path is a sequence of cells ``(1, j_1), ..., (m, j_m)`` with
``1 <= j_1 <= ... <= j_m <= n``; neither end is pinned.  The partition
function sums the product of weights over all such paths and the zero
temperature version minimises the sum of costs.

Weights are stored as logs: for small shapes a Gamma(shape) variate is
often below the smallest double.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb

import numpy as np

from .specfn import DomainError, log_gamma_sample

ENUMERATION_BUDGET = 10**6


class BudgetError(RuntimeError):
    """Raised when a brute-force enumeration would exceed its budget."""


@dataclass(frozen=True)
class PolymerInstance:
    """An ``m x n`` matrix of positive weights ``g[i, j]`` (stored as logs).

    ``gamma`` is the common shape for i.i.d. instances; instances built from
    general parameters carry the per-entry shapes in ``shape_matrix`` and
    have ``gamma = None``.
    """

    log_weights: np.ndarray
    gamma: float | None = None
    shape_matrix: np.ndarray | None = field(default=None)

    def __post_init__(self):
        lw = np.array(self.log_weights, dtype=float)
        if lw.ndim != 2 or lw.shape[0] < 1 or lw.shape[1] < 1:
            raise DomainError("weights must be a non-empty 2-d matrix")
        if not np.all(np.isfinite(lw)):
            raise DomainError("weights must be strictly positive and finite")
        lw.setflags(write=False)
        object.__setattr__(self, "log_weights", lw)
        if self.shape_matrix is not None:
            sm = np.array(self.shape_matrix, dtype=float)
            if sm.shape != lw.shape or np.any(sm <= 0.0):
                raise DomainError("shape_matrix must match the weights and be > 0")
            sm.setflags(write=False)
            object.__setattr__(self, "shape_matrix", sm)
        if self.gamma is not None and not self.gamma > 0.0:
            raise DomainError("gamma must be > 0")

    @classmethod
    def from_weights(cls, weights, gamma=None, shape_matrix=None):
        w = np.asarray(weights, dtype=float)
        if np.any(~(w > 0.0)) or np.any(~np.isfinite(w)):
            raise DomainError("weights must be strictly positive and finite")
        return cls(np.log(w), gamma=gamma, shape_matrix=shape_matrix)

    @property
    def m(self) -> int:
        return self.log_weights.shape[0]

    @property
    def n(self) -> int:
        return self.log_weights.shape[1]

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self.log_weights)


def _check_dims(m, n):
    if int(m) != m or int(n) != n or m < 1 or n < 1:
        raise DomainError(f"invalid polymer dimensions m={m}, n={n}")


def sample_instance(m: int, n: int, gamma: float, rng: np.random.Generator) -> PolymerInstance:
    """I.i.d. Gamma(gamma) weights on an ``m x n`` grid."""
    _check_dims(m, n)
    if not gamma > 0.0:
        raise DomainError("gamma must be > 0")
    return PolymerInstance(log_gamma_sample(gamma, rng, size=(m, n)), gamma=gamma)


def general_shape_matrix(a, b) -> np.ndarray:
    """Shapes ``a[n-j+1] + b[i+j-1]`` (1-based) of the polymer weights.

    ``g[i, j] = 1 / w[i+j-1, n-j+1]`` where ``1 / w[r, s] ~ Gamma(a_s + b_r)``;
    the matrix is ``(h - n + 1) x n``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n, h = a.size, b.size
    if n < 1 or h < n:
        raise DomainError(f"need len(b) >= len(a) >= 1, got h={h}, n={n}")
    if np.any(a[None, :] + b[:, None] <= 0.0):
        raise DomainError("need a_j + b_i > 0 for all i, j")
    m = h - n + 1
    i = np.arange(m)[:, None]
    j = np.arange(n)[None, :]
    # 0-based: a[n-1-j] + b[i+j]
    return a[n - 1 - j] + b[i + j]


def sample_instance_general(a, b, rng: np.random.Generator) -> PolymerInstance:
    """Polymer weights induced by the inverse-gamma matrix with parameters (a, b)."""
    shapes = general_shape_matrix(a, b)
    return PolymerInstance(log_gamma_sample(shapes, rng), shape_matrix=shapes)


def _as_log_weights(instance) -> np.ndarray:
    if isinstance(instance, PolymerInstance):
        return instance.log_weights
    return np.asarray(instance, dtype=float)


def log_partition_dp(log_w: np.ndarray) -> np.ndarray:
    """``ln Z`` for log-weight arrays of shape ``(..., m, n)``.

    Row recursion ``L_i(j) = ln g_ij + logsumexp_{j' <= j} L_{i-1}(j')``,
    with the prefix log-sum-exp done by ``logaddexp.accumulate``.
    """
    log_w = np.asarray(log_w, dtype=float)
    row = log_w[..., 0, :]
    for i in range(1, log_w.shape[-2]):
        row = log_w[..., i, :] + np.logaddexp.accumulate(row, axis=-1)
    return np.logaddexp.reduce(row, axis=-1)


def partition_log(instance) -> float:
    """``ln Z_{m,n}`` of a single instance in ``O(mn)``."""
    return float(log_partition_dp(_as_log_weights(instance)))


def enumerate_paths(m: int, n: int) -> np.ndarray:
    """All paths as a ``(count, m)`` array of 0-based columns, lexicographic."""
    _check_dims(m, n)
    count = comb(n + m - 1, m)
    if count > ENUMERATION_BUDGET:
        raise BudgetError(f"{count} paths exceed the enumeration budget")
    return np.array(list(combinations_with_replacement(range(n), m)), dtype=np.intp).reshape(count, m)


def brute_force_partition(instance) -> float:
    """``ln Z`` by explicit enumeration of every path (oracle)."""
    log_w = _as_log_weights(instance)
    m, n = log_w.shape
    paths = enumerate_paths(m, n)
    terms = log_w[np.arange(m)[None, :], paths].sum(axis=1)
    return float(np.logaddexp.reduce(np.sort(terms)))


def fpp_dp(costs: np.ndarray) -> np.ndarray:
    """Min-plus recursion for cost arrays of shape ``(..., m, n)``."""
    costs = np.asarray(costs, dtype=float)
    row = costs[..., 0, :]
    for i in range(1, costs.shape[-2]):
        row = costs[..., i, :] + np.minimum.accumulate(row, axis=-1)
    return row.min(axis=-1)


def fpp_min(costs) -> float:
    """First-passage value ``min over paths of the summed costs``."""
    c = np.asarray(costs, dtype=float)
    if c.ndim != 2 or np.any(~(c > 0.0)) or not np.all(np.isfinite(c)):
        raise DomainError("costs must be a 2-d matrix of positive finite reals")
    return float(fpp_dp(c))


def brute_force_fpp(costs) -> float:
    c = np.asarray(costs, dtype=float)
    m, n = c.shape
    paths = enumerate_paths(m, n)
    return float(c[np.arange(m)[None, :], paths].sum(axis=1).min())


def sample_log_partition(m: int, n: int, gamma: float, rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` independent draws of ``ln Z_{m,n}`` with i.i.d. Gamma(gamma) weights.

    Weights are drawn one row at a time (row-major order), so memory is
    ``O(size * n)``.  The values equal ``partition_log`` applied to
    ``sample_instance`` only in law, not draw for draw.
    """
    _check_dims(m, n)
    if not gamma > 0.0:
        raise DomainError("gamma must be > 0")
    row = log_gamma_sample(gamma, rng, size=(size, n))
    for _ in range(1, m):
        row = log_gamma_sample(gamma, rng, size=(size, n)) + np.logaddexp.accumulate(row, axis=-1)
    return np.logaddexp.reduce(row, axis=-1)


def sample_fpp(m: int, n: int, rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` draws of ``f_{m,n}`` with unit-rate exponential costs, row-streamed."""
    _check_dims(m, n)
    row = rng.standard_exponential((size, n))
    for _ in range(1, m):
        row = rng.standard_exponential((size, n)) + np.minimum.accumulate(row, axis=-1)
    return row.min(axis=-1)
