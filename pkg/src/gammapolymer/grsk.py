"""Geometric RSK image computed from its non-intersecting path sums.

For ``W`` of size ``h x n``, ``1 <= k <= n`` and ``1 <= r <= min(h, k)``,

    t[h-r+1, k-r+1] * ... * t[h-1, k-1] * t[h, k] = tau_r(h, k),

the sum over r-tuples of vertex-disjoint up/right paths from
``(1,1), ..., (1,r)`` to ``(h,k-r+1), ..., (h,k)`` of the product of the
entries they cover.  Dividing consecutive identities gives
``t[h-r+1, k-r+1] = tau_r(h, k) / tau_{r-1}(h, k)``; cells above that band
come from ``T(W^t) = T(W)^t``.

Everything is brute force in log space and meant for small matrices only.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from .polymer import BudgetError, partition_log
from .specfn import DomainError

TUPLE_BUDGET = 10**6


@dataclass(frozen=True)
class GrskImage:
    log_t: np.ndarray

    @property
    def t(self) -> np.ndarray:
        return np.exp(self.log_t)

    @property
    def h(self) -> int:
        return self.log_t.shape[0]

    @property
    def n(self) -> int:
        return self.log_t.shape[1]


def _log_matrix(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or np.any(~(w > 0.0)) or not np.all(np.isfinite(w)):
        raise DomainError("W must be a 2-d matrix of positive finite reals")
    return np.log(w)


@lru_cache(maxsize=None)
def _paths(h: int, start: int, end: int) -> tuple[tuple[int, ...], ...]:
    """Up/right paths from row 0, column ``start`` to row ``h-1``, column ``end``.

    A path is encoded by its cuts ``(c_0, c_1, ..., c_h)`` with
    ``c_0 = start``, ``c_h = end``: in row ``i`` it covers columns
    ``c_i .. c_{i+1}`` and steps up at column ``c_{i+1}``.
    """
    if end < start:
        return ()
    return tuple((start, *mid, end) for mid in combinations_with_replacement(range(start, end + 1), h - 1))


def _path_log_weight(log_w: np.ndarray, cuts: tuple[int, ...]) -> float:
    total = 0.0
    for i in range(log_w.shape[0]):
        total += log_w[i, cuts[i]:cuts[i + 1] + 1].sum()
    return total


def _strictly_left(p: tuple[int, ...], q: tuple[int, ...]) -> bool:
    # Ordered up/right paths are vertex-disjoint iff in every row the last
    # column of p is left of the first column of q.
    return all(p[i + 1] < q[i] for i in range(len(p) - 1))


def log_tau(w, k: int, r: int) -> float:
    """``ln tau_r(h, k)``: log of the r-tuple non-intersecting path sum.

    ``k`` and ``r`` are 1-based as in the defining identity; ``r = 0`` gives
    the empty product (0 in log space).
    """
    log_w = _log_matrix(w)
    h, n = log_w.shape
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got k={k}")
    if r == 0:
        return 0.0
    if not 1 <= r <= min(h, k):
        raise DomainError(f"need 1 <= r <= min(h, k), got r={r}")

    families = []
    for a in range(r):
        fam = _paths(h, a, k - r + a)
        families.append([(p, _path_log_weight(log_w, p)) for p in fam])
    bound = 1
    for fam in families:
        bound *= len(fam)
    if bound > TUPLE_BUDGET:
        raise BudgetError(f"up to {bound} path tuples exceed the budget")

    terms: list[float] = []

    def extend(level: int, prev, acc: float):
        if level == r:
            terms.append(acc)
            return
        for p, lw in families[level]:
            if prev is None or _strictly_left(prev, p):
                extend(level + 1, p, acc + lw)

    extend(0, None, 0.0)
    if not terms:
        raise DomainError("no admissible path tuple")
    return float(np.logaddexp.reduce(np.sort(np.array(terms))))


def tau(w, k: int, r: int) -> float:
    return float(np.exp(log_tau(w, k, r)))


def _lower_band(log_w: np.ndarray) -> np.ndarray:
    """Cells ``i - j >= h - n`` of ``log T``; others are left as NaN."""
    w = np.exp(log_w)
    h, n = w.shape
    out = np.full((h, n), np.nan)
    for k in range(1, n + 1):
        prev = 0.0
        for r in range(1, min(h, k) + 1):
            cur = log_tau(w, k, r)
            out[h - r, k - r] = cur - prev
            prev = cur
    return out


def grsk_map(w) -> GrskImage:
    """The full image ``T(W)``, entry by entry from path sums."""
    log_w = _log_matrix(w)
    h, n = log_w.shape
    lower = _lower_band(log_w)
    upper = _lower_band(log_w.T).T
    out = np.where(np.isnan(lower), upper, lower)
    return GrskImage(out)


def polymer_log_weights(w) -> np.ndarray:
    """Log-weights ``ln g[i, j] = -ln w[i+j-1, n-j+1]`` (1-based), shape ``(h-n+1) x n``."""
    log_w = _log_matrix(w)
    h, n = log_w.shape
    if h < n:
        raise DomainError(f"need h >= n, got h={h}, n={n}")
    m = h - n + 1
    i = np.arange(m)[:, None]
    j = np.arange(n)[None, :]
    return -log_w[i + j, n - 1 - j]


def complement_partition(w) -> float:
    """``ln`` of the polymer partition function built from ``1/W`` entries.

    Equals ``-ln t[m, 1]`` of ``grsk_map(W)`` with ``m = h - n + 1``.
    """
    return partition_log(polymer_log_weights(w))


def band_overlap_error(w) -> float:
    """Largest disagreement on the diagonal band ``i - j = h - n``.

    Those cells are produced twice, once from ``W`` and once from ``W^t``;
    agreement is the non-trivial content of ``T(W^t) = T(W)^t``.
    """
    log_w = _log_matrix(w)
    lower = _lower_band(log_w)
    upper = _lower_band(log_w.T).T
    both = ~np.isnan(lower) & ~np.isnan(upper)
    return float(np.max(np.abs(lower[both] - upper[both]) / np.maximum(1.0, np.abs(lower[both]))))
