"""Empirical distributions, Kolmogorov-Smirnov distances and Monte-Carlo means."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .polymer import general_shape_matrix, log_partition_dp
from .rng import GENERATOR_ID, map_blocks
from .specfn import DomainError, log_gamma_sample

MC_BLOCK = 10_000


@dataclass(frozen=True)
class EmpiricalSample:
    """Sorted draws plus the seed and generator that produced them."""

    values: np.ndarray
    base_seed: int | None = None
    generator_id: str = GENERATOR_ID

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float).ravel())
        if np.any(np.isnan(v)):
            raise DomainError("sample contains NaN")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def count(self) -> int:
        return self.values.size

    def ecdf(self, x):
        """Right-continuous ECDF ``#{values <= x} / count``."""
        if self.count == 0:
            raise DomainError("empty sample")
        out = np.searchsorted(self.values, np.asarray(x, dtype=float), side="right") / self.count
        return float(out) if np.ndim(out) == 0 else out

    def scaled(self, factor: float) -> "EmpiricalSample":
        return EmpiricalSample(self.values * factor, self.base_seed, self.generator_id)


def _as_sample(x) -> EmpiricalSample:
    return x if isinstance(x, EmpiricalSample) else EmpiricalSample(x)


def ks_one_sample(sample, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """``sup_x |F_emp(x) - F(x)|``, checked on both sides of every jump."""
    s = _as_sample(sample)
    n = s.count
    if n == 0:
        raise DomainError("empty sample")
    f = np.asarray(cdf(s.values), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_two_sample(x, y) -> float:
    """Largest gap between two ECDFs, scanned over the merged jump points."""
    xs, ys = _as_sample(x), _as_sample(y)
    if xs.count == 0 or ys.count == 0:
        raise DomainError("empty sample")
    grid = np.concatenate([xs.values, ys.values])
    fx = np.searchsorted(xs.values, grid, side="right") / xs.count
    fy = np.searchsorted(ys.values, grid, side="right") / ys.count
    return float(np.max(np.abs(fx - fy)))


def ks_two_sample_critical(n: int, m: int, alpha: float = 0.01) -> float:
    """Asymptotic two-sample critical value ``c(alpha) sqrt((n+m)/(n m))``."""
    c = math.sqrt(-0.5 * math.log(alpha / 2.0))
    return c * math.sqrt((n + m) / (n * m))


@dataclass(frozen=True)
class MeanSE:
    mean: float
    se: float
    count: int

    def __iter__(self):
        return iter((self.mean, self.se))

    def contains(self, value: float, k: float = 3.0) -> bool:
        return abs(value - self.mean) <= k * self.se


def combine_moments(blocks: list[np.ndarray]) -> MeanSE:
    """Mean and standard error from per-block arrays, merged in block order."""
    count, mean, m2 = 0, 0.0, 0.0
    for arr in blocks:
        arr = np.asarray(arr, dtype=float)
        nb = arr.size
        if nb == 0:
            continue
        mb = float(np.mean(arr))
        m2b = float(np.sum((arr - mb) ** 2))
        delta = mb - mean
        tot = count + nb
        mean += delta * nb / tot
        m2 += m2b + delta * delta * count * nb / tot
        count = tot
    if count == 0:
        raise DomainError("no replicas")
    se = math.sqrt(m2 / (count - 1) / count) if count > 1 else float("nan")
    return MeanSE(mean, se, count)


def laplace_values(log_z: np.ndarray, s: float) -> np.ndarray:
    """``exp(-s Z)`` evaluated as ``exp(-exp(ln s + ln Z))``."""
    if s == 0.0:
        return np.ones_like(log_z)
    with np.errstate(over="ignore"):
        return np.exp(-np.exp(math.log(s) + log_z))


def sample_general_log_partition(a, b, rng: np.random.Generator, size: int) -> np.ndarray:
    """``ln Z`` for ``size`` independent instances with shapes ``a_{n-j+1} + b_{i+j-1}``."""
    shapes = general_shape_matrix(a, b)
    log_w = log_gamma_sample(shapes, rng, size=(size, *shapes.shape))
    return log_partition_dp(log_w)


def mc_laplace(params, s: float, replicas: int, seed: int, threads: int = 1, block: int = MC_BLOCK,
               min_replicas: int = 1000) -> MeanSE:
    """Monte-Carlo mean and standard error of ``exp(-s Z)``.

    ``params`` is a ``ParameterSet`` or an ``(a, b)`` pair.  Block ``k``
    draws from ``stream(seed, k)``, so the result is independent of
    ``threads``.
    """
    if replicas < min_replicas:
        raise DomainError(f"need at least {min_replicas} replicas")
    if not s >= 0.0:
        raise DomainError("need s >= 0")
    a, b = (params.a, params.b) if hasattr(params, "a") else params
    if s == 0.0:
        return MeanSE(1.0, 0.0, replicas)

    def work(rng, size):
        return laplace_values(sample_general_log_partition(a, b, rng, size), s)

    return combine_moments(map_blocks(work, replicas, block, seed, threads))
