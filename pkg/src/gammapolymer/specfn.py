"""Special functions used throughout the package.

Complex log-gamma, real polygamma of orders 0..2 and gamma variates.  All
routines accept numpy arrays and broadcast; scalars in give scalars out.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "DomainError",
    "log_gamma_complex",
    "polygamma",
    "digamma",
    "digamma_difference",
    "gamma_sample",
    "log_gamma_sample",
    "log_pi_over_sin",
]

LOG_SQRT_2PI = 0.5 * np.log(2.0 * np.pi)

# Bernoulli numbers B_2, B_4, ..., B_16
_BERNOULLI = np.array([
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
])

_SHIFT_TO = 10.0


class DomainError(ValueError):
    """Argument outside the domain of a special function or sampler."""


def _scalar_out(x, like):
    return x.item() if np.ndim(like) == 0 else x


def log_gamma_complex(z):
    """Principal branch of ``ln Gamma(z)`` for complex ``z``.

    Arguments with ``Re z < 10`` are shifted up with the recurrence
    ``ln Gamma(z) = ln Gamma(z + N) - sum_k ln(z + k)`` and the Stirling
    series with eight Bernoulli terms is applied at ``z + N``.  Since every
    ``ln(z + k)`` is a principal logarithm, the result is analytic off the
    negative real axis and real on the positive one, i.e. it is the
    principal branch (the same convention as ``scipy.special.loggamma``).

    Raises
    ------
    DomainError
        If any entry is a pole, ``z in {0, -1, -2, ...}``.
    """
    z_in = z
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise DomainError("log_gamma_complex: non-finite argument")
    pole = (z.imag == 0.0) & (z.real <= 0.0) & (z.real == np.round(z.real))
    if np.any(pole):
        raise DomainError("log_gamma_complex: argument is a pole of Gamma")

    n_shift = np.where(z.real < _SHIFT_TO, np.ceil(_SHIFT_TO - z.real), 0.0)
    correction = np.zeros_like(z)
    max_shift = int(n_shift.max()) if n_shift.size else 0
    for k in range(max_shift):
        active = n_shift > k
        correction = correction + np.where(active, np.log(np.where(active, z + k, 1.0)), 0.0)
    w = z + n_shift

    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    for k in range(len(_BERNOULLI) - 1, -1, -1):
        two_k = 2 * (k + 1)
        series = series * inv2 + _BERNOULLI[k] / (two_k * (two_k - 1))
    series = series * inv
    out = (w - 0.5) * np.log(w) - w + LOG_SQRT_2PI + series - correction
    return _scalar_out(out, z_in)


def polygamma(k: int, x):
    """Polygamma ``psi_k(x)`` for ``k in {0, 1, 2}`` and real ``x > 0``.

    Recurrence up to ``x >= 10`` followed by the asymptotic expansion with
    eight Bernoulli terms.
    """
    if k not in (0, 1, 2):
        raise DomainError(f"polygamma: unsupported order {k}")
    x_in = x
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x <= 0.0):
        raise DomainError("polygamma: requires finite x > 0")

    acc = np.zeros_like(x)
    y = x.copy()
    while True:
        low = y < _SHIFT_TO
        if not np.any(low):
            break
        yl = np.where(low, y, 1.0)
        if k == 0:
            acc -= np.where(low, 1.0 / yl, 0.0)
        elif k == 1:
            acc += np.where(low, 1.0 / (yl * yl), 0.0)
        else:
            acc -= np.where(low, 2.0 / (yl * yl * yl), 0.0)
        y = np.where(low, y + 1.0, y)

    inv = 1.0 / y
    inv2 = inv * inv
    series = np.zeros_like(y)
    if k == 0:
        for j in range(len(_BERNOULLI) - 1, -1, -1):
            series = series * inv2 + _BERNOULLI[j] / (2 * (j + 1))
        val = np.log(y) - 0.5 * inv - series * inv2
    elif k == 1:
        for j in range(len(_BERNOULLI) - 1, -1, -1):
            series = series * inv2 + _BERNOULLI[j]
        val = inv + 0.5 * inv2 + series * inv2 * inv
    else:
        for j in range(len(_BERNOULLI) - 1, -1, -1):
            series = series * inv2 + (2 * (j + 1) + 1) * _BERNOULLI[j]
        val = -inv2 - inv2 * inv - series * inv2 * inv2
    return _scalar_out(val + acc, x_in)


def digamma(x):
    return polygamma(0, x)


def digamma_difference(a: float, b: float) -> float:
    """``psi(a) - psi(b)`` for ``a, b > 0`` with relative accuracy near machine precision.

    Subtracting two digamma values loses all digits when ``a`` is close to
    ``b``.  Here the recurrence part is ``(a - b) * sum 1/((a+k)(b+k))`` and
    the Stirling part is differenced term by term with ``log1p``/``expm1``,
    so no step cancels.
    """
    if not (a > 0.0 and b > 0.0):
        raise DomainError("digamma_difference: need a, b > 0")
    d = a - b
    shift = max(0, int(np.ceil(_SHIFT_TO - min(a, b))))
    k = np.arange(shift)
    out = d * float(np.sum(1.0 / ((a + k) * (b + k))))
    A, B = a + shift, b + shift
    lr = np.log1p(d / B)
    out += lr + d / (2.0 * A * B)
    for j, bern in enumerate(_BERNOULLI, start=1):
        out += bern / (2 * j) * B ** (-2 * j) * -np.expm1(-2 * j * lr)
    return float(out)


def log_pi_over_sin(z):
    """``ln(pi / sin(pi z))`` up to a multiple of ``2 pi i``, overflow-free.

    Only ever exponentiated, so the branch is irrelevant.  Written in terms
    of ``exp(i pi z)`` or ``exp(-i pi z)``, whichever is small.
    """
    z = np.asarray(z, dtype=complex)
    upper = z.imag >= 0.0
    # Im z >= 0:  pi/sin(pi z) = -2 pi i e^{i pi z} / (1 - e^{2 i pi z})
    # Im z <  0:  pi/sin(pi z) =  2 pi i e^{-i pi z} / (1 - e^{-2 i pi z})
    phase = np.where(upper, 1j * np.pi * z, -1j * np.pi * z)
    denom = -np.expm1(2.0 * phase)
    if np.any(np.abs(denom) < 1e-14):
        raise DomainError("log_pi_over_sin: argument is (numerically) an integer")
    pref = np.where(upper, np.log(-2j * np.pi), np.log(2j * np.pi))
    return pref + phase - np.log(denom)


def _check_shape(shape):
    shape = np.asarray(shape, dtype=float)
    if np.any(~np.isfinite(shape)) or np.any(shape <= 0.0):
        raise DomainError("gamma shape must be finite and > 0")
    return shape


def _marsaglia_tsang(d, rng):
    """Gamma(d) variates for ``d >= 1`` (array), squeeze + log acceptance."""
    d = d - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)
    out = np.empty_like(d)
    todo = np.arange(d.size)
    dflat = d.ravel()
    cflat = c.ravel()
    oflat = out.ravel()
    while todo.size:
        dd = dflat[todo]
        cc = cflat[todo]
        x = rng.standard_normal(todo.size)
        u = rng.random(todo.size)
        v = 1.0 + cc * x
        ok = v > 0.0
        v = np.where(ok, v * v * v, 1.0)
        x2 = x * x
        squeeze = u < 1.0 - 0.0331 * x2 * x2
        with np.errstate(divide="ignore"):
            full = np.log(u) < 0.5 * x2 + dd * (1.0 - v + np.log(v))
        acc = ok & (squeeze | full)
        oflat[todo[acc]] = dd[acc] * v[acc]
        todo = todo[~acc]
    return oflat.reshape(d.shape)


def log_gamma_sample(shape, rng: np.random.Generator, size=None):
    """Natural log of Gamma(shape, 1) variates.

    Shapes below one use the boost ``X = Y * U**(1/shape)`` with
    ``Y ~ Gamma(shape + 1)``, carried out in log space so that very small
    shapes (where ``X`` underflows) still give finite logs.
    """
    shape = _check_shape(shape)
    if size is None:
        size = shape.shape
    shape = np.broadcast_to(shape, size).astype(float)
    small = shape < 1.0
    d = np.where(small, shape + 1.0, shape)
    logy = np.log(_marsaglia_tsang(np.atleast_1d(d), rng)).reshape(d.shape)
    if np.any(small):
        u = rng.random(int(small.sum()))
        logy[small] += np.log1p(-u) / shape[small]
    return logy if logy.ndim else logy.item()


def gamma_sample(shape, rng: np.random.Generator, size=None):
    """Gamma(shape, scale 1) variates with density x^{shape-1} e^{-x} / Gamma(shape)."""
    out = np.exp(log_gamma_sample(shape, rng, size))
    return out
