"""Laguerre-ensemble oracle for the zero-temperature polymer.

The smallest eigenvalue of ``X X*``, with ``X`` an ``n x h`` matrix of
standard complex Gaussians (real and imaginary parts N(0, 1/2), so that
``|x|^2`` is a unit exponential), has eigenvalue density proportional to
``Delta(lambda)^2 prod lambda_i^{h-n} e^{-lambda_i}``.  With ``h = m + n - 1``
this is the ensemble whose smallest eigenvalue is equal in law to the
first-passage value ``f_{m,n}``.
"""

from __future__ import annotations

import numpy as np

from .specfn import DomainError

MAX_SWEEPS = 100
MAX_DIM = 64


class NumericalError(RuntimeError):
    pass


def hermitian_from_upper(a) -> np.ndarray:
    """Hermitian matrix (or batch) built from the upper triangle of ``a``."""
    a = np.asarray(a, dtype=complex)
    upper = np.triu(a, 1)
    diag = np.einsum("...ii->...i", a).real
    out = upper + np.conj(np.swapaxes(upper, -1, -2))
    idx = np.arange(a.shape[-1])
    out[..., idx, idx] = diag
    return out


def hermitian_eigenvalues(a, tol: float = 1e-12) -> np.ndarray:
    """Ascending eigenvalues of Hermitian matrices by cyclic Jacobi rotations.

    Accepts one ``n x n`` matrix or a batch ``(..., n, n)``; only the upper
    triangle is read.  Each sweep visits every pair ``p < q`` once and
    removes the ``(p, q)`` entry with a complex rotation; sweeping stops
    once the off-diagonal Frobenius norm is below ``tol * ||A||_F`` for
    every matrix in the batch.

    Raises
    ------
    NumericalError
        If the batch has not converged after ``MAX_SWEEPS`` sweeps.
    """
    a = hermitian_from_upper(a)
    n = a.shape[-1]
    if a.shape[-2] != n or n > MAX_DIM:
        raise DomainError(f"need square matrices of size <= {MAX_DIM}")
    batch_shape = a.shape[:-2]
    a = a.reshape(-1, n, n).copy()
    norm = np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2)))
    thresh = tol * np.maximum(norm, np.finfo(float).tiny)
    negligible = 1e-20 * norm

    off = ~np.eye(n, dtype=bool)

    def off_norm(x):
        # Summed directly: total minus diagonal cancels down to ~1e-8 relative.
        return np.sqrt(np.sum(np.abs(x[:, off]) ** 2, axis=1))

    for _ in range(MAX_SWEEPS):
        if np.all(off_norm(a) <= thresh):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                r = np.abs(apq)
                # Entries this small cannot move any eigenvalue; rotating them risks overflow.
                live = r > negligible
                if not np.any(live):
                    continue
                phase = np.where(live, apq / np.where(live, r, 1.0), 1.0)
                app = a[:, p, p].real
                aqq = a[:, q, q].real
                theta = (aqq - app) / (2.0 * np.where(live, r, 1.0))
                with np.errstate(over="ignore"):
                    t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                t = np.where(live, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                cb, sb = c[:, None], s[:, None]
                ph = phase[:, None]
                col_p = a[:, :, p].copy()
                col_q = a[:, :, q].copy()
                a[:, :, p] = cb * col_p - sb * np.conj(ph) * col_q
                a[:, :, q] = sb * col_p + cb * np.conj(ph) * col_q
                row_p = a[:, p, :].copy()
                row_q = a[:, q, :].copy()
                a[:, p, :] = cb * row_p - sb * ph * row_q
                a[:, q, :] = sb * row_p + cb * ph * row_q
                a[:, p, q] = 0.0
                a[:, q, p] = 0.0
                a[:, p, p] = a[:, p, p].real
                a[:, q, q] = a[:, q, q].real
    else:
        if not np.all(off_norm(a) <= thresh):
            raise NumericalError("Jacobi iteration did not converge")
    ev = np.sort(np.einsum("bii->bi", a).real, axis=1)
    return ev.reshape(*batch_shape, n)


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex Gaussians: density proportional to exp(-|x|^2)."""
    z = rng.standard_normal((*shape, 2)) * np.sqrt(0.5)
    return z[..., 0] + 1j * z[..., 1]


def wishart_min_eig(n: int, h: int, rng: np.random.Generator, size: int | None = None):
    """Smallest eigenvalue of ``X X*`` with ``X`` an ``n x h`` complex Gaussian matrix."""
    if n < 1 or h < n:
        raise DomainError(f"need h >= n >= 1, got n={n}, h={h}")
    count = 1 if size is None else size
    x = complex_gaussian(rng, (count, n, h))
    w = x @ np.conj(np.swapaxes(x, -1, -2))
    ev = hermitian_eigenvalues(w)[:, 0]
    if np.any(ev <= 0.0):
        raise NumericalError("non-positive Wishart eigenvalue")
    return float(ev[0]) if size is None else ev
