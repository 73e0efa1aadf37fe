"""Cyclic Jacobi eigenvalues for small Hermitian matrices.

A complex Hermitian H = A + iB is diagonalised through its real symmetric
embedding [[A, -B], [B, A]], whose spectrum is that of H with every
eigenvalue doubled.
"""
from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True)
def _jacobi_symmetric(a, tol, max_sweeps):
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = 0.0
        scale = 0.0
        for i in range(n):
            scale += a[i, i] * a[i, i]
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        if off <= tol * tol * max(scale, 1e-300):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                sign = 1.0 if theta >= 0.0 else -1.0
                t = sign / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
    out = np.empty(n)
    for i in range(n):
        out[i] = a[i, i]
    return out


def symmetric_eigenvalues(a: np.ndarray, tol: float = 1e-15, max_sweeps: int = 50) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    return np.sort(_jacobi_symmetric(a, tol, max_sweeps))


def hermitian_eigenvalues(h: np.ndarray, tol: float = 1e-15, max_sweeps: int = 50) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (Hermitian part is used)."""
    h = np.asarray(h, dtype=complex)
    h = 0.5 * (h + h.conj().T)
    re, im = h.real, h.imag
    big = np.block([[re, -im], [im, re]])
    doubled = symmetric_eigenvalues(big, tol, max_sweeps)
    return doubled[::2].copy()


def min_eigenvalue(h: np.ndarray) -> float:
    return float(hermitian_eigenvalues(h)[0])
