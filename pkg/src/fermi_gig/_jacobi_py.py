"""Pure-Python cyclic complex Jacobi eigensolver (fallback kernel).

Selected at import time when the compiled ``_jacobi`` extension is not
available.  Each pivot is applied with vectorised numpy row/column updates.
"""
from __future__ import annotations

import math

import numpy as np

# Off-diagonal entries this small relative to the pivot diagonal are dropped.
_NEGLIGIBLE = 1e-20
_TINY = 1e-280


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def jacobi_eigh(a: np.ndarray, tol_abs: float, max_sweeps: int):
    """Diagonalise the Hermitian matrix ``a`` in place.

    Returns ``(values, vectors, sweeps)`` with unsorted eigenvalues.
    """
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    sweeps = 0
    while sweeps < max_sweeps and _off_norm(a) > tol_abs:
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = complex(a[p, q])
                r = abs(apq)
                app = a[p, p].real
                aqq = a[q, q].real
                if r <= _NEGLIGIBLE * (abs(app) + abs(aqq)) or r < _TINY:
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                e = apq / r
                theta = (aqq - app) / (2.0 * r)
                if theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ec = e.conjugate()
                colp = a[:, p].copy()
                colq = a[:, q]
                a[:, p] = c * colp - s * ec * colq
                a[:, q] = s * colp + c * ec * colq
                rowp = a[p, :].copy()
                rowq = a[q, :]
                a[p, :] = c * rowp - s * e * rowq
                a[q, :] = s * rowp + c * e * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * ec * vq
                v[:, q] = s * vp + c * ec * vq
    return np.real(np.diag(a)).copy(), v, sweeps
