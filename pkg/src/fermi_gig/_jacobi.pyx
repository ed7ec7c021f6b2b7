# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled cyclic complex Jacobi eigensolver (hot kernel)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs
from libc.complex cimport cabs, conj

cnp.import_array()


cdef double _off_norm(double complex[:, ::1] a, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j
    cdef double total = 0.0
    cdef double m
    for i in range(n):
        for j in range(n):
            if i != j:
                m = cabs(a[i, j])
                total += m * m
    return sqrt(total)


def jacobi_eigh(a_in, double tol_abs, int max_sweeps):
    """Diagonalise a Hermitian matrix; returns (values, vectors, sweeps)."""
    cdef double complex[:, ::1] a = np.ascontiguousarray(a_in, dtype=np.complex128)
    cdef Py_ssize_t n = a.shape[0]
    v_arr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] v = v_arr
    cdef Py_ssize_t p, q, k
    cdef int sweeps = 0
    cdef double r, app, aqq, theta, t, c, s
    cdef double complex e, ec, xp, xq
    with nogil:
        while sweeps < max_sweeps and _off_norm(a, n) > tol_abs:
            sweeps += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    r = cabs(a[p, q])
                    app = a[p, p].real
                    aqq = a[q, q].real
                    if r <= 1e-20 * (fabs(app) + fabs(aqq)) or r < 1e-280:
                        a[p, q] = 0.0
                        a[q, p] = 0.0
                        continue
                    e = a[p, q] / r
                    ec = conj(e)
                    theta = (aqq - app) / (2.0 * r)
                    if theta >= 0.0:
                        t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                    else:
                        t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    for k in range(n):
                        xp = a[k, p]
                        xq = a[k, q]
                        a[k, p] = c * xp - s * ec * xq
                        a[k, q] = s * xp + c * ec * xq
                    for k in range(n):
                        xp = a[p, k]
                        xq = a[q, k]
                        a[p, k] = c * xp - s * e * xq
                        a[q, k] = s * xp + c * e * xq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = app - t * r
                    a[q, q] = aqq + t * r
                    for k in range(n):
                        xp = v[k, p]
                        xq = v[k, q]
                        v[k, p] = c * xp - s * ec * xq
                        v[k, q] = s * xp + c * ec * xq
    values = np.empty(n, dtype=np.float64)
    for k in range(n):
        values[k] = a[k, k].real
    return values, v_arr, sweeps
