"""Dense complex linear-algebra kernel.

Matrices are plain ``numpy.ndarray`` values of dtype ``complex128``.  The
Hermitian eigensolver is a cyclic complex Jacobi method; the inner sweep loop
runs in a compiled extension when one is available and otherwise in a
numpy-vectorised Python fallback.  ``BACKEND`` records which one was chosen.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import tolerances as tol
from .errors import (
    DimensionMismatch,
    LogOfSingular,
    NonHermitian,
    NonSquare,
    NotPSD,
    SpectralRadiusAtOne,
)
from ._jacobi_py import jacobi_eigh as _jacobi_python

if os.environ.get("FERMI_GIG_PURE_PYTHON") == "1":
    _jacobi_compiled = None
else:
    try:
        from ._jacobi import jacobi_eigh as _jacobi_compiled
    except ImportError:  # pragma: no cover - depends on the build
        _jacobi_compiled = None

BACKEND = "compiled" if _jacobi_compiled is not None else "python"


def as_cmatrix(m) -> np.ndarray:
    """Return ``m`` as a finite 2-D complex128 array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def require_square(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + dagger(m))


def comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticomm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def fro(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


@dataclass(frozen=True)
class EigDecomposition:
    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        v = self.vectors
        return (v * self.values) @ dagger(v)


def hermitian_eig(m, tol_herm: float = tol.TOL_HERM, backend: str | None = None) -> EigDecomposition:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending."""
    a = as_cmatrix(m)
    require_square(a)
    scale = max(fro(a), 1.0)
    if fro(a - dagger(a)) > tol_herm * scale:
        raise NonHermitian(f"Hermiticity defect {fro(a - dagger(a)):.3e}")
    n = a.shape[0]
    if n == 0:
        return EigDecomposition(np.zeros(0), np.zeros((0, 0), dtype=np.complex128))
    work = np.ascontiguousarray(hermitian_part(a))
    tol_abs = tol.JACOBI_OFF_REL * max(fro(work), np.finfo(float).tiny)
    kernel = _select(backend)
    values, vectors, sweeps = kernel(work, tol_abs, tol.JACOBI_MAX_SWEEPS)
    order = np.argsort(values, kind="stable")
    return EigDecomposition(np.asarray(values)[order], np.asarray(vectors)[:, order], int(sweeps))


def _select(backend: str | None):
    if backend is None:
        backend = BACKEND
    if backend == "compiled":
        if _jacobi_compiled is None:
            raise RuntimeError("compiled kernel is not available")
        return _jacobi_compiled
    if backend == "python":
        return _jacobi_python
    raise ValueError(f"unknown backend {backend!r}")


def expm(m) -> np.ndarray:
    """Matrix exponential by scaling and squaring of a truncated Taylor series.

    The matrix is scaled by ``2**-k`` until its 1-norm is at most
    ``EXPM_SCALED_NORM``; a ``EXPM_TAYLOR_TERMS``-term Taylor polynomial is then
    evaluated by Horner's rule and squared back ``k`` times.
    """
    a = as_cmatrix(m)
    require_square(a)
    n = a.shape[0]
    norm = float(np.max(np.sum(np.abs(a), axis=0))) if n else 0.0
    k = 0
    if norm > tol.EXPM_SCALED_NORM:
        k = int(np.ceil(np.log2(norm / tol.EXPM_SCALED_NORM)))
    b = a / (2.0 ** k)
    eye = np.eye(n, dtype=np.complex128)
    result = eye.copy()
    for j in range(tol.EXPM_TAYLOR_TERMS, 0, -1):
        result = eye + (b @ result) / j
    for _ in range(k):
        result = result @ result
    return result


_PSD_FUNCS = ("sqrt", "log", "pinv", "inv_sqrt_pinv", "pow")


def psd_function(m, f: str, p: float | None = None, tol_psd: float = tol.TOL_PSD,
                 kernel_rel: float = tol.KERNEL_REL) -> np.ndarray:
    """Apply a scalar function to the spectrum of a positive semidefinite matrix.

    ``f`` is one of ``sqrt``, ``log``, ``pinv``, ``inv_sqrt_pinv`` or ``pow``
    (the last needs the exponent ``p``).  Eigenvalues in ``[-tol_psd, 0)`` are
    clamped to zero, and ``sqrt`` also zeroes eigenvalues at the roundoff
    level.  The two pseudo-inverse variants send eigenvalues below
    ``kernel_rel * max eigenvalue`` (and below ``KERNEL_ABS``) to zero.
    """
    if f not in _PSD_FUNCS:
        raise ValueError(f"unknown function {f!r}")
    dec = hermitian_eig(m)
    w = dec.values.copy()
    if w.size and w[0] < -tol_psd:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e}")
    w = np.where(w < 0.0, 0.0, w)
    lam_max = float(w[-1]) if w.size else 0.0
    cut = max(kernel_rel * lam_max, tol.KERNEL_ABS)
    if f == "sqrt":
        # roundoff-sized eigenvalues of an exactly singular matrix would otherwise
        # become sqrt(eps)-sized entries, so snap them to the kernel
        noise = 64.0 * np.finfo(float).eps * max(1.0, lam_max)
        fw = np.sqrt(np.where(w <= noise, 0.0, w))
    elif f == "log":
        if w.size and w[0] < tol_psd:
            raise LogOfSingular(f"smallest eigenvalue {w[0]:.3e}")
        fw = np.log(w)
    elif f == "pinv":
        fw = np.where(w > cut, 1.0 / np.where(w > cut, w, 1.0), 0.0)
    elif f == "inv_sqrt_pinv":
        fw = np.where(w > cut, 1.0 / np.sqrt(np.where(w > cut, w, 1.0)), 0.0)
    else:
        if p is None:
            raise ValueError("pow needs an exponent p")
        if p < 0:
            fw = np.where(w > cut, np.where(w > cut, w, 1.0) ** p, 0.0)
        else:
            fw = w ** p
    v = dec.vectors
    return (v * fw) @ dagger(v)


def spectral_radius(s) -> float:
    a = as_cmatrix(s)
    require_square(a)
    if a.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking vectorisation."""
    return np.asarray(m).reshape(-1, order="F")


def unvec(v: np.ndarray, rows: int, cols: int | None = None) -> np.ndarray:
    return np.asarray(v).reshape((rows, rows if cols is None else cols), order="F")


def lyapunov_operator(g) -> np.ndarray:
    """Matrix of ``R -> G R + R G*`` acting on column-stacked ``vec(R)``."""
    g = as_cmatrix(g)
    n = g.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    return np.kron(eye, g) + np.kron(g.conj(), eye)


def stein_solve(s, r, tol_sr: float = tol.TOL_SR) -> np.ndarray:
    """Solve ``X - S X S* = R``, i.e. ``X = sum_n S^n R S*^n``."""
    s = as_cmatrix(s)
    r = as_cmatrix(r)
    require_square(s)
    if r.shape != s.shape:
        raise DimensionMismatch(f"S is {s.shape}, R is {r.shape}")
    rho = spectral_radius(s)
    if rho > 1.0 - tol_sr:
        raise SpectralRadiusAtOne(f"spectral radius {rho:.12f}")
    n = s.shape[0]
    op = np.eye(n * n, dtype=np.complex128) - np.kron(s.conj(), s)
    return unvec(np.linalg.solve(op, vec(r)), n)


def lyapunov_accumulate(g, a, t: float) -> np.ndarray:
    """``R_t = int_0^t e^{sG} A e^{sG*} ds`` via an augmented-generator exponential."""
    g = as_cmatrix(g)
    a = as_cmatrix(a)
    require_square(g)
    if a.shape != g.shape:
        raise DimensionMismatch(f"G is {g.shape}, A is {a.shape}")
    if t < 0:
        raise ValueError("t must be non-negative")
    n = g.shape[0]
    m = n * n
    aug = np.zeros((m + 1, m + 1), dtype=np.complex128)
    aug[:m, :m] = lyapunov_operator(g)
    aug[:m, m] = vec(a)
    e = expm(t * aug)
    return unvec(e[:m, m], n)


def superoperator(fn: Callable[[np.ndarray], np.ndarray], dim: int) -> np.ndarray:
    """Matrix of a linear map on ``dim x dim`` matrices (column stacking)."""
    cols = []
    for k in range(dim * dim):
        e = np.zeros(dim * dim, dtype=np.complex128)
        e[k] = 1.0
        cols.append(vec(fn(unvec(e, dim))))
    return np.stack(cols, axis=1)


def left_right_superop(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Superoperator of ``X -> L X R``."""
    return np.kron(np.asarray(right).T, np.asarray(left))


def choi_matrix(fn: Callable[[np.ndarray], np.ndarray], dim: int) -> np.ndarray:
    """Choi matrix ``sum_ab |a><b| (x) fn(|a><b|)``."""
    blocks = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    for i in range(dim):
        for j in range(dim):
            e = np.zeros((dim, dim), dtype=np.complex128)
            e[i, j] = 1.0
            blocks[i * dim:(i + 1) * dim, j * dim:(j + 1) * dim] = fn(e)
    return blocks
