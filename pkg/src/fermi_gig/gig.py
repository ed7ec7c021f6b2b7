"""Gauge-invariant Gaussian states on the Jordan-Wigner representation."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import tolerances as tol
from .car import FermionRep, field, field_dag, hat, second_quantize
from .errors import DimensionMismatch, InvalidSymbol, NotAState, SymbolOnBoundary
from .matkernel import as_cmatrix, dagger, expm, hermitian_eig, hermitian_part
from .rng import as_rng

GIG_MIXTURE = "GIGMixture"
NOT_GIG_MIXTURE = "NotGIGMixture"


@dataclass(frozen=True, eq=False)
class Symbol:
    """Hermitian ``N x N`` matrix ``Q`` with ``0 <= Q <= 1``."""

    q: np.ndarray

    @classmethod
    def make(cls, q, tol_psd: float = tol.TOL_PSD) -> "Symbol":
        if isinstance(q, Symbol):
            return q
        q = as_cmatrix(q)
        if q.shape[0] != q.shape[1]:
            raise InvalidSymbol(f"symbol must be square, got {q.shape}")
        if np.linalg.norm(q - dagger(q)) > tol.TOL_HERM * max(1.0, np.linalg.norm(q)):
            raise InvalidSymbol("symbol is not Hermitian")
        eig = hermitian_eig(hermitian_part(q))
        if eig.values[0] < -tol_psd or eig.values[-1] > 1 + tol_psd:
            raise InvalidSymbol(
                f"symbol spectrum [{eig.values[0]:.3e}, {eig.values[-1]:.3e}] leaves [0, 1]")
        mu = np.clip(eig.values, 0.0, 1.0)
        q = (eig.vectors * mu[None, :]) @ dagger(eig.vectors)
        return cls(hermitian_part(q))

    @property
    def n(self) -> int:
        return self.q.shape[0]

    @cached_property
    def eig(self):
        e = hermitian_eig(self.q)
        return np.clip(e.values, 0.0, 1.0), e.vectors


def _symbol_matrix(q) -> np.ndarray:
    return Symbol.make(q).q


@dataclass(frozen=True, eq=False)
class GIGState:
    rep: FermionRep
    rho: np.ndarray

    @cached_property
    def symbol(self) -> Symbol:
        return Symbol.make(symbol_of(self.rep, self.rho))


def _product_density(rep: FermionRep, mu: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    rho = rep.identity.copy()
    for j in range(rep.n_modes):
        z = field(rep, vecs[:, j])
        zd = dagger(z)
        rho = rho @ ((1.0 - mu[j]) * 2.0 * (z @ zd) + mu[j] * 2.0 * (zd @ z))
    return rho


def rho_from_symbol(rep: FermionRep, q) -> GIGState:
    """Density (with respect to ``tau``) of the GIG state with symbol ``Q``."""
    sym = Symbol.make(q)
    if sym.n != rep.n_modes:
        raise DimensionMismatch(f"symbol is {sym.n}x{sym.n} but the representation has {rep.n_modes} modes")
    mu, vecs = sym.eig
    rho = hermitian_part(_product_density(rep, mu, vecs))
    state = GIGState(rep, rho)
    object.__setattr__(state, "symbol", sym)
    return state


def rho_from_symbol_rotated(rep: FermionRep, q) -> np.ndarray:
    """Independent construction ``U_V diag(2^N prod mu^a (1-mu)^(1-a)) U_V*``."""
    sym = Symbol.make(q)
    mu, vecs = sym.eig
    occ = rep.occupations
    weights = np.prod(np.where(occ == 1, mu[None, :], 1.0 - mu[None, :]), axis=1) * rep.dim
    u = second_quantize(rep, vecs)
    return (u * weights[None, :]) @ dagger(u)


def symbol_of(rep: FermionRep, rho) -> np.ndarray:
    """``Q_jk = tau(rho Z_k* Z_j)``."""
    rho = rep.check_operator(rho)
    tr = rep.tau(rho)
    if abs(tr - 1.0) > 1e-10 or np.linalg.norm(rho - dagger(rho)) > tol.TOL_HERM * max(1.0, np.linalg.norm(rho)):
        raise NotAState(f"not a normalized Hermitian density (tau = {tr:.6g})")
    z = rep.mode_ops
    # tau(rho Z_k* Z_j) = Tr(Z_j rho Z_k*) / dim
    m = np.einsum("jab,bc->jac", z, rho)
    q = np.einsum("jac,kac->jk", m, z.conj()) / rep.dim
    return hermitian_part(q)


def moment(rep: FermionRep, rho, psi_list: Sequence, phi_list: Sequence) -> complex:
    """``tau(rho Z*(psi_1)...Z*(psi_m) Z(phi_n)...Z(phi_1))``."""
    rho = rep.check_operator(rho)
    op = rep.identity
    for psi in psi_list:
        op = op @ field_dag(rep, psi)
    for phi in reversed(list(phi_list)):
        op = op @ field(rep, phi)
    return rep.tau(rho @ op)


def gaussian_moment(q: np.ndarray, psi_list: Sequence, phi_list: Sequence) -> complex:
    """Moment predicted from the symbol: zero unless ``m = n``, else ``det <phi_i, Q psi_j>``."""
    if len(psi_list) != len(phi_list):
        return 0.0
    if not psi_list:
        return 1.0
    psi = np.stack([np.asarray(p, dtype=complex) for p in psi_list], axis=1)
    phi = np.stack([np.asarray(p, dtype=complex) for p in phi_list], axis=1)
    return complex(np.linalg.det(dagger(phi) @ q @ psi))


def is_gig(rep: FermionRep, rho, sample_budget: int = 4, seed: int = 0) -> float:
    """Largest deviation of sampled moments from the Gaussian moment law."""
    rho = rep.check_operator(rho)
    q = symbol_of(rep, rho)
    rng = as_rng(seed)
    top = min(rep.n_modes, 3)
    worst = 0.0
    for m in range(top + 1):
        for n in range(top + 1):
            if m == 0 and n == 0:
                continue
            for _ in range(sample_budget):
                psis = [rng.complex_normal(rep.n_modes) for _ in range(m)]
                phis = [rng.complex_normal(rep.n_modes) for _ in range(n)]
                got = moment(rep, rho, psis, phis)
                worst = max(worst, abs(got - gaussian_moment(q, psis, phis)))
    return worst


def gibbs_form(q, boundary_tol: float = 1e-12) -> np.ndarray:
    """``H = -log(Q (1-Q)^{-1})`` for an interior symbol."""
    sym = Symbol.make(q)
    mu, vecs = sym.eig
    if mu.min() < boundary_tol or mu.max() > 1.0 - boundary_tol:
        raise SymbolOnBoundary("the Gibbs form needs 0 < Q < 1")
    h = -np.log(mu / (1.0 - mu))
    return hermitian_part((vecs * h[None, :]) @ dagger(vecs))


def gibbs_density(rep: FermionRep, h) -> np.ndarray:
    """``e^{-H^} / tau(e^{-H^})``."""
    e = expm(-hat(rep, h))
    return hermitian_part(e / rep.tau(e))


@dataclass(frozen=True)
class WolfeResult:
    kind: str
    eta: np.ndarray | None = None
    sign: int = 0

    @property
    def is_mixture(self) -> bool:
        return self.kind == GIG_MIXTURE


def wolfe_check(q0, q1, rank_tol: float = 1e-9) -> WolfeResult:
    """Decide whether the segment between two GIG states stays Gaussian."""
    d = _symbol_matrix(q1) - _symbol_matrix(q0)
    sv = np.linalg.svd(d, compute_uv=False)
    if sv[0] <= rank_tol:
        return WolfeResult(GIG_MIXTURE, np.zeros(d.shape[0], dtype=complex), 0)
    if len(sv) > 1 and sv[1] > rank_tol:
        return WolfeResult(NOT_GIG_MIXTURE)
    eig = hermitian_eig(hermitian_part(d))
    idx = int(np.argmax(np.abs(eig.values)))
    lam = eig.values[idx]
    sign = 1 if lam > 0 else -1
    return WolfeResult(GIG_MIXTURE, np.sqrt(abs(lam)) * eig.vectors[:, idx], sign)
