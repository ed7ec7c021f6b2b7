"""Irreducible CAR representations and their structural maps.

Conventions
-----------
* Mode ``j`` (1-based) acts on bit ``j-1`` of the computational basis index,
  with a Jordan-Wigner sign string over the lower modes.  The vacuum is the
  all-zero bitstring, basis index 0.
* ``Z(psi) = sum_j conj(psi_j) Z_j`` is conjugate linear (annihilation) and
  ``Z*(psi) = sum_j psi_j Z_j*``.
* ``Phi_a = Z_1*^{a_1} ... Z_N*^{a_N} Omega_0`` equals ``+|a>`` exactly, so the
  occupation basis and the computational basis coincide with no extra signs.
* The parity ``W = (-1)^N`` is used wherever a grading operator is needed.
* The normalized trace is ``tau(A) = Tr(A) / 2**N``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from . import tolerances as tol
from .errors import (
    DimensionMismatch,
    IntertwinerNotFound,
    NotInjective,
    NotUnitary,
    SizeOutOfRange,
)
from .matkernel import as_cmatrix, dagger, fro

MAX_MODES = 10
# Above this size the particle-hole intertwiner is built constructively
# instead of from a dense null-space computation.
PH_DENSE_MAX_MODES = 4


def _popcount(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    count = np.zeros_like(x)
    y = x.copy()
    while np.any(y):
        count += y & 1
        y >>= 1
    return count


@dataclass(frozen=True, eq=False)
class FermionRep:
    """Jordan-Wigner representation of the CAR over ``C^N`` on ``C^(2^N)``."""

    n_modes: int
    dim: int = field(init=False)

    def __post_init__(self):
        if not (1 <= self.n_modes <= MAX_MODES):
            raise SizeOutOfRange(f"n_modes must lie in 1..{MAX_MODES}, got {self.n_modes}")
        object.__setattr__(self, "dim", 1 << self.n_modes)

    vacuum_index = 0

    @cached_property
    def states(self) -> np.ndarray:
        return np.arange(self.dim, dtype=np.int64)

    @cached_property
    def occupations(self) -> np.ndarray:
        """``(dim, N)`` array of occupation bits, column ``j-1`` for mode ``j``."""
        return ((self.states[:, None] >> np.arange(self.n_modes)) & 1).astype(np.int64)

    @cached_property
    def popcounts(self) -> np.ndarray:
        return self.occupations.sum(axis=1)

    @cached_property
    def mode_ops(self) -> np.ndarray:
        """Stack ``(N, dim, dim)`` of annihilators ``Z_1..Z_N``."""
        ops = np.zeros((self.n_modes, self.dim, self.dim), dtype=np.complex128)
        s = self.states
        for j in range(self.n_modes):
            bit = 1 << j
            cols = s[(s & bit) != 0]
            signs = (-1.0) ** _popcount(cols & (bit - 1))
            ops[j, cols ^ bit, cols] = signs
        ops.setflags(write=False)
        return ops

    def mode_op(self, j: int) -> np.ndarray:
        """Annihilator ``Z_j`` for 1-based ``j``."""
        return self.mode_ops[j - 1]

    @cached_property
    def number_op(self) -> np.ndarray:
        return np.diag(self.popcounts.astype(np.complex128))

    @cached_property
    def parity_op(self) -> np.ndarray:
        return np.diag((-1.0) ** self.popcounts).astype(np.complex128)

    @cached_property
    def parity_diag(self) -> np.ndarray:
        return (-1.0) ** self.popcounts

    @cached_property
    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=np.complex128)

    def tau(self, a: np.ndarray) -> complex:
        """Normalized trace ``Tr(A) / 2**N``."""
        return complex(np.trace(a)) / self.dim

    def check_operator(self, a) -> np.ndarray:
        a = as_cmatrix(a)
        if a.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"expected {self.dim}x{self.dim} operator, got {a.shape}")
        return a

    def check_vector(self, psi) -> np.ndarray:
        v = np.asarray(psi, dtype=np.complex128).reshape(-1)
        if v.shape != (self.n_modes,):
            raise DimensionMismatch(f"expected a vector of length {self.n_modes}, got {v.shape}")
        return v

    def check_single(self, x) -> np.ndarray:
        m = as_cmatrix(x)
        if m.shape != (self.n_modes, self.n_modes):
            raise DimensionMismatch(f"expected {self.n_modes}x{self.n_modes} matrix, got {m.shape}")
        return m

    def even_part(self, a: np.ndarray) -> np.ndarray:
        w = self.parity_diag
        return 0.5 * (a + w[:, None] * a * w[None, :])

    def odd_part(self, a: np.ndarray) -> np.ndarray:
        w = self.parity_diag
        return 0.5 * (a - w[:, None] * a * w[None, :])

    def grade(self, a: np.ndarray) -> np.ndarray:
        """``Gamma(A) = W A W``."""
        w = self.parity_diag
        return w[:, None] * a * w[None, :]


@lru_cache(maxsize=None)
def build_rep(n: int) -> FermionRep:
    """Jordan-Wigner representation on ``n`` modes (cached; it is immutable)."""
    return FermionRep(int(n))


def field(rep: FermionRep, psi) -> np.ndarray:
    """Annihilation field ``Z(psi)``; conjugate linear in ``psi``."""
    v = rep.check_vector(psi)
    return np.tensordot(v.conj(), rep.mode_ops, axes=1)


def field_dag(rep: FermionRep, psi) -> np.ndarray:
    """Creation field ``Z*(psi)``; linear in ``psi``."""
    return dagger(field(rep, psi))


def hat(rep: FermionRep, x) -> np.ndarray:
    """Second-quantised one-body operator ``sum_jk X_jk Z_j* Z_k``."""
    x = rep.check_single(x)
    z = rep.mode_ops
    # sum_k X_jk Z_k for each j, then contract with Z_j*.
    mixed = np.tensordot(x, z, axes=([1], [0]))
    zd = np.conj(np.transpose(z, (0, 2, 1)))
    return np.einsum("jab,jbc->ac", zd, mixed)


def gauge_unitary(rep: FermionRep, t: float) -> np.ndarray:
    """``e^{i t N}``."""
    return np.diag(np.exp(1j * t * rep.popcounts))


def gauge_action(rep: FermionRep, t: float, rho: np.ndarray) -> np.ndarray:
    """Dual gauge action on densities: ``e^{-itN} rho e^{itN}``."""
    ph = np.exp(1j * t * rep.popcounts)
    return (ph.conj()[:, None] * rho) * ph[None, :]


@lru_cache(maxsize=None)
def _sector_subsets(n: int):
    out = []
    for k in range(n + 1):
        if k == 0:
            out.append((np.zeros((1, 0), dtype=np.int64), np.zeros(1, dtype=np.int64)))
            continue
        subs = np.array(list(combinations(range(n), k)), dtype=np.int64)
        idx = (1 << subs).sum(axis=1)
        out.append((subs, idx))
    return out


def second_quantize(rep: FermionRep, u) -> np.ndarray:
    """Second quantisation ``U -> cal U_U`` with ``cal U Z(psi) cal U* = Z(U psi)``.

    The matrix element between occupation states ``b`` and ``a`` of equal
    particle number is ``det U[b, a]`` (rows ``b``, columns ``a``), which is
    what the recursive construction ``Phi~_a = c*_j Phi~_{a - e_j}`` with
    ``c*_j = Z*(U e_j)`` produces.
    """
    u = rep.check_single(u)
    if fro(dagger(u) @ u - np.eye(rep.n_modes)) > tol.TOL_UNITARY * max(1.0, rep.n_modes):
        raise NotUnitary("second_quantize needs a unitary")
    out = np.zeros((rep.dim, rep.dim), dtype=np.complex128)
    out[0, 0] = 1.0
    for k, (subs, idx) in enumerate(_sector_subsets(rep.n_modes)):
        if k == 0:
            continue
        block = u[subs[:, None, :, None], subs[None, :, None, :]]
        out[np.ix_(idx, idx)] = np.linalg.det(block)
    return out


def gauge_project(rep: FermionRep, a) -> np.ndarray:
    """Zero all matrix elements between different particle-number sectors."""
    a = rep.check_operator(a)
    pc = rep.popcounts
    return np.where(pc[:, None] == pc[None, :], a, 0.0)


@dataclass(frozen=True, eq=False)
class Conjugation:
    """Complex conjugation on ``C^N`` declaring the columns of ``real_basis`` real."""

    rep: FermionRep
    real_basis: np.ndarray | None = None

    def single(self, psi) -> np.ndarray:
        v = self.rep.check_vector(psi)
        if self.real_basis is None:
            return v.conj()
        b = self.real_basis
        return b @ (dagger(b) @ v).conj()

    @cached_property
    def _basis_unitary(self):
        if self.real_basis is None:
            return None
        return second_quantize(self.rep, self.real_basis)

    def lift(self, a: np.ndarray) -> np.ndarray:
        """``cal C A cal C`` for the antiunitary lift of the conjugation."""
        vq = self._basis_unitary
        if vq is None:
            return np.conj(a)
        return vq @ np.conj(dagger(vq) @ a @ vq) @ dagger(vq)


def default_conjugation(rep: FermionRep) -> Conjugation:
    return Conjugation(rep)


def transpose_map(rep: FermionRep, conj: Conjugation, a) -> np.ndarray:
    """The fermionic transpose map ``A -> cal C A cal C``."""
    a = rep.check_operator(a)
    if conj.rep.n_modes != rep.n_modes:
        raise DimensionMismatch("conjugation belongs to a different representation")
    return conj.lift(a)


@dataclass(frozen=True)
class ParticleHole:
    unitary: np.ndarray

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Automorphism ``alpha_ph(X) = U X U*``."""
        return self.unitary @ x @ dagger(self.unitary)

    def apply_dual(self, rho: np.ndarray) -> np.ndarray:
        """Action on densities, ``U* rho U``."""
        return dagger(self.unitary) @ rho @ self.unitary


def particle_hole(rep: FermionRep, conj: Conjugation | None = None) -> ParticleHole:
    """Unitary ``U_ph`` with ``U Z(psi) U* = Z*(conj psi)`` and ``U = U*``."""
    if conj is None:
        conj = default_conjugation(rep)
    if conj.rep.n_modes != rep.n_modes:
        raise DimensionMismatch("conjugation belongs to a different representation")
    z = rep.mode_ops
    if conj.real_basis is None:
        targets = [dagger(z[j]) for j in range(rep.n_modes)]
    else:
        targets = []
        for j in range(rep.n_modes):
            e = np.zeros(rep.n_modes, dtype=np.complex128)
            e[j] = 1.0
            # alpha(Z(e_j)) = Z*(C e_j), a linear function of Z*.
            targets.append(field_dag(rep, conj.single(e)))
    if rep.n_modes <= PH_DENSE_MAX_MODES:
        u = _intertwiner_dense(rep, [z[j] for j in range(rep.n_modes)], targets)
    else:
        u = _intertwiner_constructive(rep, targets)
    u = u / np.sqrt(rep.tau(dagger(u) @ u).real)
    overlap = np.vdot(dagger(u).reshape(-1), u.reshape(-1))
    if abs(overlap) > 0:
        u = u * np.exp(0.5j * np.angle(overlap))
    residual = max(fro(u @ z[j] - targets[j] @ u) for j in range(rep.n_modes))
    residual = max(residual, fro(dagger(u) @ u - rep.identity))
    if residual > 1e-9:
        raise IntertwinerNotFound(f"intertwining residual {residual:.3e}")
    u = 0.5 * (u + dagger(u))
    return ParticleHole(u)


def _intertwiner_dense(rep, sources, targets) -> np.ndarray:
    d = rep.dim
    eye = np.eye(d)
    rows = []
    for s, t in zip(sources, targets):
        # vec(U S - T U) = (S^T (x) I - I (x) T) vec(U)
        rows.append(np.kron(s.T, eye) - np.kron(eye, t))
        rows.append(np.kron(dagger(s).T, eye) - np.kron(eye, dagger(t)))
    system = np.vstack(rows)
    _, sv, vh = np.linalg.svd(system)
    null = vh[-1].conj()
    if sv[-1] > 1e-8 or (len(sv) > 1 and sv[-2] < 1e-8):
        raise IntertwinerNotFound(
            f"null space not one-dimensional (smallest singular values {sv[-2:]})")
    return null.reshape((d, d), order="F")


def _intertwiner_constructive(rep, targets) -> np.ndarray:
    """Build ``U`` column by column from ``U Phi_a = prod_j alpha(Z_j*)^{a_j} U Omega_0``.

    ``alpha(Z_j*) = targets[j]*`` and ``U Omega_0`` is the joint null vector of
    every ``alpha(Z_j)``, which is the fully occupied state for the standard
    conjugation.
    """
    d = rep.dim
    stacked = np.vstack(targets)
    _, sv, vh = np.linalg.svd(stacked)
    if sv[-1] > 1e-8:
        raise IntertwinerNotFound("no joint null vector")
    vac_image = vh[-1].conj()
    u = np.zeros((d, d), dtype=np.complex128)
    raised = [dagger(t) for t in targets]
    for a in range(d):
        col = vac_image.copy()
        for j in reversed(range(rep.n_modes)):
            if (a >> j) & 1:
                col = raised[j] @ col
        u[:, a] = col
    return u


def majorana(rep: FermionRep, psi) -> tuple[np.ndarray, np.ndarray]:
    """``Q(psi) = Z(psi) + Z*(psi)`` and ``P(psi) = (Z(psi) - Z*(psi)) / i``."""
    z = field(rep, psi)
    zd = dagger(z)
    return z + zd, (z - zd) / 1j


def creation_image(dst: FermionRep, modes: Sequence[int], occupations: np.ndarray,
                   states: np.ndarray):
    """Apply ``Z*_{m_1}^{a_1} ... Z*_{m_k}^{a_k}`` (rightmost first) to basis states.

    ``modes`` are 1-based destination modes, ``occupations`` an ``(S, k)`` 0/1
    array and ``states`` an array of destination basis indices.  Returns the
    resulting indices and signs, broadcast to shape ``(len(states), S)``.
    """
    st = np.broadcast_to(states[:, None], (states.size, occupations.shape[0])).copy()
    sign = np.ones(st.shape)
    for pos in reversed(range(len(modes))):
        bit = 1 << (modes[pos] - 1)
        active = occupations[:, pos].astype(bool)[None, :]
        if np.any(active & ((st & bit) != 0)):
            raise NotInjective("creation on an occupied mode")
        flip = (-1.0) ** _popcount(st & (bit - 1))
        sign = np.where(active, sign * flip, sign)
        st = np.where(active, st | bit, st)
    return st, sign


def embed_homomorphism(src: FermionRep, dst: FermionRep, mode_map: Sequence[int], x) -> np.ndarray:
    """Image of ``X`` under the homomorphism ``Z_j -> Z'_{mode_map[j-1]}``.

    Uses ``|a><b| = C_a E_0 C_b*`` with ``C_a`` the ordered creation monomial
    and ``E_0`` the vacuum projector on the mapped modes.
    """
    x = src.check_operator(x)
    mode_map = [int(m) for m in mode_map]
    if len(mode_map) != src.n_modes:
        raise DimensionMismatch("mode_map must list one destination per source mode")
    if len(set(mode_map)) != len(mode_map):
        raise NotInjective("mode_map is not injective")
    if src.n_modes > dst.n_modes or min(mode_map) < 1 or max(mode_map) > dst.n_modes:
        raise DimensionMismatch("mode_map does not fit into the destination representation")
    mask = sum(1 << (m - 1) for m in mode_map)
    rest = dst.states[(dst.states & mask) == 0]
    idx, sign = creation_image(dst, mode_map, src.occupations, rest)
    out = np.zeros((dst.dim, dst.dim), dtype=np.complex128)
    out[idx[:, :, None], idx[:, None, :]] = sign[:, :, None] * sign[:, None, :] * x[None, :, :]
    return out


def permutation_matrix(perm: Sequence[int]) -> np.ndarray:
    """Single-particle permutation sending ``e_j`` to ``e_{perm[j-1]}`` (1-based)."""
    n = len(perm)
    p = np.zeros((n, n), dtype=np.complex128)
    for j, target in enumerate(perm):
        p[target - 1, j] = 1.0
    return p


def monomial(rep: FermionRep, beta: Sequence[int], gamma: Sequence[int], basis=None) -> np.ndarray:
    """``prod_j Z*(psi_j)^{beta_j} Z(psi_j)^{gamma_j}`` with indices increasing left to right."""
    out = rep.identity.copy()
    for j in range(rep.n_modes):
        if basis is None:
            zj = rep.mode_ops[j]
        else:
            zj = field(rep, basis[:, j])
        if beta[j]:
            out = out @ dagger(zj)
        if gamma[j]:
            out = out @ zj
    return out


def monomial_labels(n: int):
    labels = []
    for b in range(1 << n):
        for g in range(1 << n):
            beta = tuple((b >> j) & 1 for j in range(n))
            gamma = tuple((g >> j) & 1 for j in range(n))
            labels.append((beta, gamma))
    return labels


def monomial_basis(rep: FermionRep, basis=None) -> list[np.ndarray]:
    return [monomial(rep, b, g, basis) for b, g in monomial_labels(rep.n_modes)]


def expand_monomials(rep: FermionRep, x, basis=None) -> np.ndarray:
    """Coefficients of ``X`` in the monomial basis (order of ``monomial_labels``)."""
    x = rep.check_operator(x)
    mats = monomial_basis(rep, basis)
    system = np.stack([m.reshape(-1) for m in mats], axis=1)
    return np.linalg.solve(system, x.reshape(-1))


def apply_map(fn: Callable[[np.ndarray], np.ndarray], xs):
    return [fn(x) for x in xs]


def partial_trace_high(a: np.ndarray, n_keep: int, n_total: int) -> np.ndarray:
    """Normalised partial trace over the modes ``n_keep+1..n_total`` (the high bits).

    For the Jordan-Wigner ordering the low modes are the last tensor factor,
    so an operator on the first ``n_keep`` modes is ``I (x) A`` and this map
    returns ``A``; it is the tracial conditional expectation onto the
    subalgebra of the first ``n_keep`` modes, read as an ``n_keep``-mode operator.
    """
    lo = 1 << n_keep
    hi = 1 << (n_total - n_keep)
    t = a.reshape(hi, lo, hi, lo)
    return np.einsum("aiak->ik", t) / hi


def refill_high(a: np.ndarray, n_keep: int, n_total: int) -> np.ndarray:
    """``I (x) A``: an operator on the first ``n_keep`` modes inside ``n_total`` modes."""
    return np.kron(np.eye(1 << (n_total - n_keep)), a)


def mode_permutation_unitary(rep: FermionRep, perm: Sequence[int]) -> np.ndarray:
    """Second quantisation of the mode permutation ``e_j -> e_{perm[j-1]}``."""
    return second_quantize(rep, permutation_matrix(perm))
