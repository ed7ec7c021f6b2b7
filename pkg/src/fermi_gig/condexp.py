"""Conditional expectations onto mode subalgebras, GNS/KMS geometry and recovery maps."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .car import FermionRep, _popcount, field, hat, majorana, partial_trace_high, refill_high, second_quantize
from .errors import (
    DimensionMismatch,
    NotAState,
    SingularRestriction,
    SingularState,
    SubspaceNotInvariant,
    SymbolOnBoundary,
)
from .gig import Symbol, rho_from_symbol
from .matkernel import dagger, fro, hermitian_eig, hermitian_part

FAITHFUL_MIN_EIG = 1e-12


@dataclass(frozen=True, eq=False)
class ModeSubspace:
    """A subspace ``H`` of the single-particle space, given by orthonormal columns."""

    rep: FermionRep
    basis: np.ndarray

    @classmethod
    def make(cls, rep: FermionRep, basis) -> "ModeSubspace":
        b = np.asarray(basis, dtype=np.complex128)
        if b.ndim == 1:
            b = b[:, None]
        if b.shape[0] != rep.n_modes or b.shape[1] > rep.n_modes:
            raise DimensionMismatch(f"basis must be {rep.n_modes} x k with k <= {rep.n_modes}")
        if fro(dagger(b) @ b - np.eye(b.shape[1])) > 1e-11:
            raise DimensionMismatch("basis columns are not orthonormal")
        return cls(rep, b)

    @classmethod
    def from_modes(cls, rep: FermionRep, modes) -> "ModeSubspace":
        eye = np.eye(rep.n_modes, dtype=np.complex128)
        return cls.make(rep, eye[:, [m - 1 for m in modes]])

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @cached_property
    def projector(self) -> np.ndarray:
        return self.basis @ dagger(self.basis)

    @cached_property
    def complement(self) -> np.ndarray:
        """Orthonormal basis of the orthogonal complement."""
        n = self.rep.n_modes
        if self.dim == n:
            return np.zeros((n, 0), dtype=np.complex128)
        eig = hermitian_eig(hermitian_part(np.eye(n) - self.projector))
        return eig.vectors[:, self.dim:]

    def perp(self) -> "ModeSubspace":
        return ModeSubspace(self.rep, self.complement)

    @cached_property
    def rotation(self) -> np.ndarray:
        """Second quantisation of ``V = [basis | complement]``; ``H`` becomes the mode prefix."""
        return second_quantize(self.rep, np.hstack([self.basis, self.complement]))

    def to_prefix(self, a: np.ndarray) -> np.ndarray:
        u = self.rotation
        return dagger(u) @ a @ u

    def from_prefix(self, a: np.ndarray) -> np.ndarray:
        u = self.rotation
        return u @ a @ dagger(u)


def tracial_condexp(sub: ModeSubspace, a) -> np.ndarray:
    """Trace-compatible conditional expectation onto the subalgebra generated by ``Z(h)``, ``h`` in ``H``."""
    rep = sub.rep
    a = rep.check_operator(a)
    k, n = sub.dim, rep.n_modes
    if k == n:
        return a.copy()
    rotated = sub.to_prefix(a)
    reduced = partial_trace_high(rotated, k, n) if k > 0 else np.array([[np.trace(rotated) / rep.dim]])
    return sub.from_prefix(refill_high(reduced, k, n) if k > 0 else reduced[0, 0] * rep.identity)


def restrict(sub: ModeSubspace, a) -> np.ndarray:
    """The ``k``-mode operator representing ``E_H(A)`` in the basis of ``sub``."""
    rep = sub.rep
    return partial_trace_high(sub.to_prefix(rep.check_operator(a)), sub.dim, rep.n_modes)


def group_average(sub: ModeSubspace, a) -> np.ndarray:
    """Average of ``G A G*`` over the finite group generated by ``W_H Q(psi)``, ``W_H P(psi)``, ``psi`` in ``H^perp``.

    Slow: the group has ``2^(2m+1)`` elements for ``m = dim H^perp``.  Kept as an
    independent check of :func:`tracial_condexp`.
    """
    rep = sub.rep
    a = rep.check_operator(a)
    low = rep.states & ((1 << sub.dim) - 1)
    w_h = sub.from_prefix(np.diag((-1.0) ** _popcount(low)).astype(np.complex128))
    gens = []
    for j in range(sub.complement.shape[1]):
        q, p = majorana(rep, sub.complement[:, j])
        gens.extend([w_h @ q, w_h @ p])
    total = np.zeros_like(a)
    count = 0
    for bits in product((0, 1), repeat=len(gens)):
        g = rep.identity
        for bit, gen in zip(bits, gens):
            if bit:
                g = g @ gen
        total += g @ a @ dagger(g)
        count += 1
    return total / count


def _check_invariant(sub: ModeSubspace, q: np.ndarray, tol_comm: float = 1e-10) -> None:
    if fro(q @ sub.projector - sub.projector @ q) > tol_comm:
        raise SubspaceNotInvariant("Q does not commute with the projector onto H")


def complement_density(sub: ModeSubspace, q) -> np.ndarray:
    """GIG density of ``Q`` restricted to ``H^perp``, tracial on ``H``: symbol ``P_K Q P_K + P_H / 2``."""
    q = Symbol.make(q).q
    _check_invariant(sub, q)
    pk = np.eye(sub.rep.n_modes) - sub.projector
    return rho_from_symbol(sub.rep, pk @ q @ pk + 0.5 * sub.projector).rho


def state_condexp(sub: ModeSubspace, q, a) -> np.ndarray:
    """Conditional expectation onto the ``H`` subalgebra compatible with ``rho_Q``."""
    return tracial_condexp(sub, complement_density(sub, q) @ sub.rep.check_operator(a))


def vacuum_projector(sub: ModeSubspace) -> np.ndarray:
    """Projector onto Fock vectors with no particles in ``H^perp``."""
    rep = sub.rep
    pk = np.eye(rep.n_modes) - sub.projector
    occ = np.real(np.diag(sub.to_prefix(hat(rep, pk))))
    diag = (np.abs(occ) < 0.5).astype(np.complex128)
    return sub.from_prefix(np.diag(diag))


def vacuum_condexp(sub: ModeSubspace, a) -> np.ndarray:
    """Conditional expectation onto the ``H`` subalgebra compatible with the vacuum.

    In coordinates where ``H`` is the mode prefix this is ``I (x) <0_K| A |0_K>``.
    The compression ``E A E`` by :func:`vacuum_projector` equals ``vacuum_condexp(A) E``.
    """
    rep = sub.rep
    a = rep.check_operator(a)
    k, n = sub.dim, rep.n_modes
    lo = 1 << k
    block = sub.to_prefix(a)[:lo, :lo]
    return sub.from_prefix(refill_high(block, k, n))


# ---------------------------------------------------------------------------
# inner products and the modular operator

GNS = "GNS"
KMS = "KMS"


def _check_state(rep: FermionRep, rho) -> np.ndarray:
    rho = rep.check_operator(rho)
    if abs(rep.tau(rho) - 1.0) > 1e-10 or fro(rho - dagger(rho)) > 1e-10 * max(1.0, fro(rho)):
        raise NotAState("rho must be Hermitian with tau(rho) = 1")
    if hermitian_eig(hermitian_part(rho)).values[0] < -1e-10:
        raise NotAState("rho is not positive semidefinite")
    return hermitian_part(rho)


def _psd_power(rho: np.ndarray, p: float, min_eig: float | None = None) -> np.ndarray:
    eig = hermitian_eig(rho)
    w = np.clip(eig.values, 0.0, None)
    if p < 0:
        if min_eig is not None and w[0] < min_eig:
            raise SingularState(f"smallest eigenvalue {w[0]:.3e}")
        fw = np.where(w > 0, np.where(w > 0, w, 1.0) ** p, 0.0)
    else:
        fw = w ** p
    return (eig.vectors * fw[None, :]) @ dagger(eig.vectors)


def inner_product(rep: FermionRep, rho, kind: str, a, b) -> complex:
    """``tau(rho A* B)`` (GNS) or ``tau(rho^{1/2} A* rho^{1/2} B)`` (KMS)."""
    rho = _check_state(rep, rho)
    a = rep.check_operator(a)
    b = rep.check_operator(b)
    if kind == GNS:
        return rep.tau(rho @ dagger(a) @ b)
    if kind == KMS:
        root = _psd_power(rho, 0.5)
        return rep.tau(root @ dagger(a) @ root @ b)
    raise ValueError(f"unknown inner product {kind!r}")


def modular_apply(rep: FermionRep, rho, x) -> np.ndarray:
    """``Delta_rho(X) = rho X rho^{-1}``."""
    rho = _check_state(rep, rho)
    inv = _psd_power(rho, -1.0, min_eig=FAITHFUL_MIN_EIG)
    return rho @ rep.check_operator(x) @ inv


@dataclass(frozen=True, eq=False)
class KBasis:
    labels: list
    operators: list
    modular_eigenvalues: np.ndarray
    mu: np.ndarray
    vectors: np.ndarray


def k_basis(rep: FermionRep, q) -> KBasis:
    """GNS-orthonormal eigenbasis of the modular operator of ``rho_Q`` for interior ``Q``."""
    sym = Symbol.make(q)
    mu, vecs = sym.eig
    if mu.min() <= 1e-12 or mu.max() >= 1 - 1e-12:
        raise SymbolOnBoundary("the K basis needs 0 < Q < 1")
    per_mode = []
    for j in range(rep.n_modes):
        z = field(rep, vecs[:, j])
        zd = dagger(z)
        m = mu[j]
        per_mode.append({
            (0, 0): (rep.identity, 1.0),
            (1, 0): (zd / np.sqrt(1 - m), m / (1 - m)),
            (0, 1): (z / np.sqrt(m), (1 - m) / m),
            (1, 1): ((zd @ z - m * rep.identity) / np.sqrt(m * (1 - m)), 1.0),
        })
    labels, ops, evs = [], [], []
    for combo in product(((0, 0), (1, 0), (0, 1), (1, 1)), repeat=rep.n_modes):
        op = rep.identity
        ev = 1.0
        for j, ab in enumerate(combo):
            if ab != (0, 0):
                mat, e = per_mode[j][ab]
                op = op @ mat
                ev *= e
        labels.append(combo)
        ops.append(op)
        evs.append(ev)
    return KBasis(labels, ops, np.array(evs), mu, vecs)


# ---------------------------------------------------------------------------
# Accardi-Cecchini and Petz maps


def _restricted_inv_sqrt(sub: ModeSubspace, rho: np.ndarray, allow_pinv: bool) -> np.ndarray:
    rho_h = hermitian_part(tracial_condexp(sub, rho))
    eig = hermitian_eig(rho_h)
    if eig.values[0] < FAITHFUL_MIN_EIG and not allow_pinv:
        raise SingularRestriction(f"restricted density has eigenvalue {eig.values[0]:.3e}")
    w = eig.values
    fw = np.where(w > FAITHFUL_MIN_EIG, 1.0 / np.sqrt(np.where(w > FAITHFUL_MIN_EIG, w, 1.0)), 0.0)
    return (eig.vectors * fw[None, :]) @ dagger(eig.vectors)


def accardi_cecchini(rep: FermionRep, rho, sub: ModeSubspace, a, allow_pinv: bool = False) -> np.ndarray:
    """``rho_H^{-1/2} E_H(rho^{1/2} A rho^{1/2}) rho_H^{-1/2}``."""
    rho = _check_state(rep, rho)
    root = _psd_power(rho, 0.5)
    inv = _restricted_inv_sqrt(sub, rho, allow_pinv)
    return inv @ tracial_condexp(sub, root @ rep.check_operator(a) @ root) @ inv


def petz_recover(rep: FermionRep, rho, sub: ModeSubspace, gamma, allow_pinv: bool = False) -> np.ndarray:
    """``rho^{1/2} rho_H^{-1/2} gamma rho_H^{-1/2} rho^{1/2}``."""
    rho = _check_state(rep, rho)
    root = _psd_power(rho, 0.5)
    inv = _restricted_inv_sqrt(sub, rho, allow_pinv)
    return root @ inv @ rep.check_operator(gamma) @ inv @ root
