"""EHK channels on the doubled space, gauge covariance, and channel classification."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from . import tolerances as tol
from .car import (
    Conjugation,
    FermionRep,
    build_rep,
    default_conjugation,
    embed_homomorphism,
    gauge_action,
    mode_permutation_unitary,
    partial_trace_high,
    particle_hole,
    second_quantize,
    transpose_map,
)
from .errors import (
    DimensionMismatch,
    IncompatiblePair,
    InvalidPOVM,
    NoConsistentBranch,
    NotInjective,
    NotRankOneGap,
    SizeOutOfRange,
)
from .gig import Symbol, rho_from_symbol, symbol_of, wolfe_check
from .matkernel import (
    as_cmatrix,
    dagger,
    fro,
    hermitian_eig,
    hermitian_part,
    psd_function,
    superoperator,
)
from .rng import as_rng, random_density

DENSE_MAX_MODES = 4

CP_COVARIANT = "CP_Covariant"
COCP_COVARIANT = "CoCP_Covariant"
CP_CONTRAVARIANT = "CP_Contravariant"
COCP_CONTRAVARIANT = "CoCP_Contravariant"
BRANCHES = (CP_COVARIANT, COCP_COVARIANT, CP_CONTRAVARIANT, COCP_CONTRAVARIANT)


@dataclass(frozen=True, eq=False)
class CompatiblePair:
    """``(S, R)`` with ``S`` a contraction and ``0 <= R <= I - SS*``."""

    s: np.ndarray
    r: np.ndarray

    @classmethod
    def make(cls, s, r, tol_psd: float = tol.TOL_PSD) -> "CompatiblePair":
        s = as_cmatrix(s)
        r = as_cmatrix(r)
        n = s.shape[0]
        if s.shape != (n, n) or r.shape != (n, n):
            raise DimensionMismatch("S and R must be square of the same size")
        if np.linalg.norm(s, 2) > 1.0 + 1e-10:
            raise IncompatiblePair(f"S is not a contraction (norm {np.linalg.norm(s, 2):.6g})")
        if fro(r - dagger(r)) > tol.TOL_HERM * max(1.0, fro(r)):
            raise IncompatiblePair("R is not Hermitian")
        r = hermitian_part(r)
        d = np.eye(n) - s @ dagger(s)
        lo = hermitian_eig(r).values[0]
        hi = hermitian_eig(hermitian_part(d - r)).values[0]
        if lo < -tol_psd or hi < -tol_psd:
            raise IncompatiblePair("R must satisfy 0 <= R <= I - SS*")
        return cls(s, r)

    @property
    def n(self) -> int:
        return self.s.shape[0]

    def symbol_map(self, q) -> np.ndarray:
        q = as_cmatrix(q.q if isinstance(q, Symbol) else q)
        return self.s @ q @ dagger(self.s) + self.r


def ancilla_symbol(pair: CompatiblePair) -> np.ndarray:
    """The unique ``T`` with ``(I-SS*)^{1/2} T (I-SS*)^{1/2} = R`` and ``ker(I-SS*) in ker T``."""
    n = pair.n
    d = hermitian_part(np.eye(n) - pair.s @ dagger(pair.s))
    root = psd_function(d, "sqrt")
    inv_root = psd_function(d, "inv_sqrt_pinv")
    t = hermitian_part(inv_root @ pair.r @ inv_root)
    if fro(root @ t @ root - pair.r) > 1e-8 * max(1.0, fro(pair.r)):
        raise IncompatiblePair("R has weight on ker(I - SS*)")
    try:
        return Symbol.make(t, tol_psd=1e-8).q
    except Exception as exc:
        raise IncompatiblePair(f"ancilla symbol outside [0, 1]: {exc}") from exc


def dilation(s) -> np.ndarray:
    """Self-adjoint unitary ``[[-(I-SS*)^{1/2}, S], [S*, (I-S*S)^{1/2}]]``."""
    s = as_cmatrix(s)
    n = s.shape[0]
    eye = np.eye(n)
    top = psd_function(hermitian_part(eye - s @ dagger(s)), "sqrt")
    bottom = psd_function(hermitian_part(eye - dagger(s) @ s), "sqrt")
    return np.block([[-top, s], [dagger(s), bottom]])


@dataclass(frozen=True, eq=False)
class DoubledRep:
    """Jordan-Wigner representation on ``2N`` modes: A = modes ``1..N``, B = ``N+1..2N``."""

    small: FermionRep
    big: FermionRep
    u_s: np.ndarray

    @property
    def a_modes(self) -> list[int]:
        return list(range(1, self.small.n_modes + 1))

    @property
    def b_modes(self) -> list[int]:
        n = self.small.n_modes
        return list(range(n + 1, 2 * n + 1))

    @cached_property
    def u_second(self) -> np.ndarray:
        return second_quantize(self.big, self.u_s)

    @cached_property
    def swap(self) -> np.ndarray:
        """Second-quantised permutation exchanging the A and B modes."""
        perm = self.b_modes + self.a_modes
        return mode_permutation_unitary(self.big, perm)

    def embed_a(self, x: np.ndarray) -> np.ndarray:
        return embed_homomorphism(self.small, self.big, self.a_modes, x)

    def embed_b(self, x: np.ndarray) -> np.ndarray:
        return embed_homomorphism(self.small, self.big, self.b_modes, x)

    def condexp_a(self, m: np.ndarray) -> np.ndarray:
        """Tracial conditional expectation onto A, as an ``N``-mode operator."""
        n = self.small.n_modes
        return partial_trace_high(m, n, 2 * n)

    def condexp_b(self, m: np.ndarray) -> np.ndarray:
        """Tracial conditional expectation onto B, as an ``N``-mode operator."""
        p = self.swap
        return self.condexp_a(p @ m @ dagger(p))


def doubled_rep(rep: FermionRep, s) -> DoubledRep:
    if 2 * rep.n_modes > 10:
        raise SizeOutOfRange("the doubled representation needs 2N <= 10")
    return DoubledRep(rep, build_rep(2 * rep.n_modes), dilation(s))


class Channel:
    """A linear map on ``2^N x 2^N`` matrices with a cached dense superoperator."""

    def __init__(self, rep: FermionRep, fn: Callable[[np.ndarray], np.ndarray], name: str = "channel"):
        self.rep = rep
        self._fn = fn
        self.name = name

    def __call__(self, x) -> np.ndarray:
        return self._fn(self.rep.check_operator(x))

    apply = __call__

    @cached_property
    def superop(self) -> np.ndarray:
        if self.rep.n_modes > DENSE_MAX_MODES:
            raise SizeOutOfRange(f"dense superoperators are limited to N <= {DENSE_MAX_MODES}")
        return superoperator(self._fn, self.rep.dim)

    def dual(self) -> "Channel":
        """Adjoint with respect to ``<X, Y> = tau(X* Y)``."""
        m = dagger(self.superop)
        d = self.rep.dim
        return Channel(self.rep, lambda x: (m @ x.reshape(-1, order="F")).reshape(d, d, order="F"),
                       name=f"dual({self.name})")

    def compose(self, inner: "Channel") -> "Channel":
        """``self o inner``."""
        return Channel(self.rep, lambda x: self._fn(inner._fn(x)), name=f"{self.name}*{inner.name}")


class EHKChannel(Channel):
    """The EHK quantum operation determined by a compatible pair."""

    def __init__(self, rep: FermionRep, pair: CompatiblePair):
        if pair.n != rep.n_modes:
            raise DimensionMismatch("pair size does not match the representation")
        self.pair = pair
        self.t = ancilla_symbol(pair)
        self.doubled = doubled_rep(rep, pair.s)
        self.rho_t = rho_from_symbol(rep, self.t).rho
        super().__init__(rep, self._apply, name="ehk")

    @cached_property
    def _ancilla(self) -> np.ndarray:
        return self.doubled.embed_a(self.rho_t)

    def _apply(self, x: np.ndarray) -> np.ndarray:
        dr = self.doubled
        u = dr.u_second
        joint = self._ancilla @ dr.embed_b(x)
        return dr.condexp_a(u @ joint @ u)

    def dual_doubled(self, x) -> np.ndarray:
        """``E_B(alpha_U(X) rho_T)`` with ``X`` placed on A and the ancilla on A."""
        x = self.rep.check_operator(x)
        dr = self.doubled
        u = dr.u_second
        return dr.condexp_b(u @ dr.embed_a(x) @ u @ self._ancilla)


def ehk_channel(rep: FermionRep, pair: CompatiblePair) -> EHKChannel:
    return EHKChannel(rep, pair)


def ehk_apply(rep: FermionRep, pair: CompatiblePair, x) -> np.ndarray:
    return EHKChannel(rep, pair)(x)


def ehk_dual(rep: FermionRep, pair: CompatiblePair, x, method: str = "auto") -> np.ndarray:
    """Hilbert-Schmidt adjoint of the EHK operation applied to ``X``.

    ``method`` is ``dense`` (adjoint of the superoperator, N <= 4), ``doubled``
    (the doubled-space formula) or ``auto`` (dense when allowed).
    """
    ch = EHKChannel(rep, pair)
    if method == "auto":
        method = "dense" if rep.n_modes <= DENSE_MAX_MODES else "doubled"
    if method == "dense":
        return ch.dual()(x)
    if method == "doubled":
        return ch.dual_doubled(x)
    raise ValueError(f"unknown method {method!r}")


def gauge_covariance_residual(channel: Callable, rep: FermionRep, trials: int = 5, seed: int = 0,
                              contravariant: bool = False) -> float:
    """Largest ``||alpha_t(Phi(rho)) - Phi(alpha_{+-t}(rho))||_F`` over sampled ``t, rho``."""
    rng = as_rng(seed)
    worst = 0.0
    for _ in range(trials):
        t = 2.0 * np.pi * rng.uniform()
        rho = random_density(rep.dim, rng)
        inner = gauge_action(rep, -t if contravariant else t, rho)
        worst = max(worst, fro(gauge_action(rep, t, channel(rho)) - channel(inner)))
    return worst


def transpose_channel(rep: FermionRep, conj: Conjugation | None = None) -> Channel:
    conj = conj or default_conjugation(rep)
    return Channel(rep, lambda x: transpose_map(rep, conj, x), name="transpose")


def particle_hole_channel(rep: FermionRep, conj: Conjugation | None = None) -> Channel:
    ph = particle_hole(rep, conj)
    return Channel(rep, ph.apply_dual, name="particle_hole")


class MeasurementChannel(Channel):
    """``X -> tau(E0 X) rho_{Q0} + tau((I - E0) X) rho_{Q1}``."""

    def __init__(self, rep: FermionRep, e0, q0, q1):
        e0 = rep.check_operator(e0)
        if fro(e0 - dagger(e0)) > tol.TOL_HERM * max(1.0, fro(e0)):
            raise InvalidPOVM("E0 is not Hermitian")
        w = hermitian_eig(hermitian_part(e0)).values
        if w[0] < -tol.TOL_PSD or w[-1] > 1 + tol.TOL_PSD:
            raise InvalidPOVM("E0 must satisfy 0 <= E0 <= I")
        wolfe = wolfe_check(q0, q1)
        if not wolfe.is_mixture:
            raise NotRankOneGap("Q1 - Q0 is not a signed rank-one operator")
        self.e0 = hermitian_part(e0)
        self.q0 = Symbol.make(q0).q
        self.q1 = Symbol.make(q1).q
        self.eta = wolfe.eta
        self.sign = wolfe.sign
        self.rho0 = rho_from_symbol(rep, self.q0).rho
        self.rho1 = rho_from_symbol(rep, self.q1).rho
        super().__init__(rep, self._apply, name="measurement")

    def _apply(self, x: np.ndarray) -> np.ndarray:
        p0 = self.rep.tau(self.e0 @ x)
        p1 = self.rep.tau(x) - p0
        return p0 * self.rho0 + p1 * self.rho1

    def symbol_map(self, q) -> np.ndarray:
        rho = rho_from_symbol(self.rep, q).rho
        weight = self.rep.tau((self.rep.identity - self.e0) @ rho).real
        return self.q0 + weight * (self.q1 - self.q0)


def measurement_channel(rep: FermionRep, e0, q0, q1) -> MeasurementChannel:
    return MeasurementChannel(rep, e0, q0, q1)


# ---------------------------------------------------------------------------
# classification of GIG-preserving one-to-one maps


@dataclass(frozen=True)
class Classification:
    branch: str
    s: np.ndarray
    r: np.ndarray
    residual: float
    residuals: dict

    def symbol_map(self, q) -> np.ndarray:
        return _branch_map(self.branch, self.s, self.r, as_cmatrix(q))


def _branch_map(branch: str, s, r, q) -> np.ndarray:
    n = q.shape[0]
    if branch == CP_COVARIANT:
        core = q
    elif branch == COCP_COVARIANT:
        core = q.T
    elif branch == CP_CONTRAVARIANT:
        core = np.eye(n) - q.T
    elif branch == COCP_CONTRAVARIANT:
        core = np.eye(n) - q
    else:
        raise ValueError(branch)
    return s @ core @ dagger(s) + r


def gauge_invariant_basis(rep: FermionRep) -> list[np.ndarray]:
    """Matrix units within each particle-number sector."""
    out = []
    pc = rep.popcounts
    for a in range(rep.dim):
        for b in range(rep.dim):
            if pc[a] == pc[b]:
                e = np.zeros((rep.dim, rep.dim), dtype=np.complex128)
                e[a, b] = 1.0
                out.append(e)
    return out


def injectivity_margin(channel: Callable, rep: FermionRep) -> float:
    """Smallest singular value of the channel restricted to the gauge-invariant subalgebra."""
    cols = [channel(e).reshape(-1) for e in gauge_invariant_basis(rep)]
    return float(np.linalg.svd(np.stack(cols, axis=1), compute_uv=False)[-1])


def _rank_one_factor(psi_units: np.ndarray, n: int):
    """Factor ``sum_jk E_jk (x) Psi(E_jk) = v v*`` and return ``(S, rank-one residual)``."""
    choi = np.zeros((n * n, n * n), dtype=np.complex128)
    for j in range(n):
        for k in range(n):
            choi[j * n:(j + 1) * n, k * n:(k + 1) * n] = psi_units[j, k]
    eig = hermitian_eig(hermitian_part(choi))
    lam = eig.values[-1]
    if lam <= 0:
        return None, np.inf
    v = np.sqrt(lam) * eig.vectors[:, -1]
    s = v.reshape(n, n).T  # column j is the block j
    resid = fro(choi - np.outer(v, v.conj())) / max(1.0, fro(choi))
    return s, resid


def classify(channel: Callable, rep: FermionRep, conj: Conjugation | None = None,
             step: float = tol.CLASSIFY_STEP, verify_tol: float = 1e-6, seed: int = 0,
             injective_min_sv: float = tol.INJECTIVE_MIN_SV) -> Classification:
    """Identify which of the four structural forms a one-to-one GIG-preserving map has.

    Only the default (computational-basis) conjugation is supported for the
    transposes that appear in the symbol maps.
    """
    if conj is not None and conj.real_basis is not None:
        raise NotImplementedError("classification assumes the computational basis is real")
    n = rep.n_modes
    margin = injectivity_margin(channel, rep)
    if margin <= injective_min_sv:
        raise NotInjective(f"map is not one-to-one on the gauge-invariant subalgebra (sv {margin:.3e})")

    def gamma(q):
        return symbol_of(rep, hermitian_part(channel(rho_from_symbol(rep, q).rho)))

    eye = np.eye(n)
    g0 = gamma(np.zeros((n, n)))
    g1 = gamma(eye)
    base = 0.5 * eye

    def psi(x):
        return (gamma(base + step * x) - gamma(base - step * x)) / (2.0 * step)

    units = np.zeros((n, n, n, n), dtype=np.complex128)
    for j in range(n):
        for k in range(j, n):
            e = np.zeros((n, n), dtype=np.complex128)
            e[j, k] = 1.0
            xp = e + e.T
            if j == k:
                units[j, j] = psi(xp) / 2.0
                continue
            xm = 1j * (e - e.T)
            pp, pm = psi(xp), psi(xm)
            units[j, k] = (pp - 1j * pm) / 2.0
            units[k, j] = (pp + 1j * pm) / 2.0
    transposed = np.transpose(units, (1, 0, 2, 3))

    candidates = {
        CP_COVARIANT: (units, g0),
        COCP_COVARIANT: (transposed, g0),
        CP_CONTRAVARIANT: (-transposed, g1),
        COCP_CONTRAVARIANT: (-units, g1),
    }
    rng = as_rng(seed)
    from .rng import random_symbol
    probes = [np.zeros((n, n)), eye, base] + [random_symbol(n, rng) for _ in range(3)]
    observed = [gamma(q) for q in probes]
    residuals = {}
    fits = {}
    for branch, (psi_units, r) in candidates.items():
        s, _ = _rank_one_factor(psi_units, n)
        if s is None:
            residuals[branch] = np.inf
            continue
        res = max(fro(_branch_map(branch, s, r, q) - o) for q, o in zip(probes, observed))
        residuals[branch] = res
        fits[branch] = (s, hermitian_part(r))
    # The orientation test picks covariant or contravariant; the residual picks CP or co-CP.
    diff = hermitian_eig(hermitian_part(g1 - g0)).values
    if diff[0] >= -1e-9:
        allowed = (CP_COVARIANT, COCP_COVARIANT)
    elif diff[-1] <= 1e-9:
        allowed = (CP_CONTRAVARIANT, COCP_CONTRAVARIANT)
    else:
        raise NoConsistentBranch("gamma(I) - gamma(0) is indefinite")
    best = min(allowed, key=lambda b: residuals[b])
    if not np.isfinite(residuals[best]) or residuals[best] > verify_tol:
        raise NoConsistentBranch(f"best residual {residuals[best]:.3e} in branch {best}")
    s, r = fits[best]
    return Classification(best, s, r, residuals[best], residuals)


def align_phase(s_est: np.ndarray, s_true: np.ndarray) -> np.ndarray:
    """Multiply ``s_est`` by the unit scalar that best matches ``s_true``."""
    overlap = np.vdot(s_est.reshape(-1), s_true.reshape(-1))
    if abs(overlap) == 0:
        return s_est
    return s_est * (overlap / abs(overlap))
