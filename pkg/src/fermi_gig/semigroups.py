"""GIG quantum dynamical semigroups parameterized by ``(G, A)``.

Superoperators use column stacking, so ``X -> L X R`` has matrix
``kron(R.T, L)``.  Generators act on observables (``ldual``) or on
densities (``lprimal``); the two are adjoint for ``<X, Y> = tau(X* Y)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np

from . import tolerances as tol
from .car import FermionRep, field, hat
from .channels import CompatiblePair, EHKChannel
from .errors import (
    DimensionMismatch,
    InvalidParams,
    KernelMismatch,
    NegativeWeight,
    NonCommuting,
    PowersDoNotConverge,
    SizeOutOfRange,
    SpectralRadiusAtOne,
)
from .matkernel import (
    as_cmatrix,
    dagger,
    expm,
    fro,
    hermitian_eig,
    hermitian_part,
    lyapunov_accumulate,
    psd_function,
    spectral_radius,
    stein_solve,
)

DENSE_MAX_MODES = 4

# Coefficient c of the coherent term c * i[K^, X] in the dual generator.  It is
# fixed by matching the finite-difference generator on creation operators,
# where L*(Z*(psi)) = Z*(G* psi) with G* = -H - iK forces c = -1.
COHERENT_COEFF = -1.0
COHERENT_CANDIDATES = (-1.0, -0.5, 0.5, 1.0)


@dataclass(frozen=True, eq=False)
class SemigroupParams:
    """``G`` generates a contraction semigroup and ``0 <= A <= -(G + G*)``."""

    g: np.ndarray
    a: np.ndarray

    @classmethod
    def make(cls, g, a, tol_psd: float = tol.TOL_PSD) -> "SemigroupParams":
        g = as_cmatrix(g)
        a = as_cmatrix(a)
        n = g.shape[0]
        if g.shape != (n, n) or a.shape != (n, n):
            raise DimensionMismatch("G and A must be square of the same size")
        if fro(a - dagger(a)) > tol.TOL_HERM * max(1.0, fro(a)):
            raise InvalidParams("A is not Hermitian")
        a = hermitian_part(a)
        two_h = hermitian_part(-(g + dagger(g)))
        if hermitian_eig(two_h).values[0] < -tol_psd:
            raise InvalidParams("G + G* is not negative semidefinite")
        if hermitian_eig(a).values[0] < -tol_psd:
            raise InvalidParams("A is not positive semidefinite")
        if hermitian_eig(hermitian_part(two_h - a)).values[0] < -tol_psd:
            raise InvalidParams("A exceeds -(G + G*)")
        return cls(g, a)

    @property
    def n(self) -> int:
        return self.g.shape[0]

    def r_t(self, t: float) -> np.ndarray:
        return hermitian_part(lyapunov_accumulate(self.g, self.a, t))

    def pair(self, t: float) -> CompatiblePair:
        return CompatiblePair.make(expm(t * self.g), self.r_t(t), tol_psd=1e-9)

    def symbol_map(self, q, t: float) -> np.ndarray:
        s = expm(t * self.g)
        return self.r_t(t) + s @ as_cmatrix(q) @ dagger(s)


@dataclass(frozen=True, eq=False)
class GeneratorData:
    h: np.ndarray
    k: np.ndarray
    t_sym: np.ndarray
    jump_vectors: np.ndarray  # columns phi_j
    jump_weights: np.ndarray  # lambda_j
    khat: np.ndarray
    coherent: float = COHERENT_COEFF

    @property
    def n_jumps(self) -> int:
        return self.jump_vectors.shape[1]


def generator_data(params: SemigroupParams, rep: FermionRep, coherent: float = COHERENT_COEFF,
                   drop_tol: float = 1e-14) -> GeneratorData:
    """Lindblad data ``(H, K, T, {phi_j}, {lambda_j}, K^)`` for ``(G, A)``."""
    if params.n != rep.n_modes:
        raise DimensionMismatch("parameters do not match the representation")
    g = params.g
    h = hermitian_part(-0.5 * (g + dagger(g)))
    k = hermitian_part((g - dagger(g)) / 2j)
    two_h = 2.0 * h
    root = psd_function(two_h, "sqrt")
    inv_root = psd_function(two_h, "inv_sqrt_pinv")
    t_sym = hermitian_part(inv_root @ params.a @ inv_root)
    eig = hermitian_eig(t_sym)
    lam = np.clip(eig.values, 0.0, 1.0)
    phis = root @ eig.vectors
    norms = np.linalg.norm(phis, axis=0)
    keep = norms > drop_tol
    return GeneratorData(h, k, t_sym, phis[:, keep], lam[keep], hat(rep, k), coherent)


def _jump_ops(data: GeneratorData, rep: FermionRep):
    for j in range(data.n_jumps):
        z = field(rep, data.jump_vectors[:, j])
        yield data.jump_weights[j], z, dagger(z)


def lindblad_dual_apply(data: GeneratorData, rep: FermionRep, x) -> np.ndarray:
    """Dual (Heisenberg-picture) generator applied to ``X``."""
    x = rep.check_operator(x)
    gx = rep.grade(x)
    out = data.coherent * 1j * (data.khat @ x - x @ data.khat)
    for lam, z, zd in _jump_ops(data, rep):
        if lam < 1.0:
            n_op = zd @ z
            out += (1.0 - lam) * (zd @ gx @ z - 0.5 * (n_op @ x + x @ n_op))
        if lam > 0.0:
            m_op = z @ zd
            out += lam * (z @ gx @ zd - 0.5 * (m_op @ x + x @ m_op))
    return out


def lindblad_apply(data: GeneratorData, rep: FermionRep, rho) -> np.ndarray:
    """Schroedinger-picture generator, the adjoint of :func:`lindblad_dual_apply`."""
    rho = rep.check_operator(rho)
    out = -data.coherent * 1j * (data.khat @ rho - rho @ data.khat)
    for lam, z, zd in _jump_ops(data, rep):
        if lam < 1.0:
            n_op = zd @ z
            out += (1.0 - lam) * (rep.grade(z @ rho @ zd) - 0.5 * (n_op @ rho + rho @ n_op))
        if lam > 0.0:
            m_op = z @ zd
            out += lam * (rep.grade(zd @ rho @ z) - 0.5 * (m_op @ rho + rho @ m_op))
    return out


def dual_superop(data: GeneratorData, rep: FermionRep) -> np.ndarray:
    """Matrix of the dual generator in the column-stacking convention."""
    if rep.n_modes > DENSE_MAX_MODES:
        raise SizeOutOfRange(f"dense generators are limited to N <= {DENSE_MAX_MODES}")
    eye = rep.identity
    w = rep.parity_op
    kh = data.khat
    m = data.coherent * 1j * (np.kron(eye, kh) - np.kron(kh.T, eye))
    for lam, z, zd in _jump_ops(data, rep):
        for weight, left, right in ((1.0 - lam, zd, z), (lam, z, zd)):
            if weight == 0.0:
                continue
            prod_op = left @ right
            m = m + weight * (np.kron((w @ right).T, left @ w)
                              - 0.5 * (np.kron(eye, prod_op) + np.kron(prod_op.T, eye)))
    return m


def primal_superop(data: GeneratorData, rep: FermionRep) -> np.ndarray:
    return dagger(dual_superop(data, rep))


def _vec(x):
    return x.reshape(-1, order="F")


def _unvec(v, d):
    return v.reshape(d, d, order="F")


def ehk_dual_superop(pair: CompatiblePair, rep: FermionRep) -> np.ndarray:
    return dagger(EHKChannel(rep, pair).superop)


def finite_difference_generator(params: SemigroupParams, rep: FermionRep, x, step: float = 1e-4) -> np.ndarray:
    """``(Phi*_t(X) - X)/t`` at ``t = step`` with one Richardson step over ``{t, t/2}``."""
    if not (0.0 < step <= 1e-2):
        raise ValueError("step must lie in (0, 1e-2]")
    x = rep.check_operator(x)
    return finite_difference_superop(params, rep, step)(x)


def finite_difference_superop(params: SemigroupParams, rep: FermionRep, step: float = 1e-4):
    """Return an applier of the finite-difference generator (reuses the two channels)."""
    d = rep.dim
    m1 = ehk_dual_superop(params.pair(step), rep)
    m2 = ehk_dual_superop(params.pair(0.5 * step), rep)
    eye = np.eye(d * d)
    gen = 2.0 * (m2 - eye) / (0.5 * step) - (m1 - eye) / step

    def apply(x):
        return _unvec(gen @ _vec(rep.check_operator(x)), d)

    apply.matrix = gen
    return apply


@dataclass(frozen=True)
class Calibration:
    coefficient: float
    residuals: dict


def calibrate_coherent(params: SemigroupParams, rep: FermionRep, candidates: Sequence[float] = COHERENT_CANDIDATES,
                       step: float = 1e-4, accept: float = 1e-6) -> Calibration:
    """Pick the coherent coefficient that reproduces the finite-difference generator on ``Z_j*``."""
    fd = finite_difference_superop(params, rep, step)
    probes = [dagger(rep.mode_op(j)) for j in range(1, rep.n_modes + 1)]
    truths = [fd(p) for p in probes]
    residuals = {}
    for c in candidates:
        data = generator_data(params, rep, coherent=c)
        residuals[c] = max(fro(lindblad_dual_apply(data, rep, p) - t) for p, t in zip(probes, truths))
    good = [c for c, r in residuals.items() if r <= accept]
    if len(good) != 1:
        raise InvalidParams(f"calibration is not unique: {residuals}")
    return Calibration(good[0], residuals)


# ---------------------------------------------------------------------------
# evolution


def _expm_apply(m: np.ndarray, rho: np.ndarray, t: float) -> np.ndarray:
    d = rho.shape[0]
    return _unvec(expm(t * m) @ _vec(rho), d)


def rk4_evolve(apply_fn, rho0: np.ndarray, t: float, norm_est: float, local_tol: float = 1e-10) -> np.ndarray:
    """Classical RK4 with ``norm_est * h <= 0.05``, halving ``h`` until a step-doubling check passes."""
    if t == 0:
        return rho0.copy()

    def rk4(y, h):
        k1 = apply_fn(y)
        k2 = apply_fn(y + 0.5 * h * k1)
        k3 = apply_fn(y + 0.5 * h * k2)
        k4 = apply_fn(y + h * k3)
        return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    h = min(t, 0.05 / max(norm_est, 1e-12))
    y = rho0.astype(np.complex128).copy()
    done = 0.0
    while done < t * (1 - 1e-15):
        h = min(h, t - done)
        full = rk4(y, h)
        half = rk4(rk4(y, 0.5 * h), 0.5 * h)
        if fro(full - half) > local_tol * max(1.0, fro(y)) and h > 1e-8:
            h *= 0.5
            continue
        y = half + (half - full) / 15.0
        done += h
    return y


def _norm_estimate(data: GeneratorData) -> float:
    jumps = float(np.sum(np.linalg.norm(data.jump_vectors, axis=0) ** 2)) * 2.0
    return jumps + 2.0 * abs(data.coherent) * float(np.sum(np.abs(np.linalg.eigvalsh(data.k))))


def evolve(params: SemigroupParams, rep: FermionRep, rho0, t: float, method: str = "auto") -> np.ndarray:
    """``e^{tL} rho0`` by dense superoperator exponential or adaptive RK4."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    rho0 = rep.check_operator(rho0)
    data = generator_data(params, rep)
    if method == "auto":
        method = "dense" if rep.n_modes <= DENSE_MAX_MODES else "rk4"
    if method == "dense":
        return _expm_apply(primal_superop(data, rep), rho0, t)
    if method == "rk4":
        return rk4_evolve(lambda y: lindblad_apply(data, rep, y), rho0, t, _norm_estimate(data))
    raise ValueError(f"unknown method {method!r}")


def chernoff_product(params: SemigroupParams, rep: FermionRep, rho0, t: float, n: int) -> np.ndarray:
    """``(Phi_{e^{(t/n)G}, R_{t/n}})^n (rho0)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rho = rep.check_operator(rho0)
    ch = EHKChannel(rep, params.pair(t / n))
    if rep.n_modes <= DENSE_MAX_MODES:
        m = ch.superop
        v = _vec(rho)
        for _ in range(n):
            v = m @ v
        return _unvec(v, rep.dim)
    for _ in range(n):
        rho = ch(rho)
    return rho


# ---------------------------------------------------------------------------
# Mehler semigroups and Hermite operators


def commuting_eigenbasis(h, t, cluster_tol: float = 1e-8, comm_tol: float = 1e-10):
    """Joint eigenbasis of commuting Hermitian ``H`` and ``T``: returns ``(lam_H, mu_T, vectors)``."""
    h = hermitian_part(as_cmatrix(h))
    t = hermitian_part(as_cmatrix(t))
    if fro(h @ t - t @ h) > comm_tol * max(1.0, fro(h) * fro(t)):
        raise NonCommuting("H and T do not commute")
    eh = hermitian_eig(h)
    vals, vecs = eh.values, eh.vectors
    out = np.zeros_like(vecs)
    start = 0
    n = len(vals)
    while start < n:
        stop = start + 1
        while stop < n and vals[stop] - vals[start] <= cluster_tol * max(1.0, abs(vals[start])):
            stop += 1
        block = vecs[:, start:stop]
        sub = hermitian_eig(hermitian_part(dagger(block) @ t @ block))
        out[:, start:stop] = block @ sub.vectors
        start = stop
    lam = np.real(np.einsum("ij,ik,kj->j", out.conj(), h, out))
    mu = np.real(np.einsum("ij,ik,kj->j", out.conj(), t, out))
    return lam, mu, out


MODE_LABELS = ((0, 0), (1, 0), (0, 1), (1, 1))


@dataclass(frozen=True, eq=False)
class HermiteBasis:
    labels: list
    operators: list
    eigenvalues: np.ndarray
    lam: np.ndarray
    mu: np.ndarray
    vectors: np.ndarray


def hermite_basis(rep: FermionRep, h, t, kernel_tol: float = 1e-12) -> HermiteBasis:
    """Un-normalized Hermite operators of the GIG state ``rho_T`` for the Mehler pair ``(H, T)``."""
    lam, mu, vecs = commuting_eigenbasis(h, t)
    if np.any(lam < -1e-10):
        raise InvalidParams("H must be positive semidefinite")
    in_kernel = lam <= kernel_tol
    if np.any(np.abs(mu[in_kernel]) > 1e-10):
        raise KernelMismatch("ker H is not contained in ker T")
    n = rep.n_modes
    per_mode = []
    for j in range(n):
        z = field(rep, vecs[:, j])
        zd = dagger(z)
        per_mode.append({(0, 0): rep.identity, (1, 0): zd, (0, 1): z, (1, 1): zd @ z - mu[j] * rep.identity})
    labels, ops, evs = [], [], []
    for combo in product(MODE_LABELS, repeat=n):
        op = rep.identity
        for j, ab in enumerate(combo):
            if ab != (0, 0):
                op = op @ per_mode[j][ab]
        labels.append(combo)
        ops.append(op)
        evs.append(np.exp(-sum((a + b) * lam[j] for j, (a, b) in enumerate(combo))))
    return HermiteBasis(labels, ops, np.array(evs), lam, mu, vecs)


def mehler_pair(h, t) -> CompatiblePair:
    """The compatible pair ``(e^{-H}, (I - e^{-2H}) T)``."""
    h = hermitian_part(as_cmatrix(h))
    s = expm(-h)
    r = hermitian_part((np.eye(h.shape[0]) - s @ s) @ as_cmatrix(t))
    return CompatiblePair.make(s, r, tol_psd=1e-9)


def mehler_params(h, t) -> SemigroupParams:
    """``(G, A) = (-H, HT + TH)``."""
    h = hermitian_part(as_cmatrix(h))
    t = as_cmatrix(t)
    return SemigroupParams.make(-h, hermitian_part(h @ t + t @ h), tol_psd=1e-9)


# ---------------------------------------------------------------------------
# steady states and embedding


@dataclass(frozen=True, eq=False)
class SteadyStates:
    p: np.ndarray
    r_inf: np.ndarray
    prp_residual: float

    def fixed_symbol(self, q_prime) -> np.ndarray:
        """``R_inf + P Q' P*``, a fixed point of the symbol map for every ``Q'``."""
        q_prime = as_cmatrix(q_prime)
        return hermitian_part(self.r_inf + self.p @ q_prime @ dagger(self.p))

    @property
    def unique(self) -> bool:
        return fro(self.p) == 0.0


def power_limit(s, max_squarings: int = 200, tol_abs: float = 1e-11) -> np.ndarray:
    """``lim S^n`` by repeated squaring; raises when the powers do not settle."""
    s = as_cmatrix(s)
    if spectral_radius(s) < 1.0 - tol.TOL_SR:
        return np.zeros_like(s)
    m = s.copy()
    for _ in range(max_squarings):
        m2 = m @ m
        if fro(m2 - m) < tol_abs * max(1.0, fro(m)):
            m = m2
            break
        m = m2
    else:
        raise PowersDoNotConverge("S^(2^k) did not stabilize")
    if fro(m @ s - m) > 1e-9 * max(1.0, fro(m)):
        raise PowersDoNotConverge("S^n oscillates (peripheral eigenvalues other than 1)")
    return m


def steady_states(pair: CompatiblePair, rep: FermionRep | None = None) -> SteadyStates:
    s = pair.s
    p = power_limit(s)
    r_inf = hermitian_part(stein_solve(s - p, pair.r))
    prp = fro(p @ pair.r @ dagger(p))
    return SteadyStates(p, r_inf, prp)


EMBEDDABLE = "Embeddable"
NOT_EMBEDDABLE = "NotEmbeddable"


@dataclass(frozen=True, eq=False)
class EmbedResult:
    kind: str
    a: np.ndarray
    min_eig_a: float
    min_eig_gap: float
    witness: np.ndarray | None = None
    roundtrip: float | None = None

    @property
    def embeddable(self) -> bool:
        return self.kind == EMBEDDABLE


def embed_check(g_known, r, accept_tol: float = 1e-9) -> EmbedResult:
    """Decide whether ``(e^G, R)`` is the time-one map of a GIG semigroup with generator ``G``."""
    g = as_cmatrix(g_known)
    r = hermitian_part(as_cmatrix(r))
    s = expm(g)
    if spectral_radius(s) >= 1.0 - tol.TOL_SR:
        raise SpectralRadiusAtOne("e^G has spectral radius 1")
    a = hermitian_part(-stein_solve(s, g @ r + r @ dagger(g)))
    ea = hermitian_eig(a)
    gap = hermitian_part(-(g + dagger(g)) - a)
    eg = hermitian_eig(gap)
    if ea.values[0] >= -accept_tol and eg.values[0] >= -accept_tol:
        rt = fro(lyapunov_accumulate(g, a, 1.0) - r)
        return EmbedResult(EMBEDDABLE, a, ea.values[0], eg.values[0], roundtrip=rt)
    witness = ea.vectors[:, 0] if ea.values[0] < -accept_tol else eg.vectors[:, 0]
    return EmbedResult(NOT_EMBEDDABLE, a, ea.values[0], eg.values[0], witness=witness)


def combined_symbol(h, k, t_sym, q, t: float) -> np.ndarray:
    """Symbol at time ``t`` of the semigroup with ``G = -(H + iK)`` and ``A = HT + TH``."""
    h = hermitian_part(as_cmatrix(h))
    k = hermitian_part(as_cmatrix(k))
    t_sym = as_cmatrix(t_sym)
    if fro(h @ t_sym - t_sym @ h) > 1e-10 * max(1.0, fro(h) * fro(t_sym)):
        raise NonCommuting("H and T do not commute")
    g = -(h + 1j * k)
    a = h @ t_sym + t_sym @ h
    s = expm(t * g)
    return hermitian_part(s @ as_cmatrix(q) @ dagger(s) + lyapunov_accumulate(g, a, t))


# ---------------------------------------------------------------------------
# cone of generators


class ConeGenerator:
    """Nonnegative combination ``sum_i w_i L_i`` of GIG generators."""

    def __init__(self, rep: FermionRep, terms: Sequence[tuple[float, SemigroupParams]]):
        for w, _ in terms:
            if w < 0:
                raise NegativeWeight(f"weight {w} is negative")
        self.rep = rep
        self.terms = [(float(w), generator_data(p, rep)) for w, p in terms]

    def apply(self, rho) -> np.ndarray:
        rho = self.rep.check_operator(rho)
        out = np.zeros_like(rho)
        for w, data in self.terms:
            if w:
                out += w * lindblad_apply(data, self.rep, rho)
        return out

    __call__ = apply

    def dual_apply(self, x) -> np.ndarray:
        x = self.rep.check_operator(x)
        out = np.zeros_like(x)
        for w, data in self.terms:
            if w:
                out += w * lindblad_dual_apply(data, self.rep, x)
        return out

    @cached_property
    def superop(self) -> np.ndarray:
        d2 = self.rep.dim ** 2
        m = np.zeros((d2, d2), dtype=np.complex128)
        for w, data in self.terms:
            if w:
                m += w * primal_superop(data, self.rep)
        return m

    def evolve(self, rho0, t: float) -> np.ndarray:
        rho0 = self.rep.check_operator(rho0)
        if self.rep.n_modes <= DENSE_MAX_MODES:
            return _expm_apply(self.superop, rho0, t)
        est = sum(w * _norm_estimate(d) for w, d in self.terms)
        return rk4_evolve(self.apply, rho0, t, est)


def cone_combine(params1: SemigroupParams, params2: SemigroupParams, a: float, b: float,
                 rep: FermionRep) -> ConeGenerator:
    return ConeGenerator(rep, [(a, params1), (b, params2)])


def trotter_product(params1, params2, a: float, b: float, rep: FermionRep, rho0, t: float, n: int) -> np.ndarray:
    """``(e^{(ta/n)L1} e^{(tb/n)L2})^n rho0``."""
    m1 = primal_superop(generator_data(params1, rep), rep)
    m2 = primal_superop(generator_data(params2, rep), rep)
    step = expm((t * a / n) * m1) @ expm((t * b / n) * m2)
    v = _vec(rep.check_operator(rho0))
    for _ in range(n):
        v = step @ v
    return _unvec(v, rep.dim)


# ---------------------------------------------------------------------------
# Gross calculus and the carre du champ

HOLOMORPHIC = "holomorphic"
ANTIHOLOMORPHIC = "antiholomorphic"


def skew_derivation(rep: FermionRep, phi, kind: str, x) -> np.ndarray:
    """``d_phi X = Z(phi) X - Gamma(X) Z(phi)``; the antiholomorphic one uses ``Z*(phi)``."""
    x = rep.check_operator(x)
    z = field(rep, phi)
    if kind == HOLOMORPHIC:
        op = z
    elif kind == ANTIHOLOMORPHIC:
        op = dagger(z)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return op @ x - rep.grade(x) @ op


def carre_du_champ(data: GeneratorData, rep: FermionRep, x, y) -> np.ndarray:
    """``L*(XY) - L*(X) Y - X L*(Y)``."""
    x = rep.check_operator(x)
    y = rep.check_operator(y)
    return (lindblad_dual_apply(data, rep, x @ y) - lindblad_dual_apply(data, rep, x) @ y
            - x @ lindblad_dual_apply(data, rep, y))


def carre_du_champ_calculus(data: GeneratorData, rep: FermionRep, x, y, factor: float = -1.0) -> np.ndarray:
    """``factor * sum_j ((1-l_j) dbar Gamma(X) d Y + l_j d Gamma(X) dbar Y)``.

    With the generator normalized as in :func:`lindblad_dual_apply` (jump terms
    ``Z* Gamma(X) Z - {Z*Z, X}/2``) the factor is ``-1``.
    """
    gx = rep.grade(rep.check_operator(x))
    y = rep.check_operator(y)
    out = np.zeros((rep.dim, rep.dim), dtype=np.complex128)
    for j in range(data.n_jumps):
        phi = data.jump_vectors[:, j]
        lam = data.jump_weights[j]
        out += (1 - lam) * skew_derivation(rep, phi, ANTIHOLOMORPHIC, gx) @ skew_derivation(rep, phi, HOLOMORPHIC, y)
        out += lam * skew_derivation(rep, phi, HOLOMORPHIC, gx) @ skew_derivation(rep, phi, ANTIHOLOMORPHIC, y)
    return factor * out


def single_jump_dual(l_op: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``2 L X L* - L L* X - X L L*``."""
    ll = l_op @ dagger(l_op)
    return 2 * l_op @ x @ dagger(l_op) - ll @ x - x @ ll
