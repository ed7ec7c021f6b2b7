import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fermi_gig import car, condexp, gig
from fermi_gig.errors import SubspaceNotInvariant, SymbolOnBoundary
from fermi_gig.matkernel import fro
from fermi_gig.rng import SplitMix64, random_density, random_symbol, random_unitary

seeds = st.integers(min_value=0, max_value=2**64 - 1)


def subspace(rep, rng, k):
    v = random_unitary(rep.n_modes, rng)
    return condexp.ModeSubspace.make(rep, v[:, :k]), v


def test_prefix_subspace_is_partial_trace():
    rep = car.build_rep(3)
    rng = SplitMix64(1)
    sub = condexp.ModeSubspace.from_modes(rep, [1, 2])
    a = rng.complex_normal((8, 8))
    blocks = a.reshape(2, 4, 2, 4)
    want = np.kron(np.eye(2), (blocks[0, :, 0, :] + blocks[1, :, 1, :]) / 2)
    assert np.allclose(condexp.tracial_condexp(sub, a), want)
    assert np.allclose(condexp.restrict(sub, a), want[:4, :4])


@settings(max_examples=15, deadline=None)
@given(seeds, st.integers(1, 2))
def test_tracial_condexp_axioms(seed, k):
    rng = SplitMix64(seed)
    rep = car.build_rep(3)
    sub, _ = subspace(rep, rng, k)
    a = rng.complex_normal((8, 8))
    e = lambda x: condexp.tracial_condexp(sub, x)  # noqa: E731
    ea = e(a)
    assert fro(e(ea) - ea) < 1e-12
    assert fro(e(rep.identity) - rep.identity) < 1e-12
    assert abs(rep.tau(ea) - rep.tau(a)) < 1e-12
    rho = random_density(8, rng)
    assert np.linalg.eigvalsh(e(rho)).min() > -1e-12
    assert fro(ea - condexp.group_average(sub, a)) < 1e-11


def test_field_images():
    rng = SplitMix64(2)
    rep = car.build_rep(3)
    sub, v = subspace(rep, rng, 2)
    inside = car.field(rep, v[:, 0])
    outside = car.field(rep, v[:, 2])
    assert fro(condexp.tracial_condexp(sub, inside) - inside) < 1e-12
    assert fro(condexp.tracial_condexp(sub, outside)) < 1e-12
    n_in = car.hat(rep, sub.projector)
    assert fro(condexp.tracial_condexp(sub, rep.number_op) - n_in - 0.5 * rep.identity) < 1e-12


def test_state_condexp_compatibility():
    rng = SplitMix64(3)
    rep = car.build_rep(3)
    sub, v = subspace(rep, rng, 2)
    q = (v * np.array([0.2, 0.6, 0.9])[None, :]) @ v.conj().T
    rho = gig.rho_from_symbol(rep, q).rho
    a = rng.complex_normal((8, 8))
    ea = condexp.state_condexp(sub, q, a)
    assert abs(rep.tau(rho @ ea) - rep.tau(rho @ a)) < 1e-12
    assert fro(condexp.tracial_condexp(sub, ea) - ea) < 1e-12
    with pytest.raises(SubspaceNotInvariant):
        condexp.state_condexp(sub, random_symbol(3, rng), a)


def test_vacuum_condexp():
    rng = SplitMix64(4)
    rep = car.build_rep(3)
    sub, _ = subspace(rep, rng, 1)
    a = rng.complex_normal((8, 8))
    e = condexp.vacuum_projector(sub)
    va = condexp.vacuum_condexp(sub, a)
    assert fro(e @ a @ e - va @ e) < 1e-12
    assert fro(condexp.vacuum_condexp(sub, va) - va) < 1e-12
    assert fro(va - condexp.state_condexp(sub, sub.projector * 0.0, a)) < 1e-12
    vac = gig.rho_from_symbol(rep, np.zeros((3, 3))).rho
    assert abs(rep.tau(vac @ va) - rep.tau(vac @ a)) < 1e-12


def test_k_basis():
    rng = SplitMix64(5)
    rep = car.build_rep(2)
    q = random_symbol(2, rng, 0.1, 0.9)
    kb = condexp.k_basis(rep, q)
    rho = gig.rho_from_symbol(rep, q).rho
    gram = np.array([[condexp.inner_product(rep, rho, condexp.GNS, a, b) for b in kb.operators] for a in kb.operators])
    assert fro(gram - np.eye(len(kb.operators))) < 1e-11
    for op, ev in zip(kb.operators, kb.modular_eigenvalues):
        assert fro(condexp.modular_apply(rep, rho, op) - ev * op) < 1e-10
    with pytest.raises(SymbolOnBoundary):
        condexp.k_basis(rep, np.diag([0.0, 0.5]))


def test_kms_inner_product_is_symmetric_for_hermitian():
    rng = SplitMix64(6)
    rep = car.build_rep(2)
    rho = random_density(4, rng)
    a = rng.complex_normal((4, 4))
    a = a + a.conj().T
    b = rng.complex_normal((4, 4))
    b = b + b.conj().T
    kab = condexp.inner_product(rep, rho, condexp.KMS, a, b)
    assert abs(kab.imag) < 1e-12
    with pytest.raises(ValueError):
        condexp.inner_product(rep, rho, "BKM", a, b)


def test_petz_recovery_and_duality():
    rng = SplitMix64(7)
    rep = car.build_rep(3)
    sub, _ = subspace(rep, rng, 2)
    rho = random_density(8, rng)
    rec = condexp.petz_recover(rep, rho, sub, condexp.tracial_condexp(sub, rho))
    assert fro(rec - rho) < 1e-11
    gamma = condexp.tracial_condexp(sub, random_density(8, rng))
    x = rng.complex_normal((8, 8))
    lhs = rep.tau(gamma.conj().T @ condexp.accardi_cecchini(rep, rho, sub, x))
    rhs = rep.tau(condexp.petz_recover(rep, rho, sub, gamma).conj().T @ x)
    assert abs(lhs - rhs) < 1e-10
    assert fro(condexp.accardi_cecchini(rep, rho, sub, rep.identity) - rep.identity) < 1e-10
