import numpy as np
import pytest
import scipy.linalg
from functools import reduce
from hypothesis import given, settings
from hypothesis import strategies as st

from fermi_gig import car
from fermi_gig.errors import DimensionMismatch, NotInjective, NotUnitary, SizeOutOfRange
from fermi_gig.rng import SplitMix64, random_hermitian, random_unitary

seeds = st.integers(min_value=0, max_value=2**64 - 1)

LOWER = np.array([[0.0, 1.0], [0.0, 0.0]])
SIGMA_Z = np.diag([1.0, -1.0])


def kron_mode(n, j):
    """Jordan-Wigner annihilator built from Kronecker factors (high bits first)."""
    factors = [np.eye(2)] * (n - j) + [LOWER] + [SIGMA_Z] * (j - 1)
    return reduce(np.kron, factors)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_mode_ops_match_kronecker_oracle(n):
    rep = car.build_rep(n)
    for j in range(1, n + 1):
        assert np.array_equal(rep.mode_op(j), kron_mode(n, j))


def test_number_parity_and_trace():
    rep = car.build_rep(3)
    assert np.array_equal(np.diag(rep.number_op).real, [0, 1, 1, 2, 1, 2, 2, 3])
    assert np.allclose(rep.parity_op, np.diag((-1.0) ** np.array([0, 1, 1, 2, 1, 2, 2, 3])))
    assert rep.tau(rep.identity) == 1.0
    with pytest.raises(SizeOutOfRange):
        car.build_rep(0)


def test_vacuum_is_annihilated():
    rep = car.build_rep(3)
    omega = np.zeros(rep.dim)
    omega[0] = 1.0
    for j in range(1, 4):
        assert np.allclose(rep.mode_op(j) @ omega, 0.0)


def test_field_linearity_conventions():
    rep = car.build_rep(2)
    psi = np.array([1.0 + 2.0j, -0.5j])
    assert np.allclose(car.field(rep, 1j * psi), -1j * car.field(rep, psi))
    assert np.allclose(car.field_dag(rep, 1j * psi), 1j * car.field_dag(rep, psi))
    phi = np.array([0.3, 1.0 + 1.0j])
    anti = car.field(rep, psi) @ car.field_dag(rep, phi) + car.field_dag(rep, phi) @ car.field(rep, psi)
    assert np.allclose(anti, np.vdot(psi, phi) * rep.identity)


def test_hat_of_identity_is_number_operator():
    rep = car.build_rep(3)
    assert np.allclose(car.hat(rep, np.eye(3)), rep.number_op)


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(1, 4))
def test_second_quantize_equals_exponential_of_hat(seed, n):
    rep = car.build_rep(n)
    x = random_hermitian(n, SplitMix64(seed))
    u = scipy.linalg.expm(1j * x)
    assert np.linalg.norm(car.second_quantize(rep, u) - scipy.linalg.expm(1j * car.hat(rep, x))) < 1e-11


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(1, 4))
def test_second_quantize_intertwines_fields(seed, n):
    rep = car.build_rep(n)
    rng = SplitMix64(seed)
    u = random_unitary(n, rng)
    uq = car.second_quantize(rep, u)
    psi = rng.complex_normal(n)
    assert np.linalg.norm(uq @ car.field(rep, psi) @ uq.conj().T - car.field(rep, u @ psi)) < 1e-12
    v = random_unitary(n, rng)
    assert np.linalg.norm(car.second_quantize(rep, u @ v) - uq @ car.second_quantize(rep, v)) < 1e-12


def test_second_quantize_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        car.second_quantize(car.build_rep(2), np.diag([1.0, 0.5]))


def test_gauge_action_and_projection():
    rep = car.build_rep(2)
    rng = SplitMix64(4)
    a = rng.complex_normal((4, 4))
    t = 0.37
    u = car.gauge_unitary(rep, t)
    assert np.allclose(car.gauge_action(rep, t, a), u.conj().T @ a @ u)
    p = car.gauge_project(rep, a)
    assert np.allclose(p @ rep.number_op, rep.number_op @ p)
    assert np.allclose(car.gauge_project(rep, p), p)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_particle_hole(n):
    rep = car.build_rep(n)
    ph = car.particle_hole(rep)
    u = ph.unitary
    assert np.allclose(u @ u.conj().T, rep.identity, atol=1e-12)
    assert np.allclose(u, u.conj().T, atol=1e-12)
    psi = SplitMix64(n).complex_normal(n)
    assert np.linalg.norm(ph.apply(car.field(rep, psi)) - car.field_dag(rep, psi.conj())) < 1e-12


def test_transpose_map_is_antilinear_and_multiplicative_reversed():
    rep = car.build_rep(2)
    conj = car.default_conjugation(rep)
    rng = SplitMix64(8)
    a, b = rng.complex_normal((4, 4)), rng.complex_normal((4, 4))
    tr = lambda x: car.transpose_map(rep, conj, x)  # noqa: E731
    assert np.allclose(tr(1j * a), -1j * tr(a))
    assert np.allclose(tr(a @ b), tr(a) @ tr(b))
    for j in (1, 2):
        assert np.allclose(tr(rep.mode_op(j)), rep.mode_op(j))


def test_rotated_conjugation():
    rep = car.build_rep(2)
    v = random_unitary(2, SplitMix64(5))
    conj = car.Conjugation(rep, v)
    psi = v[:, 0] * (2.0 + 1.0j)
    assert np.allclose(conj.single(psi), v[:, 0] * (2.0 - 1.0j))
    z = car.field(rep, v[:, 1])
    assert np.allclose(conj.lift(z), z, atol=1e-12)


def test_embed_homomorphism():
    src, dst = car.build_rep(2), car.build_rep(4)
    mode_map = [3, 1]
    emb = lambda x: car.embed_homomorphism(src, dst, mode_map, x)  # noqa: E731
    for j, target in zip((1, 2), mode_map):
        assert np.allclose(emb(src.mode_op(j)), dst.mode_op(target))
    rng = SplitMix64(6)
    a, b = rng.complex_normal((4, 4)), rng.complex_normal((4, 4))
    assert np.allclose(emb(a @ b), emb(a) @ emb(b))
    assert np.allclose(emb(src.identity), dst.identity)
    with pytest.raises(NotInjective):
        car.embed_homomorphism(src, dst, [1, 1], a)
    with pytest.raises(DimensionMismatch):
        car.embed_homomorphism(src, dst, [1, 5], a)


def test_monomial_basis_spans():
    rep = car.build_rep(2)
    x = SplitMix64(7).complex_normal((4, 4))
    coeffs = car.expand_monomials(rep, x)
    recon = sum(c * m for c, m in zip(coeffs, car.monomial_basis(rep)))
    assert np.allclose(recon, x)
    assert len(car.monomial_labels(3)) == 64


def test_partial_trace_and_refill():
    rng = SplitMix64(12)
    a = rng.complex_normal((4, 4))
    b = rng.complex_normal((2, 2))
    big = np.kron(b, a)
    assert np.allclose(car.partial_trace_high(big, 2, 3), np.trace(b) / 2 * a)
    assert np.allclose(car.refill_high(a, 2, 3), np.kron(np.eye(2), a))


def test_mode_permutation_swaps_fields():
    rep = car.build_rep(3)
    u = car.mode_permutation_unitary(rep, [2, 3, 1])
    assert np.allclose(u @ rep.mode_op(1) @ u.conj().T, rep.mode_op(2))
    assert np.allclose(u @ rep.mode_op(3) @ u.conj().T, rep.mode_op(1))


def test_majorana_squares():
    rep = car.build_rep(2)
    psi = np.array([0.6, 0.8j])
    q, p = car.majorana(rep, psi)
    assert np.allclose(q @ q, rep.identity) and np.allclose(p @ p, rep.identity)
    assert np.allclose(q @ p + p @ q, 0.0)
