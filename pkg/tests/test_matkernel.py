import numpy as np
import pytest
import scipy.integrate
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from fermi_gig import matkernel as mk
from fermi_gig.errors import DimensionMismatch, NonHermitian, NonSquare, NotPSD, SpectralRadiusAtOne
from fermi_gig.rng import SplitMix64, random_contraction, random_hermitian

seeds = st.integers(min_value=0, max_value=2**64 - 1)
sizes = st.integers(min_value=1, max_value=8)


@settings(max_examples=40, deadline=None)
@given(seeds, sizes)
def test_hermitian_eig_reconstructs(seed, n):
    a = random_hermitian(n, SplitMix64(seed))
    dec = mk.hermitian_eig(a)
    v, w = dec.vectors, dec.values
    assert np.all(np.diff(w) >= 0)
    assert np.allclose(v.conj().T @ v, np.eye(n), atol=1e-12)
    assert np.allclose((v * w) @ v.conj().T, a, atol=1e-12)
    assert np.allclose(w, np.linalg.eigvalsh(a), atol=1e-12)


@pytest.mark.parametrize("backend", ["python", "compiled"])
def test_backends_agree(backend):
    if backend == "compiled" and mk.BACKEND != "compiled":
        pytest.skip("compiled kernel not built")
    a = random_hermitian(12, SplitMix64(3))
    dec = mk.hermitian_eig(a, backend=backend)
    assert np.allclose(dec.values, np.linalg.eigvalsh(a), atol=1e-12)
    assert mk.fro((dec.vectors * dec.values) @ dec.vectors.conj().T - a) < 1e-12


def test_degenerate_spectrum():
    u = scipy.linalg.qr(SplitMix64(1).complex_normal((5, 5)))[0]
    a = (u * np.array([1.0, 1.0, 1.0, -2.0, -2.0])) @ u.conj().T
    dec = mk.hermitian_eig(a)
    assert np.allclose(dec.values, [-2, -2, 1, 1, 1], atol=1e-13)
    assert mk.fro((dec.vectors * dec.values) @ dec.vectors.conj().T - a) < 1e-12


def test_input_checks():
    with pytest.raises(NonHermitian):
        mk.hermitian_eig(np.array([[0, 1], [0, 0]]))
    with pytest.raises(NonSquare):
        mk.hermitian_eig(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        mk.hermitian_eig(np.eye(2), backend="fortran")


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 6), st.floats(0.01, 20.0))
def test_expm_matches_scipy(seed, n, scale):
    a = SplitMix64(seed).complex_normal((n, n)) * scale / n
    ref = scipy.linalg.expm(a)
    assert mk.fro(mk.expm(a) - ref) <= 1e-11 * max(1.0, mk.fro(ref))


def test_expm_known_values():
    # e^{[[0, t], [-t, 0]]} is a rotation
    t = 0.7
    assert np.allclose(mk.expm([[0, t], [-t, 0]]), [[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]], atol=1e-15)
    assert np.allclose(mk.expm([[-1.0, 2.0], [0.0, -1.0]]), np.exp(-1) * np.array([[1, 2], [0, 1]]), atol=1e-15)


def test_psd_function():
    a = random_hermitian(4, SplitMix64(5))
    p = a @ a
    r = mk.psd_function(p, "sqrt")
    assert mk.fro(r @ r - p) < 1e-12
    assert mk.fro(mk.psd_function(p + np.eye(4), "log") - scipy.linalg.logm(p + np.eye(4))) < 1e-11
    assert mk.fro(mk.psd_function(p, "pow", p=0.5) - r) < 1e-11
    with pytest.raises(NotPSD):
        mk.psd_function(-np.eye(2), "sqrt")


def test_sqrt_of_exact_projector_is_exact():
    v = scipy.linalg.qr(SplitMix64(9).complex_normal((3, 3)))[0][:, :1]
    proj = np.eye(3) - v @ v.conj().T
    r = mk.psd_function(proj, "sqrt")
    assert mk.fro(r - proj) < 1e-13


def test_pinv_kernel():
    m = np.diag([2.0, 1e-14, 0.0])
    assert np.allclose(mk.psd_function(m, "pinv"), np.diag([0.5, 0.0, 0.0]))


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 5))
def test_stein_matches_scipy(seed, n):
    rng = SplitMix64(seed)
    s = random_contraction(n, rng, 0.9)
    r = random_hermitian(n, rng)
    x = mk.stein_solve(s, r)
    assert mk.fro(x - s @ x @ s.conj().T - r) < 1e-10
    assert mk.fro(x - scipy.linalg.solve_discrete_lyapunov(s, r)) < 1e-10


def test_stein_refuses_unit_radius():
    with pytest.raises(SpectralRadiusAtOne):
        mk.stein_solve(np.eye(2), np.eye(2))
    with pytest.raises(DimensionMismatch):
        mk.stein_solve(np.eye(2) * 0.5, np.eye(3))


def test_lyapunov_accumulate_quadrature():
    rng = SplitMix64(11)
    g = rng.complex_normal((3, 3)) - 2 * np.eye(3)
    a = random_hermitian(3, rng)
    ref, _ = scipy.integrate.quad_vec(lambda s: scipy.linalg.expm(s * g) @ a @ scipy.linalg.expm(s * g).conj().T,
                                      0.0, 1.3, epsabs=1e-13)
    assert mk.fro(mk.lyapunov_accumulate(g, a, 1.3) - ref) < 1e-10
    assert mk.fro(mk.lyapunov_accumulate(g, a, 0.0)) == 0.0


def test_superoperator_conventions():
    rng = SplitMix64(2)
    left, right, x = (rng.complex_normal((3, 3)) for _ in range(3))
    sup = mk.superoperator(lambda y: left @ y @ right, 3)
    assert np.allclose(sup, mk.left_right_superop(left, right))
    assert np.allclose(mk.unvec(sup @ mk.vec(x), 3), left @ x @ right)


def test_choi_of_identity_is_rank_one():
    c = mk.choi_matrix(lambda x: x, 3)
    w = np.linalg.eigvalsh(c)
    assert np.isclose(w[-1], 3.0) and np.allclose(w[:-1], 0.0)


def test_spectral_radius():
    assert mk.spectral_radius([[0.5, 10.0], [0.0, -0.7]]) == pytest.approx(0.7)
