import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from fermi_gig import car, gig
from fermi_gig.errors import DimensionMismatch, InvalidSymbol, SymbolOnBoundary
from fermi_gig.rng import SplitMix64, random_symbol, random_unitary

seeds = st.integers(min_value=0, max_value=2**64 - 1)


def test_single_mode_density_frozen():
    rep = car.build_rep(1)
    rho = gig.rho_from_symbol(rep, [[0.3]]).rho
    assert np.allclose(rho, np.diag([1.4, 0.6]), atol=1e-15)
    assert np.allclose(gig.rho_from_symbol(rep, [[0.0]]).rho, np.diag([2.0, 0.0]))


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(1, 4))
def test_product_formula_matches_rotated_oracle(seed, n):
    rep = car.build_rep(n)
    q = random_symbol(n, SplitMix64(seed))
    rho = gig.rho_from_symbol(rep, q).rho
    assert np.linalg.norm(rho - gig.rho_from_symbol_rotated(rep, q)) < 1e-11
    assert abs(rep.tau(rho) - 1.0) < 1e-12
    assert np.linalg.eigvalsh(rho).min() > -1e-12
    assert np.linalg.norm(gig.symbol_of(rep, rho) - q) < 1e-12


@settings(max_examples=15, deadline=None)
@given(seeds, st.integers(1, 3))
def test_gibbs_oracle(seed, n):
    rep = car.build_rep(n)
    q = random_symbol(n, SplitMix64(seed), 0.05, 0.95)
    h = gig.gibbs_form(q)
    e = scipy.linalg.expm(-car.hat(rep, h))
    assert np.linalg.norm(e / rep.tau(e) - gig.rho_from_symbol(rep, q).rho) < 1e-10
    assert np.linalg.norm(gig.gibbs_density(rep, h) - gig.rho_from_symbol(rep, q).rho) < 1e-10


def test_degenerate_symbol_basis_independent():
    rep = car.build_rep(3)
    v = random_unitary(3, SplitMix64(1))
    q = (v * np.array([0.4, 0.4, 0.7])) @ v.conj().T
    p = car.permutation_matrix([3, 1, 2])
    r1 = gig.rho_from_symbol(rep, q).rho
    up = car.second_quantize(rep, p)
    r2 = up.conj().T @ gig.rho_from_symbol(rep, p @ q @ p.T).rho @ up
    assert np.linalg.norm(r1 - r2) < 1e-11


def test_moments_match_determinants():
    rep = car.build_rep(3)
    rng = SplitMix64(2)
    q = random_symbol(3, rng)
    rho = gig.rho_from_symbol(rep, q).rho
    psis = [rng.complex_normal(3) for _ in range(2)]
    phis = [rng.complex_normal(3) for _ in range(2)]
    want = np.linalg.det(np.array([[np.vdot(f, q @ p) for p in psis] for f in phis]))
    assert abs(gig.moment(rep, rho, psis, phis) - want) < 1e-12
    assert abs(gig.moment(rep, rho, psis, phis[:1])) < 1e-13
    assert gig.is_gig(rep, rho) < 1e-12


def test_symbol_validation():
    with pytest.raises(InvalidSymbol):
        gig.Symbol.make(np.diag([0.5, 1.5]))
    with pytest.raises(InvalidSymbol):
        gig.Symbol.make([[0.5, 0.1], [0.0, 0.5]])
    with pytest.raises(DimensionMismatch):
        gig.rho_from_symbol(car.build_rep(2), np.eye(3) * 0.5)
    with pytest.raises(SymbolOnBoundary):
        gig.gibbs_form(np.diag([0.0, 0.5]))


def test_wolfe_check():
    q0 = np.diag([0.3, 0.5])
    eta = np.array([0.6, 0.8j])
    res = gig.wolfe_check(q0, q0 - 0.2 * np.outer(eta, eta.conj()))
    assert res.is_mixture and res.sign == -1
    assert np.allclose(np.outer(res.eta, res.eta.conj()), 0.2 * np.outer(eta, eta.conj()))
    assert not gig.wolfe_check(np.diag([0.2, 0.8]), np.diag([0.8, 0.2])).is_mixture


def test_non_gaussian_mixture_keeps_average_symbol():
    rep = car.build_rep(2)
    qa, qb = np.diag([0.2, 0.8]), np.diag([0.8, 0.2])
    mid = 0.5 * (gig.rho_from_symbol(rep, qa).rho + gig.rho_from_symbol(rep, qb).rho)
    assert np.allclose(gig.symbol_of(rep, mid), 0.5 * (qa + qb))
    # the two-particle moment of a GIG state with symbol 1/2 would be 1/4
    assert abs(gig.moment(rep, mid, [[1, 0], [0, 1]], [[1, 0], [0, 1]]) - 0.16) < 1e-12
    assert gig.is_gig(rep, mid) > 1e-2
