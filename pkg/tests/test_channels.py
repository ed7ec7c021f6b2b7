import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fermi_gig import car, channels, gig
from fermi_gig.errors import IncompatiblePair, NoConsistentBranch, NotInjective, NotRankOneGap
from fermi_gig.matkernel import choi_matrix, fro
from fermi_gig.rng import SplitMix64, random_density, random_pair, random_symbol, random_unitary

seeds = st.integers(min_value=0, max_value=2**64 - 1)


def test_pair_validation():
    with pytest.raises(IncompatiblePair):
        channels.CompatiblePair.make(2 * np.eye(2), np.zeros((2, 2)))
    with pytest.raises(IncompatiblePair):
        channels.CompatiblePair.make(0.9 * np.eye(2), 0.5 * np.eye(2))
    channels.CompatiblePair.make(0.6 * np.eye(2), 0.64 * np.eye(2))


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(1, 4))
def test_dilation_is_selfadjoint_unitary(seed, n):
    s, _ = random_pair(n, SplitMix64(seed), max_norm=1.0)
    u = channels.dilation(s)
    assert fro(u @ u - np.eye(2 * n)) < 1e-11
    assert fro(u - u.conj().T) < 1e-12


@settings(max_examples=15, deadline=None)
@given(seeds, st.integers(1, 3))
def test_symbol_law(seed, n):
    rng = SplitMix64(seed)
    rep = car.build_rep(n)
    pair = channels.CompatiblePair.make(*random_pair(n, rng))
    ch = channels.EHKChannel(rep, pair)
    q = random_symbol(n, rng)
    out = ch(gig.rho_from_symbol(rep, q).rho)
    assert fro(gig.symbol_of(rep, out) - pair.symbol_map(q)) < 1e-10
    assert gig.is_gig(rep, out, seed=seed % 1000) < 1e-9


def test_ehk_is_cptp():
    rng = SplitMix64(3)
    rep = car.build_rep(2)
    ch = channels.EHKChannel(rep, channels.CompatiblePair.make(*random_pair(2, rng)))
    choi = choi_matrix(ch, rep.dim)
    assert np.linalg.eigvalsh(0.5 * (choi + choi.conj().T)).min() > -1e-12
    rho = random_density(rep.dim, rng)
    assert abs(rep.tau(ch(rho)) - 1.0) < 1e-12


def test_identity_and_replacement_channels():
    rng = SplitMix64(4)
    rep = car.build_rep(2)
    rho = random_density(rep.dim, rng)
    ident = channels.EHKChannel(rep, channels.CompatiblePair.make(np.eye(2), np.zeros((2, 2))))
    assert fro(ident(rho) - rho) < 1e-12
    r = random_symbol(2, rng)
    replace = channels.EHKChannel(rep, channels.CompatiblePair.make(np.zeros((2, 2)), r))
    assert fro(replace(rho) - gig.rho_from_symbol(rep, r).rho) < 1e-12


def test_dual_methods_agree_and_pair_with_tau():
    rng = SplitMix64(5)
    for n in (2, 3):
        rep = car.build_rep(n)
        pair = channels.CompatiblePair.make(*random_pair(n, rng))
        x = rng.complex_normal((rep.dim, rep.dim))
        dense = channels.ehk_dual(rep, pair, x, method="dense")
        doubled = channels.ehk_dual(rep, pair, x, method="doubled")
        assert fro(dense - doubled) < 1e-11
        rho = random_density(rep.dim, rng)
        assert abs(rep.tau(channels.ehk_apply(rep, pair, rho) @ x) - rep.tau(rho @ dense)) < 1e-11
        assert fro(channels.ehk_dual(rep, pair, rep.identity) - rep.identity) < 1e-12


def test_composition_of_ehk_channels():
    # Phi_{S1,R1} o Phi_{S2,R2} = Phi_{S1 S2, S1 R2 S1* + R1} on all operators
    rng = SplitMix64(6)
    rep = car.build_rep(2)
    p1 = channels.CompatiblePair.make(*random_pair(2, rng))
    p2 = channels.CompatiblePair.make(*random_pair(2, rng))
    comp = channels.CompatiblePair.make(p1.s @ p2.s, p1.s @ p2.r @ p1.s.conj().T + p1.r)
    x = rng.complex_normal((4, 4))
    lhs = channels.ehk_apply(rep, p1, channels.ehk_apply(rep, p2, x))
    assert fro(lhs - channels.ehk_apply(rep, comp, x)) < 1e-11


def test_gauge_covariance():
    rng = SplitMix64(7)
    rep = car.build_rep(3)
    ch = channels.EHKChannel(rep, channels.CompatiblePair.make(*random_pair(3, rng)))
    assert channels.gauge_covariance_residual(ch, rep, trials=3) < 1e-12
    ph = channels.particle_hole_channel(rep)
    assert channels.gauge_covariance_residual(ph, rep, trials=3, contravariant=True) < 1e-12
    assert channels.gauge_covariance_residual(ph, rep, trials=3) > 1e-3


def test_measurement_channel():
    rep = car.build_rep(2)
    rng = SplitMix64(8)
    q0 = np.diag([0.3, 0.5])
    eta = random_unitary(2, rng)[:, 0]
    q1 = q0 + 0.2 * np.outer(eta, eta.conj())
    e0 = gig.rho_from_symbol(rep, np.diag([0.4, 0.4])).rho / 4.0
    ch = channels.measurement_channel(rep, e0, q0, q1)
    q = random_symbol(2, rng)
    out = ch(gig.rho_from_symbol(rep, q).rho)
    assert fro(gig.symbol_of(rep, out) - ch.symbol_map(q)) < 1e-12
    assert gig.is_gig(rep, out) < 1e-10
    with pytest.raises(NotRankOneGap):
        channels.measurement_channel(rep, e0, np.diag([0.2, 0.8]), np.diag([0.8, 0.2]))


@pytest.mark.parametrize("branch", channels.BRANCHES)
def test_classifier_branches(branch):
    rng = SplitMix64(9)
    rep = car.build_rep(2)
    pair = channels.CompatiblePair.make(*random_pair(2, rng, max_norm=0.9))
    ch = channels.EHKChannel(rep, pair)
    tr = channels.transpose_channel(rep)
    ph = channels.particle_hole_channel(rep)
    target = {channels.CP_COVARIANT: ch, channels.COCP_COVARIANT: ch.compose(tr),
              channels.CP_CONTRAVARIANT: ch.compose(ph), channels.COCP_CONTRAVARIANT: ch.compose(ph).compose(tr)}[branch]
    res = channels.classify(target, rep)
    assert res.branch == branch
    assert fro(channels.align_phase(res.s, pair.s) - pair.s) < 1e-8
    assert fro(res.r - pair.r) < 1e-8
    q = random_symbol(2, rng)
    assert fro(res.symbol_map(q) - gig.symbol_of(rep, target(gig.rho_from_symbol(rep, q).rho))) < 1e-8


def test_classifier_rejects_non_injective_and_non_gaussian():
    rep = car.build_rep(2)
    collapse = channels.EHKChannel(rep, channels.CompatiblePair.make(np.zeros((2, 2)), 0.5 * np.eye(2)))
    with pytest.raises(NotInjective):
        channels.classify(collapse, rep)
    # a dephasing in the occupation basis keeps the symbol law only for diagonal Q
    dephase = channels.Channel(rep, lambda x: np.diag(np.diag(x)))
    with pytest.raises((NoConsistentBranch, NotInjective)):
        channels.classify(dephase, rep)
