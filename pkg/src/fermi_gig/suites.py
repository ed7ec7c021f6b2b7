"""Verification suites used by ``fermi-gig verify``.

Each suite returns a list of :class:`Check` records.  A check passes when its
residual is at most its tolerance, except for checks built with
``lower=True``, which pass when the residual is at least the tolerance (used
for "must fail" witnesses such as a non-Gaussian mixture).
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import car, channels, condexp, gig, semigroups
from .matkernel import expm, fro, hermitian_part
from .rng import SplitMix64, random_density, random_hermitian, random_pair, random_params, random_symbol, random_unitary
from .tolerances import Tolerances


@dataclass
class Check:
    name: str
    passed: bool
    residual: float
    tolerance: float
    wall_time_ms: float = 0.0

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"


def check(name: str, residual: float, tolerance: float, lower: bool = False) -> Check:
    residual = float(residual)
    ok = residual >= tolerance if lower else residual <= tolerance
    return Check(name, bool(ok and np.isfinite(residual)), residual, float(tolerance))


def _cap(n: int, hi: int) -> int:
    return max(1, min(n, hi))


def suite_car(n, rng, tols):
    worst = 0.0
    for m in range(1, _cap(n, 6) + 1):
        rep = car.build_rep(m)
        z = rep.mode_ops
        for j in range(m):
            for k in range(m):
                zd = z[k].conj().T
                worst = max(worst, np.abs(z[j] @ zd + zd @ z[j] - (j == k) * rep.identity).max())
                worst = max(worst, np.abs(z[j] @ z[k] + z[k] @ z[j]).max())
    return [check("car_anticommutators", worst, tols.car)]


def suite_moments(n, rng, tols):
    m = _cap(n, 4)
    rep = car.build_rep(m)
    worst = 0.0
    for _ in range(5):
        st = gig.rho_from_symbol(rep, random_symbol(m, rng))
        worst = max(worst, gig.is_gig(rep, st.rho, sample_budget=2, seed=rng.next_u64()))
    return [check("gaussian_moments", worst, tols.moment)]


def suite_wolfe(n, rng, tols):
    rep = car.build_rep(2)
    q0 = np.diag([0.3, 0.6])
    eta = random_unitary(2, rng)[:, 0]
    q1 = q0 + 0.2 * np.outer(eta, eta.conj())
    r0 = gig.rho_from_symbol(rep, q0).rho
    r1 = gig.rho_from_symbol(rep, q1).rho
    ok = max(gig.is_gig(rep, (1 - lam) * r0 + lam * r1, seed=1) for lam in (0.25, 0.5, 0.75))
    q2 = np.diag([0.2, 0.8])
    bad = gig.is_gig(rep, 0.5 * (gig.rho_from_symbol(rep, q2).rho + gig.rho_from_symbol(rep, q2[::-1, ::-1]).rho), seed=1)
    return [check("wolfe_rank_one", ok, tols.wolfe_pass), check("wolfe_rank_two", bad, tols.wolfe_fail, lower=True)]


def suite_ehk(n, rng, tols):
    m = _cap(n, 3)
    rep = car.build_rep(m)
    sym, cov = 0.0, 0.0
    for _ in range(3):
        pair = channels.CompatiblePair.make(*random_pair(m, rng))
        ch = channels.EHKChannel(rep, pair)
        q = random_symbol(m, rng)
        out = ch(gig.rho_from_symbol(rep, q).rho)
        sym = max(sym, fro(gig.symbol_of(rep, hermitian_part(out)) - pair.symbol_map(q)))
        cov = max(cov, channels.gauge_covariance_residual(ch, rep, trials=2, seed=rng.next_u64()))
    return [check("ehk_symbol_law", sym, tols.ehk_symbol), check("ehk_gauge_covariance", cov, tols.covariance)]


def suite_dual(n, rng, tols):
    m = _cap(n, 3)
    rep = car.build_rep(m)
    pair = channels.CompatiblePair.make(*random_pair(m, rng))
    ch = channels.EHKChannel(rep, pair)
    sd = pair.s.conj().T
    psi, phi = rng.complex_normal(m), rng.complex_normal(m)
    r1 = fro(ch.dual_doubled(car.field(rep, psi)) - car.field(rep, sd @ psi))
    lhs = ch.dual_doubled(car.field_dag(rep, psi) @ car.field(rep, phi))
    rhs = car.field_dag(rep, sd @ psi) @ car.field(rep, sd @ phi) + np.vdot(phi, pair.r @ psi) * rep.identity
    return [check("dual_annihilator", r1, tols.dual), check("dual_bilinear", fro(lhs - rhs), tols.dual)]


def suite_classify(n, rng, tols):
    m = _cap(n, 3)
    rep = car.build_rep(m)
    pair = channels.CompatiblePair.make(*random_pair(m, rng, max_norm=0.9))
    ch = channels.EHKChannel(rep, pair)
    tr = channels.transpose_channel(rep)
    ph = channels.particle_hole_channel(rep)
    cases = [(channels.CP_COVARIANT, ch), (channels.COCP_COVARIANT, ch.compose(tr)),
             (channels.CP_CONTRAVARIANT, ch.compose(ph)), (channels.COCP_CONTRAVARIANT, ch.compose(ph).compose(tr))]
    out = []
    for want, c in cases:
        res = channels.classify(c, rep)
        err = fro(channels.align_phase(res.s, pair.s) - pair.s) + fro(res.r - pair.r)
        out.append(check(f"classify_{want}", err if res.branch == want else np.inf, tols.classify))
    return out


def suite_generator(n, rng, tols):
    m = _cap(n, 2)
    rep = car.build_rep(m)
    params = semigroups.SemigroupParams.make(*random_params(m, rng))
    data = semigroups.generator_data(params, rep)
    fd = semigroups.finite_difference_superop(params, rep)
    worst = max(fro(semigroups.lindblad_dual_apply(data, rep, x) - fd(x)) for x in car.monomial_basis(rep))
    cal = semigroups.calibrate_coherent(params, rep)
    return [check("generator_vs_finite_difference", worst, tols.generator),
            check("coherent_calibration", abs(cal.coefficient - semigroups.COHERENT_COEFF), 0.0)]


def suite_chernoff(n, rng, tols):
    m = _cap(n, 2)
    rep = car.build_rep(m)
    rho0 = random_density(rep.dim, rng)
    params = semigroups.SemigroupParams.make(*random_params(m, rng))
    exact = semigroups.evolve(params, rep, rho0, 1.0)
    err = max(fro(semigroups.chernoff_product(params, rep, rho0, 1.0, k) - exact) for k in (4, 8, 16))
    h = random_hermitian(m, rng)
    h = h @ h + 0.1 * np.eye(m)
    t = _commuting_symbol(h, rng)
    mp = semigroups.mehler_params(h, t)
    ex2 = semigroups.evolve(mp, rep, rho0, 1.0)
    err2 = max(fro(semigroups.chernoff_product(mp, rep, rho0, 1.0, k) - ex2) for k in (1, 2, 4, 8))
    return [check("chernoff_vs_evolve", err, 1e-8), check("chernoff_mehler_exact", err2, tols.mehler_exact)]


def _commuting_symbol(h, rng):
    w, v = np.linalg.eigh(h)
    return (v * rng.uniform(len(w))[None, :]) @ v.conj().T


def suite_spectrum(n, rng, tols):
    m = _cap(n, 3)
    rep = car.build_rep(m)
    h = random_hermitian(m, rng)
    h = h @ h + 0.1 * np.eye(m)
    t = _commuting_symbol(h, rng)
    hb = semigroups.hermite_basis(rep, h, t)
    ch = channels.EHKChannel(rep, semigroups.mehler_pair(h, t))
    dense = np.sort(np.linalg.eigvals(ch.superop).real)
    spec = np.abs(dense - np.sort(hb.eigenvalues)).max()
    rho_t = gig.rho_from_symbol(rep, t).rho
    dual = ch.dual()
    x, y = rng.complex_normal((rep.dim, rep.dim)), rng.complex_normal((rep.dim, rep.dim))
    db = abs(rep.tau(rho_t @ x.conj().T @ dual(y)) - rep.tau(rho_t @ dual(x).conj().T @ y))
    return [check("mehler_spectrum", spec, tols.spectrum), check("detailed_balance", db, tols.detailed_balance)]


def suite_steady(n, rng, tols):
    m = _cap(n, 3)
    rep = car.build_rep(m)
    pair = channels.CompatiblePair.make(*random_pair(m, rng, max_norm=0.9))
    st = semigroups.steady_states(pair)
    ch = channels.EHKChannel(rep, pair)
    fixed = gig.rho_from_symbol(rep, st.r_inf).rho
    res = fro(ch(fixed) - fixed)
    q = gig.rho_from_symbol(rep, random_symbol(m, rng)).rho
    for _ in range(400):
        q = ch(q)
    return [check("steady_fixed_point", res, tols.steady), check("steady_iteration", fro(q - fixed), tols.steady_iter)]


def nonembeddable_example():
    g = np.array([[-1.0, 2.0], [0.0, -1.0]])
    s = expm(g)
    w, v = np.linalg.eigh(hermitian_part(np.eye(2) - s @ s.conj().T))
    root = (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T
    r = root @ np.array([[8.0, 7.0], [7.0, 8.0]]) @ root / 15.0
    return g, hermitian_part(r)


def suite_embed(n, rng, tols):
    g, r = nonembeddable_example()
    res = semigroups.embed_check(g, r)
    m = _cap(n, 4)
    h = random_hermitian(m, rng)
    h = h @ h + 0.2 * np.eye(m)
    t = _commuting_symbol(h, rng)
    mp = semigroups.mehler_params(h, t)
    ok = semigroups.embed_check(mp.g, mp.r_t(1.0))
    rt = ok.roundtrip if ok.embeddable else np.inf
    return [check("embed_counterexample_min_eig", res.min_eig_a if not res.embeddable else 0.0, tols.embed_negative),
            check("embed_roundtrip", rt, tols.embed_roundtrip)]


def suite_tpsymbol(n, rng, tols):
    m = _cap(n, 3)
    rep = car.build_rep(m)
    h = random_hermitian(m, rng)
    h = h @ h + 0.1 * np.eye(m)
    t = _commuting_symbol(h, rng)
    k = random_hermitian(m, rng)
    q = random_symbol(m, rng)
    gen = semigroups.cone_combine(semigroups.mehler_params(h, t),
                                  semigroups.SemigroupParams.make(-1j * k, np.zeros((m, m))), 1.0, 1.0, rep)
    out = gen.evolve(gig.rho_from_symbol(rep, q).rho, 0.6)
    err = fro(gig.symbol_of(rep, hermitian_part(out)) - semigroups.combined_symbol(h, k, t, q, 0.6))
    return [check("tpsymbol", err, tols.tpsymbol)]


def suite_condexp(n, rng, tols):
    m = _cap(n, 3)
    rep = car.build_rep(m)
    v = random_unitary(m, rng)
    k = max(1, m - 1)
    sub = condexp.ModeSubspace.make(rep, v[:, :k])
    d = rep.dim
    a = rng.complex_normal((d, d))
    x = condexp.tracial_condexp(sub, rng.complex_normal((d, d)))
    y = condexp.tracial_condexp(sub, rng.complex_normal((d, d)))
    tomi = fro(condexp.tracial_condexp(sub, x @ a @ y) - x @ condexp.tracial_condexp(sub, a) @ y)
    oracle = fro(condexp.tracial_condexp(sub, a) - condexp.group_average(sub, a))
    ea = condexp.tracial_condexp(sub, a)
    ks = np.linalg.eigvalsh(hermitian_part(condexp.tracial_condexp(sub, a.conj().T @ a) - ea.conj().T @ ea)).min()
    out = [check("tomiyama", tomi, tols.condexp), check("group_average_oracle", oracle, tols.condexp),
           check("kadison_schwarz", max(0.0, -ks), tols.condexp)]
    if m >= 2:
        perp = condexp.ModeSubspace.make(rep, v[:, k:])
        b = condexp.tracial_condexp(perp, rng.complex_normal((d, d)))
        prod = abs(rep.tau(ea @ b) - rep.tau(ea) * rep.tau(b))
        out.append(check("product_property", prod, tols.product))
    return out


def suite_petz(n, rng, tols):
    m = _cap(n, 3)
    rep = car.build_rep(m)
    v = random_unitary(m, rng)
    sub = condexp.ModeSubspace.make(rep, v[:, :max(1, m - 1)])
    rho = random_density(rep.dim, rng)
    rho_h = condexp.tracial_condexp(sub, rho)
    rec = fro(condexp.petz_recover(rep, rho, sub, rho_h) - rho)
    gamma = condexp.tracial_condexp(sub, random_density(rep.dim, rng))
    x = rng.complex_normal((rep.dim, rep.dim))
    pair = abs(rep.tau(gamma.conj().T @ condexp.accardi_cecchini(rep, rho, sub, x))
               - rep.tau(condexp.petz_recover(rep, rho, sub, gamma).conj().T @ x))
    mu = rng.uniform(m) * 0.8 + 0.1
    q = (v * mu[None, :]) @ v.conj().T
    rq = gig.rho_from_symbol(rep, q).rho
    p = sub.projector
    gq = gig.rho_from_symbol(rep, p @ random_symbol(m, rng) @ p + 0.5 * (np.eye(m) - p)).rho
    out = condexp.petz_recover(rep, rq, sub, condexp.tracial_condexp(sub, gq))
    return [check("petz_recovers_state", rec, tols.petz_recover), check("petz_duality", pair, tols.petz_dual),
            check("petz_gig", gig.is_gig(rep, hermitian_part(out), seed=3), tols.gig_preserve)]


def suite_cone(n, rng, tols):
    m = _cap(n, 3)
    rep = car.build_rep(m)
    ps = []
    for _ in range(2):
        h = random_hermitian(m, rng)
        h = h @ h + 0.1 * np.eye(m)
        ps.append(semigroups.mehler_params(h, _commuting_symbol(h, rng)))
    gen = semigroups.cone_combine(ps[0], ps[1], rng.uniform(), rng.uniform(), rep)
    out = gen.evolve(gig.rho_from_symbol(rep, random_symbol(m, rng)).rho, 0.7)
    return [check("cone_gig_preservation", gig.is_gig(rep, hermitian_part(out), seed=5), tols.gig_preserve)]


SUITES: dict[str, Callable] = {
    "car": suite_car,
    "moments": suite_moments,
    "wolfe": suite_wolfe,
    "ehk": suite_ehk,
    "dual": suite_dual,
    "classify": suite_classify,
    "generator": suite_generator,
    "chernoff": suite_chernoff,
    "spectrum": suite_spectrum,
    "steady": suite_steady,
    "embed": suite_embed,
    "tpsymbol": suite_tpsymbol,
    "condexp": suite_condexp,
    "petz": suite_petz,
    "cone": suite_cone,
}


def run_suite(name: str, n: int, seed: int, tols: Tolerances) -> list[Check]:
    """Run one suite with its own stream derived from ``seed`` and the suite name."""
    salt = sum((i + 1) * ord(c) for i, c in enumerate(name))
    rng = SplitMix64(seed ^ (salt * 0x9E3779B97F4A7C15 & ((1 << 64) - 1)))
    start = time.perf_counter()
    try:
        checks = SUITES[name](n, rng, tols)
    except Exception as exc:  # domain errors become failed checks
        checks = [Check(f"{name}_error:{type(exc).__name__}", False, float("inf"), 0.0)]
    elapsed = (time.perf_counter() - start) * 1000.0
    for c in checks:
        c.name = f"{name}.{c.name}"
        c.wall_time_ms = elapsed / max(1, len(checks))
    return checks
