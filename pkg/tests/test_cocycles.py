"""Group cochain, Gelfand-Fuchs forms, Virasoro bracket, circle and torus."""

import itertools
import math

import numpy as np
import pytest

from lpgeo import cocycles as cc
from lpgeo import densities as dn
from lpgeo import grids
from lpgeo.errors import StepTooSmall

C = grids.circle(256)
X = C.points()
MINUS_4_PI3 = -4 * math.pi ** 3


def flat_prob():
    return dn.ProbabilityDensity(grids.sample(C, lambda x: np.ones_like(x)))


def sin_cos_tangents():
    a1 = dn.TangentDensity(grids.sample(C, lambda x: 2 * np.pi * np.cos(2 * np.pi * x)))
    a2 = dn.TangentDensity(grids.sample(C, lambda x: -2 * np.pi * np.sin(2 * np.pi * x)))
    return a1, a2


def identity_map(g=C):
    return grids.sample(g, lambda x: x)


def generic_density():
    return dn.Density(grids.sample(
        C, lambda x: 1 + 0.3 * np.sin(2 * np.pi * x) + 0.1 * np.cos(4 * np.pi * x)))


def moser_diffeo(fn, g=C):
    base = dn.ProbabilityDensity(grids.sample(g, lambda x: np.ones_like(x)))
    target = dn.ProbabilityDensity(grids.sample(g, fn))
    return dn.moser_map_1d(target, base)


def test_log_jacobian_identity():
    assert np.max(np.abs(cc.log_jacobian(identity_map(), generic_density()).values)) < 1e-13


def test_log_jacobian_flat_density_is_log_slope():
    phi = moser_diffeo(lambda x: 1 + 0.3 * np.sin(2 * np.pi * x))
    mu = dn.Density(grids.sample(C, lambda x: np.ones_like(x)))
    out = cc.log_jacobian(phi, mu)
    u = phi - grids.sample(C, lambda x: x)
    dphi = grids.derivative(u, 1) + 1.0
    assert np.max(np.abs(out.values - np.log(dphi.values))) < 1e-12


def test_log_jacobian_mass_conservation():
    phi = moser_diffeo(lambda x: 1 + 0.25 * np.cos(2 * np.pi * x))
    mu = generic_density()
    la = cc.log_jacobian(phi, mu)
    pulled_mass = grids.integrate(mu.rho * la.with_values(np.exp(la.values)))
    assert pulled_mass == pytest.approx(mu.mass(), abs=1e-9)


def test_bott_thurston_identities():
    mu = generic_density()
    ident = identity_map()
    phi = moser_diffeo(lambda x: 1 + 0.3 * np.sin(2 * np.pi * x))
    assert cc.bott_thurston_c([ident, ident], mu) == pytest.approx(0.0, abs=1e-14)
    assert cc.bott_thurston_c([ident, phi], mu) == pytest.approx(0.0, abs=1e-12)
    # second slot identity integrates an exact 1-form: spectrally zero
    assert cc.bott_thurston_c([phi, ident], mu) == pytest.approx(0.0, abs=1e-10)


def test_bott_thurston_self_convergence():
    def value(n):
        g = grids.circle(n)
        mu = dn.Density(grids.sample(
            g, lambda x: 1 + 0.3 * np.sin(2 * np.pi * x) + 0.1 * np.cos(4 * np.pi * x)))
        phi = moser_diffeo(lambda x: 1 + 0.3 * np.sin(2 * np.pi * x), g)
        psi = moser_diffeo(lambda x: 1 + 0.25 * np.cos(2 * np.pi * x), g)
        return cc.bott_thurston_c([phi, psi], mu)

    assert abs(value(256) - value(512)) < 1e-7


def test_gelfand_fuchs_antisymmetry_and_anchor():
    mu = flat_prob()
    a1, a2 = sin_cos_tangents()
    om = cc.gelfand_fuchs_omega([a1, a2], mu, n=1)
    assert om == pytest.approx(MINUS_4_PI3, rel=1e-6)
    assert cc.gelfand_fuchs_omega([a1, a1], mu, n=1) == pytest.approx(0.0, abs=1e-12)
    assert om + cc.gelfand_fuchs_omega([a2, a1], mu, n=1) == pytest.approx(0.0, abs=1e-9)


def test_gelfand_fuchs_multilinearity():
    mu = flat_prob()
    a1, a2 = sin_cos_tangents()
    b = dn.TangentDensity(grids.sample(C, lambda x: np.sin(4 * np.pi * x)))
    om = cc.gelfand_fuchs_omega
    lhs = om([dn.TangentDensity(2.0 * a1.a + b.a), a2], mu)
    rhs = 2.0 * om([a1, a2], mu) + om([b, a2], mu)
    assert lhs == pytest.approx(rhs, abs=1e-10)
    lhs2 = om([a1, dn.TangentDensity(-1.5 * a2.a + b.a)], mu)
    rhs2 = -1.5 * om([a1, a2], mu) + om([a1, b], mu)
    assert lhs2 == pytest.approx(rhs2, abs=1e-10)


def test_mixed_derivative_zero_tangents():
    mu = flat_prob()
    zero = dn.TangentDensity(grids.sample(C, lambda x: np.zeros_like(x)))
    assert cc.mixed_derivative_check(zero, zero, mu) == pytest.approx(0.0, abs=1e-12)


def test_mixed_derivative_matches_direct_form():
    mu = flat_prob()
    a1, a2 = sin_cos_tangents()
    scaled = dn.TangentDensity(0.05 * a1.a), dn.TangentDensity(0.05 * a2.a)
    err = cc.mixed_derivative_check(scaled[0], scaled[1], mu)
    direct = abs(cc.gelfand_fuchs_omega(list(scaled), mu, n=1))
    assert err < 0.01 * direct


def test_mixed_derivative_sign_flip():
    mu = flat_prob()
    a1, a2 = sin_cos_tangents()
    s1 = dn.TangentDensity(0.05 * a1.a)
    s2 = dn.TangentDensity(0.05 * a2.a)
    direct = cc.gelfand_fuchs_omega([s1, s2], mu, n=1)
    err_swapped = cc.mixed_derivative_check(s2, s1, mu)
    # the FD of the swapped pair approximates -direct
    assert err_swapped < 0.01 * abs(direct)


def test_mixed_derivative_step_too_small(monkeypatch):
    # inject a step-independent perturbation: the 1/s^2 amplification then
    # makes the halved-step estimate disagree and the guard must fire
    mu = flat_prob()
    a1, a2 = sin_cos_tangents()
    real = cc.bott_thurston_c
    state = {"k": 0}

    def noisy(phis, m, n=1):
        state["k"] += 1
        return real(phis, m, n) + 1e-3 * 0.9 ** state["k"]

    monkeypatch.setattr(cc, "bott_thurston_c", noisy)
    with pytest.raises(StepTooSmall):
        cc.mixed_derivative_check(a1, a2, mu, step=1e-4)


def test_omega_lp_sphere_routes_and_p_independence():
    a1, a2 = sin_cos_tangents()
    mu = flat_prob()
    direct = cc.gelfand_fuchs_omega([a1, a2], mu, n=1)
    from lpgeo.densities import flat_embed

    values = []
    for p in (1.5, 2.0, 3.0, 10.0):
        f = flat_embed(mu, p)
        tangents = [
            a1.a.with_values((a1.a.values / mu.rho.values) * f.values / p),
            a2.a.with_values((a2.a.values / mu.rho.values) * f.values / p),
        ]
        values.append(cc.omega_lp_sphere(f, tangents, p, n=1))
    for v in values:
        assert v == pytest.approx(direct, rel=1e-7)
        assert v == pytest.approx(values[0], rel=1e-7)


def test_omega_lp_sphere_trivial_cases():
    mu = flat_prob()
    from lpgeo.densities import flat_embed

    f = flat_embed(mu, 2.0)
    zero = grids.sample(C, lambda x: np.zeros_like(x))
    assert cc.omega_lp_sphere(f, [zero, zero], 2.0, n=1) == 0.0
    b = grids.sample(C, lambda x: np.sin(2 * np.pi * x))
    assert cc.omega_lp_sphere(f, [b, b], 2.0, n=1) == pytest.approx(0.0, abs=1e-12)


def test_virasoro_self_bracket_vanishes():
    f = grids.sample(C, lambda x: np.sin(2 * np.pi * x))
    x = cc.VirasoroElement(f, 0.7)
    out = cc.virasoro_bracket(x, x)
    assert np.max(np.abs(out.vector_part.values)) < 1e-12
    assert abs(out.central) < 1e-12


def test_virasoro_sin_cos_bracket():
    f = grids.sample(C, lambda x: np.sin(2 * np.pi * x))
    g = grids.sample(C, lambda x: np.cos(2 * np.pi * x))
    out = cc.virasoro_bracket(cc.VirasoroElement(f, 1.0), cc.VirasoroElement(g, -2.0))
    assert np.max(np.abs(out.vector_part.values - 2 * np.pi)) < 1e-8
    assert out.central == pytest.approx(MINUS_4_PI3, abs=1e-8)


def test_virasoro_central_is_gelfand_fuchs_quadrature():
    f = grids.sample(C, lambda x: np.sin(2 * np.pi * x))
    g = grids.sample(C, lambda x: np.cos(4 * np.pi * x))
    out = cc.virasoro_bracket(cc.VirasoroElement(f), cc.VirasoroElement(g))
    mu = dn.Density(grids.sample(C, lambda x: np.ones_like(x)))
    direct = cc.gelfand_fuchs_omega(
        [dn.TangentDensity(grids.derivative(f, 1)), dn.TangentDensity(grids.derivative(g, 1))],
        mu, n=1)
    assert abs(out.central - direct) < 1e-12


def test_virasoro_jacobi_identity():
    f = cc.VirasoroElement(grids.sample(C, lambda x: np.sin(2 * np.pi * x)), 0.2)
    g = cc.VirasoroElement(grids.sample(C, lambda x: np.cos(2 * np.pi * x)), -1.0)
    h = cc.VirasoroElement(grids.sample(C, lambda x: np.sin(4 * np.pi * x)), 0.5)
    br = cc.virasoro_bracket
    total_vec = np.zeros(C.n)
    total_central = 0.0
    for a, b, c in ((f, g, h), (g, h, f), (h, f, g)):
        term = br(br(a, b), c)
        total_vec += term.vector_part.values
        total_central += term.central
    assert np.max(np.abs(total_vec)) < 1e-8
    assert abs(total_central) < 1e-8


def test_group_cocycle_identity_on_moser_diffeos():
    mu = generic_density()
    phi = moser_diffeo(lambda x: 1 + 0.3 * np.sin(2 * np.pi * x))
    psi = moser_diffeo(lambda x: 1 + 0.25 * np.cos(2 * np.pi * x))
    chi = moser_diffeo(lambda x: 1 + 0.2 * np.sin(4 * np.pi * x))
    ident = identity_map()
    for args in ((ident, psi, chi), (phi, ident, chi), (phi, psi, ident)):
        assert cc.group_cocycle_residual(*args, mu) < 1e-10
    assert cc.group_cocycle_residual(phi, psi, chi, mu) < 1e-6


def test_group_cocycle_residual_grid_convergence():
    def residual(n):
        g = grids.circle(n)
        mu = dn.Density(grids.sample(
            g, lambda x: 1 + 0.3 * np.sin(2 * np.pi * x) + 0.1 * np.cos(4 * np.pi * x)))
        phi = moser_diffeo(lambda x: 1 + 0.3 * np.sin(2 * np.pi * x), g)
        psi = moser_diffeo(lambda x: 1 + 0.25 * np.cos(2 * np.pi * x), g)
        chi = moser_diffeo(lambda x: 1 + 0.2 * np.sin(4 * np.pi * x), g)
        return cc.group_cocycle_residual(phi, psi, chi, mu)

    assert residual(256) >= 2.0 * residual(512)


# ------------------------------------------------------------------- torus

TG = cc.TorusGrid(64, 64)


def torus_density():
    return cc.TorusDensity(cc.torus_sample(
        TG, lambda x, y: 1 + 0.2 * np.sin(2 * np.pi * x) * np.cos(2 * np.pi * y)))


def torus_tangents():
    t1 = cc.torus_sample(
        TG, lambda x, y: np.sin(2 * np.pi * x) * np.cos(2 * np.pi * y) + 0.5 * np.cos(2 * np.pi * x))
    t2 = cc.torus_sample(
        TG, lambda x, y: np.sin(2 * np.pi * y) + 0.3 * np.cos(2 * np.pi * x) * np.sin(4 * np.pi * y))
    t3 = cc.torus_sample(
        TG, lambda x, y: np.sin(2 * np.pi * x) * np.sin(2 * np.pi * y) + 0.4 * np.cos(4 * np.pi * x))
    return t1, t2, t3


def test_torus_omega_proportional_tangents_vanish():
    mu = torus_density()
    t1, t2, t3 = torus_tangents()
    t1_scaled = cc.TorusFunction(TG, 2.5 * t1.values)
    assert cc.gelfand_fuchs_omega([t1, t1_scaled, t3], mu, n=2) == pytest.approx(0.0, abs=1e-10)


def test_torus_omega_full_alternation():
    mu = torus_density()
    ts = torus_tangents()
    base = cc.gelfand_fuchs_omega(list(ts), mu, n=2)
    assert abs(base) > 1e-3  # non-degenerate triple
    for perm in itertools.permutations(range(3)):
        sign = (-1) ** sum(
            1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j]
        )
        val = cc.gelfand_fuchs_omega([ts[i] for i in perm], mu, n=2)
        assert val == pytest.approx(sign * base, abs=1e-9)


def test_torus_bott_thurston_degenerate_cases():
    mu = torus_density()
    ident = cc.torus_identity(TG)
    g1 = grids.circle(64)
    phi = cc.TorusDiffeo(
        TG,
        grids.sample(g1, lambda x: x + 0.04 * np.sin(2 * np.pi * x)),
        grids.sample(g1, lambda x: x + 0.03 * np.cos(2 * np.pi * x)),
    )
    psi = cc.TorusDiffeo(
        TG,
        grids.sample(g1, lambda x: x + 0.02 * np.sin(2 * np.pi * x)),
        grids.sample(g1, lambda x: x - 0.03 * np.sin(2 * np.pi * x)),
    )
    assert cc.bott_thurston_c([ident, ident, ident], mu, n=2) == pytest.approx(0.0, abs=1e-14)
    # third slot identity repeats the second partial product: wedge collapses
    assert cc.bott_thurston_c([phi, psi, ident], mu, n=2) == pytest.approx(0.0, abs=1e-10)


def test_omega_lp_sphere_torus_p_independence():
    mu = torus_density()
    ts = torus_tangents()
    direct = cc.gelfand_fuchs_omega(list(ts), mu, n=2)
    rho = mu.f.values
    values = []
    for p in (1.5, 2.0, 3.0):
        f = cc.TorusFunction(TG, p * rho ** (1.0 / p))
        tangents = [cc.TorusFunction(TG, (t.values / rho) * f.values / p) for t in ts]
        values.append(cc.omega_lp_sphere(f, tangents, p, n=2))
    for v in values:
        assert v == pytest.approx(direct, rel=1e-7)
