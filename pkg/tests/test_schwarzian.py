"""Schwarzian calculus: potentials, both chain rules, Bers chart, dynamics."""

import math

import numpy as np
import pytest

from lpgeo import diff_line as dl
from lpgeo import grids
from lpgeo import schwarzian as sz
from lpgeo.errors import ImageViolation, MixedSign

LINE = grids.line(2001, 10.0)
FINE = grids.line(4001, 10.0)
X = LINE.points()


def gauss_phi(grid=LINE, amp=1.0, centre=0.0):
    return dl.from_slope(grid, lambda x: amp * np.exp(-((x - centre) ** 2)))


def test_potential_of_identity():
    ident = dl.identity(LINE)
    assert sz.schwarz_potential(ident, 0.7, -2.3) == pytest.approx(0.0, abs=1e-14)
    assert sz.schwarz_potential(ident, 0.5, 0.5) == pytest.approx(0.0, abs=1e-14)


def test_potential_diagonal_is_log_slope():
    phi = gauss_phi()
    for x0 in (-1.0, 0.0, 0.8):
        v = sz.schwarz_potential(phi, x0, x0)
        expected = math.log(1.0 + math.exp(-(x0 ** 2)))
        assert v == pytest.approx(expected, abs=1e-9)


def test_potential_of_linear_map_is_log_scale():
    ext = dl.ExtendedLineDiffeo(2.0, 0.3, dl.identity(LINE))
    ys = np.array([-3.0, 0.2, 1.7])
    zs = np.array([1.1, -0.4, 1.7])
    out = sz.schwarz_potential(ext, ys, zs)
    assert np.max(np.abs(out - math.log(2.0))) < 1e-12


def test_schwarzian_vanishes_on_affine_maps():
    for a, b in ((1.0, 0.0), (2.5, -1.0), (0.3, 7.0)):
        ext = dl.ExtendedLineDiffeo(a, b, dl.identity(LINE))
        assert np.max(np.abs(sz.schwarzian(ext).s.values)) < 1e-12


def test_schwarzian_gaussian_anchor():
    phi = gauss_phi()
    s = sz.schwarzian(phi).s.values
    i0 = np.argmin(np.abs(X))
    # u = log(1 + e^{-x^2}) has u'(0) = 0 and u''(0) = -1
    assert s[i0] == pytest.approx(-1.0, abs=1e-7)


def test_u_route_matches_potential_route():
    phi = gauss_phi(FINE)
    s = sz.schwarzian(phi).s.values
    pot, core = sz.schwarzian_via_potential(phi)
    assert np.max(np.abs(pot - s[core])) < 1e-5


def test_chain_residual_identity_inner():
    phi = gauss_phi()
    assert sz.schwarzian_chain_residual(phi, dl.identity(LINE)) < 1e-12


def test_chain_residual_gaussian_pair():
    phi = gauss_phi(amp=0.8)
    psi = gauss_phi(amp=0.5, centre=1.0)
    assert sz.schwarzian_chain_residual(phi, psi) < 1e-6


def test_affine_outer_leaves_schwarzian():
    psi = gauss_phi(amp=0.7)
    affine = dl.ExtendedLineDiffeo(1.8, -0.6, dl.identity(LINE))
    comp = dl.ExtendedLineDiffeo(1.8, -0.6, psi)
    lhs = sz.schwarzian(comp).s.values
    rhs = sz.schwarzian(psi).s.values
    assert np.max(np.abs(lhs - rhs)) < 1e-9
    assert sz.schwarzian_chain_residual(affine, psi) < 1e-9


def test_lp_schwarzian_identity():
    ident = dl.identity(LINE)
    for p in (1.0, 2.0, 10.0):
        assert np.max(np.abs(sz.lp_schwarzian(ident, p).s.values)) == 0.0


def test_lp_schwarzian_anchor_p1():
    phi = gauss_phi()
    i0 = np.argmin(np.abs(X))
    # phi''(0) = 0, S(0) = -1, phi'(0) = 2: S_1(0) = -1 * 2
    assert sz.lp_schwarzian(phi, 1.0).s.values[i0] == pytest.approx(-2.0, abs=1e-6)


def test_lp_schwarzian_tends_to_schwarzian():
    phi = gauss_phi()
    s = sz.schwarzian(phi).s.values

    def gap(p):
        return np.max(np.abs(sz.lp_schwarzian(phi, p).s.values - s))

    ratio = gap(128.0) / gap(64.0)
    assert 0.4 <= ratio <= 0.6
    gaps = [gap(p) for p in (2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0)]
    assert all(g1 > g2 for g1, g2 in zip(gaps, gaps[1:]))


def test_lp_route_agreement():
    phi = gauss_phi(FINE)
    for p in (1.0, 2.0, 37.0):
        sp = sz.lp_schwarzian(phi, p).s.values
        pot, core = sz.lp_schwarzian_via_potential(phi, p)
        assert np.max(np.abs(pot - sp[core])) < 1e-5


def test_lp_chain_residual_identity_inner():
    phi = gauss_phi()
    assert sz.lp_schwarzian_chain_residual(phi, dl.identity(LINE), 2.0) < 1e-12


def test_lp_chain_residual_generic_pair():
    phi = gauss_phi(amp=0.8)
    psi = gauss_phi(amp=0.5, centre=1.0)
    assert sz.lp_schwarzian_chain_residual(phi, psi, 2.0) < 1e-5


def test_lp_chain_rule_tends_to_classical():
    phi = gauss_phi(amp=0.8)
    psi = gauss_phi(amp=0.5, centre=1.0)
    classical = sz.schwarzian_chain_residual(phi, psi)
    huge_p = sz.lp_schwarzian_chain_residual(phi, psi, 1e4)
    assert huge_p < 2.0 * max(classical, 1e-12) + 1e-9


def test_bers_integral_constraint():
    for amp, centre in ((1.0, 0.0), (0.5, -1.5), (0.8, 2.0)):
        field = sz.bers_map(gauss_phi(amp=amp, centre=centre))
        assert grids.integrate(field.s) <= 1e-10


def test_bers_map_is_schwarzian_with_bookkeeping(monkeypatch):
    phi = gauss_phi()
    field = sz.bers_map(phi)
    assert np.array_equal(field.s.values, sz.schwarzian(phi).s.values)
    # the diagnostic guard trips when quadrature reports a positive integral
    monkeypatch.setattr(sz.grids, "integrate", lambda f: 1.0)
    with pytest.raises(ImageViolation):
        sz.bers_map(phi)


def test_preimage_of_zero_potential():
    u = grids.sample(LINE, lambda x: np.zeros_like(x))
    phi = sz.schwarzian_preimage(u)
    assert np.max(np.abs(phi.f.values)) == 0.0


def test_preimage_log_slope_is_schwarzian():
    phi = gauss_phi(amp=0.6)
    u = grids.sample(LINE, lambda x: np.log1p(0.6 * np.exp(-(x ** 2))))
    pre = sz.schwarzian_preimage(u)
    s = sz.schwarzian(phi).s.values
    log_slope = np.log1p(pre.fprime.values)
    assert np.max(np.abs(log_slope - s)) < 1e-10


def test_kernel_direction_not_annihilated():
    phi = gauss_phi(amp=0.5)
    for c0, c1 in ((1.0, 0.0), (0.0, 1.0), (0.7, -0.3)):
        delta = sz.kernel_direction(phi, c0, c1)
        response = sz.bers_directional_derivative(phi, delta)
        assert response > 1e-3
    zero = sz.kernel_direction(phi, 0.0, 0.0)
    assert sz.bers_directional_derivative(phi, zero) < 1e-12


def test_dynamics_identity_degenerate():
    report = sz.dynamics_tangent_check(dl.identity(LINE), 3, 2)
    assert report.sign == 0
    assert report.min_tangent == pytest.approx(1.0)


def test_dynamics_negative_schwarzian_contracts():
    phi = gauss_phi()
    for n, m in ((1, 1), (2, 1), (3, 2)):
        report = sz.dynamics_tangent_check(phi, n, m)
        assert report.sign == -1
        assert report.min_tangent < 1.0
        assert report.s_inf == pytest.approx(-1.0, abs=1e-6)


def test_dynamics_preimage_passes_invariants():
    xi = sz.schwarzian_preimage(grids.sample(
        LINE, lambda x: np.log1p(np.exp(-(x ** 2)))))
    assert isinstance(xi, dl.LineDiffeo)
    assert np.all(xi.fprime.values > -1)


def test_dynamics_mixed_sign_rejected():
    # odd-ish potential gives comparable positive and negative lobes of S
    u = grids.sample(LINE, lambda x: 0.8 * x * np.exp(-(x ** 2) / 2))
    phi = sz.schwarzian_preimage(u)  # any phi with mixed-sign Schwarzian
    s = sz.schwarzian(phi).s.values
    assert s.max() > 0 and s.min() < 0
    with pytest.raises(MixedSign):
        sz.dynamics_tangent_check(phi, 1, 1)


def test_dynamics_rejects_large_powers():
    with pytest.raises(ValueError):
        sz.dynamics_tangent_check(gauss_phi(), 9, 1)
