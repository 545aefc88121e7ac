"""Grid calculus: quadrature, differentiation, composition, inversion."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpgeo import grids
from lpgeo.errors import DecayViolation, NoBracket, NotMonotone

C256 = grids.circle(256)
LINE = grids.line(2001, 10.0)


def test_integrate_constant_circle():
    f = grids.sample(C256, lambda x: np.ones_like(x))
    assert grids.integrate(f) == pytest.approx(1.0, abs=1e-15)


def test_integrate_full_period_cosine():
    f = grids.sample(C256, lambda x: np.cos(2 * np.pi * x))
    assert abs(grids.integrate(f)) < 1e-14


def test_integrate_cos_squared():
    f = grids.sample(C256, lambda x: np.cos(2 * np.pi * x) ** 2)
    assert grids.integrate(f) == pytest.approx(0.5, abs=1e-12)


def test_derivative_of_constant():
    for g in (C256, LINE):
        f = grids.sample(g, lambda x: np.full_like(x, 0.0) + 0.0)
        d = grids.derivative(f, 1)
        assert np.max(np.abs(d.values)) < 1e-14


def test_spectral_derivative_sine():
    f = grids.sample(C256, lambda x: np.sin(2 * np.pi * x))
    d = grids.derivative(f, 1)
    expected = 2 * np.pi * np.cos(2 * np.pi * C256.points())
    assert np.max(np.abs(d.values - expected)) < 1e-10


def test_line_second_derivative_gaussian():
    f = grids.sample(LINE, lambda x: np.exp(-(x ** 2)))
    d2 = grids.derivative(f, 2)
    x = LINE.points()
    expected = (4 * x ** 2 - 2) * np.exp(-(x ** 2))
    assert np.max(np.abs(d2.values - expected)) < 1e-6


def test_derivative_rejects_non_decaying_line_function():
    f = grids.sample(LINE, lambda x: np.ones_like(x))
    with pytest.raises(DecayViolation):
        grids.derivative(f, 1)


def test_derivative_linearity():
    rng = np.random.default_rng(7)
    a = grids.sample(C256, lambda x: np.sin(2 * np.pi * x))
    b = grids.sample(C256, lambda x: np.cos(4 * np.pi * x))
    for _ in range(5):
        al, be = rng.uniform(-2, 2, size=2)
        lhs = grids.derivative(al * a + be * b, 1)
        rhs = al * grids.derivative(a, 1) + be * grids.derivative(b, 1)
        assert np.max(np.abs(lhs.values - rhs.values)) < 1e-13 * max(1.0, np.max(np.abs(rhs.values)))


@settings(max_examples=25, deadline=None)
@given(order=st.integers(min_value=1, max_value=4), k=st.integers(min_value=1, max_value=5))
def test_spectral_derivative_matches_trig_oracle(order, k):
    f = grids.sample(C256, lambda x: np.sin(2 * np.pi * k * x))
    d = grids.derivative(f, order)
    w = 2 * np.pi * k
    x = C256.points()
    phase = np.sin(w * x + order * np.pi / 2)
    assert np.max(np.abs(d.values - w ** order * phase)) < 1e-7 * w ** order


def test_stokes_on_circle():
    f = grids.sample(C256, lambda x: np.exp(np.sin(2 * np.pi * x)))
    assert abs(grids.integrate(grids.derivative(f, 1))) < 1e-10


def test_spectral_convergence():
    def err(n):
        g = grids.circle(n)
        f = grids.sample(g, lambda x: np.exp(np.sin(2 * np.pi * x)))
        d = grids.derivative(f, 1)
        x = g.points()
        exact = 2 * np.pi * np.cos(2 * np.pi * x) * np.exp(np.sin(2 * np.pi * x))
        return np.max(np.abs(d.values - exact))

    # error collapses by orders of magnitude per refinement until it hits
    # rounding; by n = 64 the derivative is already exact to machine level
    assert err(16) / err(32) >= 10.0
    assert err(64) < 1e-12


def test_compose_with_identity_is_exact():
    f = grids.sample(C256, lambda x: np.sin(2 * np.pi * x))
    ident = grids.sample(C256, lambda x: x)
    assert np.array_equal(grids.compose(f, ident).values, f.values)


def test_compose_quadratic_with_shift_on_line():
    f = grids.sample(LINE, lambda x: x ** 2)
    phi = grids.sample(LINE, lambda x: x + 1.0)
    out = grids.compose(f, phi)
    x = LINE.points()
    # interior = nodes whose shifted image still lies inside the grid
    interior = (x > -9.9) & (x + 1.0 < 9.95)
    assert np.max(np.abs(out.values[interior] - (x[interior] + 1.0) ** 2)) < 1e-8


def test_compose_phase_shift_identity():
    f = grids.sample(C256, lambda x: np.sin(2 * np.pi * x))
    phi = grids.sample(C256, lambda x: x + 0.25)
    out = grids.compose(f, phi)
    expected = np.cos(2 * np.pi * C256.points())
    assert np.max(np.abs(out.values - expected)) < 1e-8


def test_compose_rejects_non_monotone():
    f = grids.sample(C256, lambda x: x * 0.0)
    phi = grids.sample(C256, lambda x: x - 0.3 * np.sin(2 * np.pi * x))  # slope dips below 0
    with pytest.raises(NotMonotone):
        grids.compose(f, phi)


def test_invert_identity():
    ident = grids.sample(LINE, lambda x: x)
    inv = grids.invert_monotone(ident)
    assert np.max(np.abs(inv.values - LINE.points())) < 1e-12


def test_invert_round_trip_circle():
    g = grids.circle(512)
    phi = grids.sample(g, lambda x: x + 0.05 * np.sin(2 * np.pi * x))
    inv = grids.invert_monotone(phi)
    round_trip = grids.compose_maps(inv, phi)  # inv after phi is the identity
    x = g.points()
    assert np.max(np.abs(round_trip.values - x)) < 1e-8


def test_invert_round_trip_line_sin_bump():
    phi = grids.sample(LINE, lambda x: x + 0.1 * np.sin(x) * np.exp(-(x ** 2) / 2))
    inv = grids.invert_monotone(phi)
    round_trip = grids.compose_maps(inv, phi)
    x = LINE.points()
    assert np.max(np.abs(round_trip.values - x)) < 1e-9


def test_invert_quadratic_line_map_matches_closed_form():
    L = 10.0
    gamma = 0.02
    phi = grids.sample(LINE, lambda x: x + gamma * (x ** 2 - L ** 2))
    inv = grids.invert_monotone(phi)
    x = LINE.points()
    expected = (-1.0 + np.sqrt(1.0 + 4 * gamma * (x + gamma * L ** 2))) / (2 * gamma)
    assert np.max(np.abs(inv.values - expected)) < 1e-9


def test_invert_requires_fixed_endpoints():
    phi = grids.sample(LINE, lambda x: x + 1.0)
    with pytest.raises(NoBracket):
        grids.invert_monotone(phi)


def test_compose_after_invert_is_identity_on_interior():
    phi = grids.sample(LINE, lambda x: x + 0.4 * np.exp(-(x ** 2)) * x)
    inv = grids.invert_monotone(phi)
    round_trip = grids.compose(inv, phi)
    x = LINE.points()
    interior = slice(5, -5)
    assert np.max(np.abs(round_trip.values[interior] - x[interior])) < 1e-8


def test_cumulative_integral_circle_spectral():
    f = grids.sample(C256, lambda x: 1.0 + 0.5 * np.sin(2 * np.pi * x))
    F = grids.cumulative_integral(f)
    x = C256.points()
    exact = x + 0.5 / (2 * np.pi) * (1.0 - np.cos(2 * np.pi * x))
    assert np.max(np.abs(F.values - exact)) < 1e-13


def test_cumulative_integral_line_fourth_order():
    f = grids.sample(LINE, lambda x: np.exp(-(x ** 2)) * (-2 * x))  # d/dx exp(-x^2)
    F = grids.cumulative_integral(f)
    x = LINE.points()
    exact = np.exp(-(x ** 2)) - np.exp(-100.0)
    # h^4/720 * f''' bound for this integrand sits just below 2e-10
    assert np.max(np.abs(F.values - exact)) < 3e-10
