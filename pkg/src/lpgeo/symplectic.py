"""Pointwise exterior algebra of 2-forms on a flat 4-torus grid and the
Lp geometry of symplectic forms.

Coefficients are stored against the ordered basis dx_i ^ dx_j, i < j, as a
(6, n, n, n, n) array.  Closedness is checked spectrally, nondegeneracy by
the pointwise Pfaffian, and the Fisher-side comparison of the volume-form
projection pi(omega) = omega ^ omega is an algebraic identity verified by
quadrature on both sides.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import check_exponent, get_config
from .errors import Degenerate, GridMismatch, NotClosed

PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_PAIR_INDEX = {p: k for k, p in enumerate(PAIRS)}


@dataclass(frozen=True)
class T4Grid:
    n: int = 16

    def __post_init__(self):
        if self.n < 8:
            raise ValueError("torus grids need at least 8 nodes per axis")

    def axis_points(self) -> np.ndarray:
        return np.arange(self.n) / self.n


class Form2OnT4:
    """Six coefficient fields of a 2-form on the unit 4-torus."""

    __slots__ = ("grid", "c")

    def __init__(self, grid: T4Grid, c):
        c = np.asarray(c, dtype=np.float64)
        expected = (6,) + (grid.n,) * 4
        if c.shape != expected:
            raise ValueError(f"expected shape {expected}, got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "c", c)

    def __setattr__(self, *_):
        raise AttributeError("Form2OnT4 is immutable")

    def component(self, i: int, j: int) -> np.ndarray:
        """Coefficient of dx_i ^ dx_j for 0-based i < j."""
        return self.c[_PAIR_INDEX[(i, j)]]


class Form4OnT4:
    """Single coefficient field against dx_1 ^ dx_2 ^ dx_3 ^ dx_4."""

    __slots__ = ("grid", "c")

    def __init__(self, grid: T4Grid, c):
        c = np.asarray(c, dtype=np.float64)
        if c.shape != (grid.n,) * 4:
            raise ValueError("coefficient shape mismatch")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "c", c)

    def __setattr__(self, *_):
        raise AttributeError("Form4OnT4 is immutable")


def t4_integrate(vol: Form4OnT4) -> float:
    return float(np.mean(vol.c))


def _partial(values: np.ndarray, axis: int) -> np.ndarray:
    n = values.shape[axis]
    vh = np.fft.rfft(values, axis=axis)
    k = 2.0j * np.pi * np.fft.rfftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        k[-1] = 0.0
    shape = [1] * values.ndim
    shape[axis] = k.shape[0]
    return np.fft.irfft(vh * k.reshape(shape), n, axis=axis)


def sample_form2(grid: T4Grid, component_fns: dict) -> Form2OnT4:
    """Build a 2-form from {(i, j): fn(x1, x2, x3, x4)} with 0-based i < j;
    missing components are zero."""
    ax = grid.axis_points()
    xs = np.meshgrid(ax, ax, ax, ax, indexing="ij")
    c = np.zeros((6,) + (grid.n,) * 4)
    for pair, fn in component_fns.items():
        c[_PAIR_INDEX[pair]] = fn(*xs)
    return Form2OnT4(grid, c)


def standard_form(grid: T4Grid) -> Form2OnT4:
    """dx1 ^ dx2 + dx3 ^ dx4 with unit total volume on the unit torus."""
    c = np.zeros((6,) + (grid.n,) * 4)
    c[_PAIR_INDEX[(0, 1)]] = 1.0
    c[_PAIR_INDEX[(2, 3)]] = 1.0
    return Form2OnT4(grid, c)


def exterior_derivative2(omega: Form2OnT4) -> np.ndarray:
    """The four components (d omega)_{ijk} = d_i c_jk - d_j c_ik + d_k c_ij
    for 0-based i < j < k, stacked along axis 0."""
    comps = []
    for i in range(4):
        for j in range(i + 1, 4):
            for k in range(j + 1, 4):
                comps.append(
                    _partial(omega.component(j, k), i)
                    - _partial(omega.component(i, k), j)
                    + _partial(omega.component(i, j), k)
                )
    return np.stack(comps)


def closedness_residual(omega: Form2OnT4) -> float:
    return float(np.max(np.abs(exterior_derivative2(omega))))


def d_one_form(grid: T4Grid, sigma_fns) -> Form2OnT4:
    """Exterior derivative of a 1-form given by four component callables."""
    ax = grid.axis_points()
    xs = np.meshgrid(ax, ax, ax, ax, indexing="ij")
    sigma = [np.broadcast_to(np.asarray(fn(*xs), dtype=float), (grid.n,) * 4)
             for fn in sigma_fns]
    c = np.zeros((6,) + (grid.n,) * 4)
    for (i, j), idx in _PAIR_INDEX.items():
        c[idx] = _partial(sigma[j], i) - _partial(sigma[i], j)
    return Form2OnT4(grid, c)


def wedge22(alpha: Form2OnT4, beta: Form2OnT4) -> Form4OnT4:
    """Pointwise coefficient of alpha ^ beta."""
    if alpha.grid != beta.grid:
        raise GridMismatch("forms live on different grids")
    a, b = alpha.component, beta.component
    # swap-symmetric grouping keeps wedge22(a, b) bitwise equal to
    # wedge22(b, a): IEEE addition commutes within each pair
    s1 = a(0, 1) * b(2, 3) + a(2, 3) * b(0, 1)
    s2 = a(0, 2) * b(1, 3) + a(1, 3) * b(0, 2)
    s3 = a(0, 3) * b(1, 2) + a(1, 2) * b(0, 3)
    return Form4OnT4(alpha.grid, s1 - s2 + s3)


def pfaffian(omega: Form2OnT4) -> np.ndarray:
    c = omega.component
    return c(0, 1) * c(2, 3) - c(0, 2) * c(1, 3) + c(0, 3) * c(1, 2)


def require_symplectic(omega: Form2OnT4) -> None:
    cfg = get_config()
    resid = closedness_residual(omega)
    if resid > cfg.closedness_tol:
        raise NotClosed(f"closedness residual {resid:.3e} exceeds tolerance")
    pf = np.abs(pfaffian(omega))
    if np.min(pf) < cfg.pfaffian_floor:
        raise Degenerate(f"Pfaffian dips to {np.min(pf):.3e}")


def lp_symplectic_norm(omega0: Form2OnT4, beta: Form2OnT4, p: float) -> float:
    """F(omega0, beta) = (int |beta^omega0 / omega0^2|^p omega0^2/2)^(1/p)."""
    p = check_exponent(p, allow_inf=False)
    require_symplectic(omega0)
    vol2 = wedge22(omega0, omega0).c
    ratio = wedge22(beta, omega0).c / vol2
    return float(np.mean(np.abs(ratio) ** p * vol2 / 2.0) ** (1.0 / p))


def l2_symplectic_inner(omega0: Form2OnT4, alpha: Form2OnT4, beta: Form2OnT4) -> float:
    """G(alpha, beta) = int |r_alpha r_beta| omega0^2/2 with the ratio
    fields r = (. ^ omega0) / omega0^2."""
    require_symplectic(omega0)
    vol2 = wedge22(omega0, omega0).c
    ra = wedge22(alpha, omega0).c / vol2
    rb = wedge22(beta, omega0).c / vol2
    return float(np.mean(np.abs(ra * rb) * vol2 / 2.0))


def projection_pushforward_check(omega0: Form2OnT4, beta: Form2OnT4, p: float):
    """Compare the Fisher norm of the projected tangent with the symplectic
    norm: lhs = F_fisher(omega0^2/2, beta ^ omega0) and rhs = 2 F(omega0, beta).

    Returns (lhs, rhs); the projection pi(omega) = omega^2 is a local
    isometry exactly when they agree.
    """
    p = check_exponent(p, allow_inf=False)
    require_symplectic(omega0)
    vol2 = wedge22(omega0, omega0).c
    mu = vol2 / 2.0
    mass = float(np.mean(mu))
    if abs(mass - 1.0) > 1e-8:
        raise ValueError(f"projection check requires unit volume, got {mass}")
    a = wedge22(beta, omega0).c  # derivative of omega^2/2 in direction beta
    lhs = float(np.mean(np.abs(a / mu) ** p * mu) ** (1.0 / p))
    rhs = 2.0 * lp_symplectic_norm(omega0, beta, p)
    return lhs, rhs


def harmonic_part(omega: Form2OnT4) -> Form2OnT4:
    """Constant-coefficient component: on the flat torus the harmonic 2-forms
    are exactly the coefficient-wise means of closed forms."""
    cfg = get_config()
    resid = closedness_residual(omega)
    if resid > cfg.closedness_tol:
        raise NotClosed(f"closedness residual {resid:.3e} exceeds tolerance")
    means = omega.c.reshape(6, -1).mean(axis=1)
    const = np.broadcast_to(
        means[:, None, None, None, None], omega.c.shape
    )
    return Form2OnT4(omega.grid, const)


def primitive_part(omega0: Form2OnT4, beta: Form2OnT4) -> Form2OnT4:
    """Subtract the omega0-trace so the result is in the Lefschetz kernel:
    beta - (beta^omega0 / omega0^2) omega0 satisfies (.)^omega0 = 0."""
    vol2 = wedge22(omega0, omega0).c
    trace = wedge22(beta, omega0).c / vol2
    return Form2OnT4(beta.grid, beta.c - trace[None] * omega0.c)


def _interp_axis_periodic(values: np.ndarray, lift: np.ndarray, axis: int) -> np.ndarray:
    """Quintic periodic interpolation along one axis at one query per slot."""
    moved = np.moveaxis(values, axis, 0)
    n = moved.shape[0]
    s = np.mod(lift, 1.0) * n
    j = np.floor(s).astype(np.int64)
    t = s - j
    t = t.reshape((n,) + (1,) * (moved.ndim - 1))
    out = np.zeros_like(moved)
    for m in range(-2, 4):
        w = np.ones_like(t)
        for k in range(-2, 4):
            if k != m:
                w = w * (t - k) / (m - k)
        out += w * moved[np.mod(j + m, n), ...]
    return np.moveaxis(out, 0, axis)


def pullback_coordinatewise(omega: Form2OnT4, lifts) -> Form2OnT4:
    """Pullback under (x1, .., x4) -> (phi1(x1), .., phi4(x4)) built from
    four monotone degree-1 circle lifts sampled at the torus resolution."""
    grid = omega.grid
    slopes = []
    for lift in lifts:
        if lift.grid.n != grid.n:
            raise GridMismatch("lift resolution must match the torus grid")
        x = lift.grid.points()
        from . import grids as _grids

        slopes.append(_grids.derivative(lift.with_values(lift.values - x), 1).values + 1.0)
    c_new = np.empty_like(omega.c)
    for (i, j), idx in _PAIR_INDEX.items():
        field = omega.c[idx]
        for axis in range(4):
            field = _interp_axis_periodic(field, lifts[axis].values, axis)
        shape_i = [1] * 4
        shape_i[i] = grid.n
        shape_j = [1] * 4
        shape_j[j] = grid.n
        c_new[idx] = field * slopes[i].reshape(shape_i) * slopes[j].reshape(shape_j)
    return Form2OnT4(grid, c_new)
