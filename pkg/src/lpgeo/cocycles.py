"""Bott-Thurston group cochain, higher Gelfand-Fuchs forms and the
Virasoro bracket, on the circle (n = 1) and the flat 2-torus (n = 2).

Conventions, fixed empirically so the group 2-cocycle identity closes on
test data: partial products nest as phi_tilde_i = phi_i o ... o phi_1 and
the group product is m(phi, psi) = psi o phi (the order that makes the
pullback action covariant).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import grids
from .config import check_exponent, get_config
from .densities import Density, TangentDensity, moser_map_1d, ProbabilityDensity
from .errors import GridMismatch, NotMonotone, StepTooSmall
from .grids import SampledFunction, require_same_grid


# ---------------------------------------------------------------- torus bits

@dataclass(frozen=True)
class TorusGrid:
    n1: int
    n2: int

    def __post_init__(self):
        if min(self.n1, self.n2) < 16:
            raise ValueError("torus grids need at least 16 nodes per axis")

    def points(self):
        return np.arange(self.n1) / self.n1, np.arange(self.n2) / self.n2


class TorusFunction:
    """Samples over the unit 2-torus with spectral partial derivatives."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: TorusGrid, values):
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (grid.n1, grid.n2):
            raise ValueError(f"expected shape {(grid.n1, grid.n2)}, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("samples must be finite")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __setattr__(self, *_):
        raise AttributeError("TorusFunction is immutable")


def torus_sample(grid: TorusGrid, fn) -> TorusFunction:
    x, y = grid.points()
    return TorusFunction(grid, fn(x[:, None], y[None, :]))


def torus_integrate(f: TorusFunction) -> float:
    return float(np.mean(f.values))


def torus_partial(f: TorusFunction, axis: int) -> TorusFunction:
    n = f.values.shape[axis]
    fh = np.fft.rfft(f.values, axis=axis)
    k = 2.0j * np.pi * np.fft.rfftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        k[-1] = 0.0
    shape = [1, 1]
    shape[axis] = k.shape[0]
    out = np.fft.irfft(fh * k.reshape(shape), n, axis=axis)
    return TorusFunction(f.grid, out)


def _interp_axis0(values: np.ndarray, lift: np.ndarray) -> np.ndarray:
    """Cubic periodic interpolation along axis 0 at one query per row."""
    n = values.shape[0]
    s = np.mod(lift, 1.0) * n
    j = np.floor(s).astype(np.int64)
    t = (s - j)[:, None]
    j = np.mod(j, n)
    vm = values[np.mod(j - 1, n), :]
    v0 = values[np.mod(j, n), :]
    v1 = values[np.mod(j + 1, n), :]
    v2 = values[np.mod(j + 2, n), :]
    wm = -t * (t - 1.0) * (t - 2.0) / 6.0
    w0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0
    w1 = -(t + 1.0) * t * (t - 2.0) / 2.0
    w2 = (t + 1.0) * t * (t - 1.0) / 6.0
    return wm * vm + w0 * v0 + w1 * v1 + w2 * v2


class TorusDiffeo:
    """Coordinate-wise monotone torus map (x, y) -> (lift1(x), lift2(y))."""

    __slots__ = ("grid", "lift1", "lift2")

    def __init__(self, grid: TorusGrid, lift1: SampledFunction, lift2: SampledFunction):
        if lift1.grid.n != grid.n1 or lift2.grid.n != grid.n2:
            raise GridMismatch("lift resolutions must match the torus grid")
        for lift in (lift1, lift2):
            if np.any(np.diff(lift.values) <= 0):
                raise NotMonotone("coordinate lift is not increasing")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "lift1", lift1)
        object.__setattr__(self, "lift2", lift2)

    def __setattr__(self, *_):
        raise AttributeError("TorusDiffeo is immutable")


def torus_identity(grid: TorusGrid) -> TorusDiffeo:
    g1, g2 = grids.circle(grid.n1), grids.circle(grid.n2)
    return TorusDiffeo(grid, grids.sample(g1, lambda x: x), grids.sample(g2, lambda x: x))


def torus_compose(outer: TorusDiffeo, inner: TorusDiffeo) -> TorusDiffeo:
    return TorusDiffeo(
        outer.grid,
        grids.compose_maps(outer.lift1, inner.lift1),
        grids.compose_maps(outer.lift2, inner.lift2),
    )


class TorusDensity:
    """Positive density coefficient on the unit 2-torus."""

    __slots__ = ("f",)

    def __init__(self, f: TorusFunction):
        if np.any(f.values <= 0):
            raise ValueError("torus density must be strictly positive")
        object.__setattr__(self, "f", f)

    def __setattr__(self, *_):
        raise AttributeError("TorusDensity is immutable")


def _torus_pullback_log_jacobian(phi: TorusDiffeo, rho: TorusFunction) -> TorusFunction:
    """log of (phi^* mu)/mu for mu = rho dx dy and a coordinate-wise phi."""
    x1 = phi.lift1.grid.points()
    x2 = phi.lift2.grid.points()
    d1 = grids.derivative(phi.lift1.with_values(phi.lift1.values - x1), 1).values + 1.0
    d2 = grids.derivative(phi.lift2.with_values(phi.lift2.values - x2), 1).values + 1.0
    rho_at = _interp_axis0(rho.values, phi.lift1.values)
    rho_at = _interp_axis0(rho_at.T, phi.lift2.values).T
    jac = d1[:, None] * d2[None, :] * rho_at / rho.values
    return TorusFunction(phi.grid, np.log(jac))


# -------------------------------------------------------------- circle bits

def log_jacobian(phi: SampledFunction, mu: Density) -> SampledFunction:
    """log of the pullback coefficient phi' (rho o phi) / rho."""
    require_same_grid(phi, mu.rho)
    u = phi - SampledFunction(phi.grid, phi.grid.points())
    dphi = grids.derivative(u, 1) + 1.0
    rho_at = grids.compose(mu.rho, phi)
    return phi.with_values(np.log(dphi.values * rho_at.values / mu.rho.values))


def _partial_products(phis, compose_fn):
    tilde = [phis[0]]
    for nxt in phis[1:]:
        tilde.append(compose_fn(nxt, tilde[-1]))  # phi_i o (phi_{i-1} o ... o phi_1)
    return tilde


def bott_thurston_c(phis, mu, n: int = 1) -> float:
    """Group (n+1)-cochain int log a(phi~_1) d log a(phi~_2) ^ ... built from
    log-Jacobians of the nested partial products."""
    if n == 1:
        if len(phis) != 2:
            raise ValueError("n = 1 takes exactly two circle diffeomorphisms")
        t1, t2 = _partial_products(list(phis), grids.compose_maps)
        a1 = log_jacobian(t1, mu)
        a2 = log_jacobian(t2, mu)
        return grids.integrate(a1 * grids.derivative(a2, 1))
    if n == 2:
        if len(phis) != 3:
            raise ValueError("n = 2 takes exactly three torus diffeomorphisms")
        t1, t2, t3 = _partial_products(list(phis), torus_compose)
        a1 = _torus_pullback_log_jacobian(t1, mu.f)
        a2 = _torus_pullback_log_jacobian(t2, mu.f)
        a3 = _torus_pullback_log_jacobian(t3, mu.f)
        return _wedge_integral_torus(a1, a2, a3)
    raise ValueError("only n = 1 (circle) and n = 2 (torus) are supported")


def _wedge_integral_torus(w1: TorusFunction, w2: TorusFunction, w3: TorusFunction) -> float:
    d2x = torus_partial(w2, 0).values
    d2y = torus_partial(w2, 1).values
    d3x = torus_partial(w3, 0).values
    d3y = torus_partial(w3, 1).values
    integrand = w1.values * (d2x * d3y - d2y * d3x)
    return float(np.mean(integrand))


def gelfand_fuchs_omega(tangents, mu, n: int = 1) -> float:
    """Antisymmetric (n+1)-form int (a1/mu) d(a2/mu) ^ ... ^ d(a_{n+1}/mu)."""
    cfg = get_config()
    if n == 1:
        if len(tangents) != 2:
            raise ValueError("n = 1 takes two tangent densities")
        a1, a2 = tangents
        require_same_grid(a1.a, a2.a, mu.rho)
        for a in (a1, a2):
            if abs(grids.integrate(a.a)) > cfg.mean_tol:
                raise ValueError("tangents must have zero mean")
        w1 = a1.a / mu.rho
        w2 = a2.a / mu.rho
        return grids.integrate(w1 * grids.derivative(w2, 1))
    if n == 2:
        if len(tangents) != 3:
            raise ValueError("n = 2 takes three tangent fields")
        rho = mu.f.values
        ws = []
        for a in tangents:
            if a.values.shape != rho.shape:
                raise GridMismatch("tangent resolution differs from the density")
            if abs(torus_integrate(a)) > cfg.mean_tol:
                raise ValueError("tangents must have zero mean")
            ws.append(TorusFunction(a.grid, a.values / rho))
        return _wedge_integral_torus(*ws)
    raise ValueError("only n = 1 and n = 2 are supported")


def mixed_derivative_check(a1: TangentDensity, a2: TangentDensity,
                           mu: ProbabilityDensity, step: float | None = None) -> float:
    """|mixed finite difference of the group cochain - direct form| (n = 1).

    Each one-parameter family is generated through the 1-d transport map,
    phi_i(t)^* mu = mu + t a_i.  Step-halving estimates the FD noise; if the
    two estimates disagree wildly the step is rejected.
    """
    cfg = get_config()
    s = cfg.cocycle_fd_step if step is None else step
    direct = gelfand_fuchs_omega([a1, a2], mu, n=1)

    def family(a, t):
        shifted = ProbabilityDensity(mu.rho + t * a.a)
        return moser_map_1d(shifted, mu)

    def fd(st):
        cpp = bott_thurston_c([family(a1, st), family(a2, st)], mu)
        cpm = bott_thurston_c([family(a1, st), family(a2, -st)], mu)
        cmp_ = bott_thurston_c([family(a1, -st), family(a2, st)], mu)
        cmm = bott_thurston_c([family(a1, -st), family(a2, -st)], mu)
        return (cpp - cpm - cmp_ + cmm) / (4.0 * st * st)

    coarse = fd(s)
    fine = fd(s / 2.0)
    scale = max(abs(fine), abs(direct))
    if scale > 0 and abs(coarse - fine) > 0.5 * scale:
        raise StepTooSmall("finite-difference noise dominates the mixed derivative")
    return abs(fine - direct)


def omega_lp_sphere(f, tangents, p: float, n: int = 1) -> float:
    """The form evaluated in sphere coordinates: p^(n+1) times the wedge
    integral of the ratio fields (a_i f)/f.  Equals the direct evaluation
    on densities for every p."""
    p = check_exponent(p, allow_inf=False)
    if n == 1:
        if np.any(f.values <= 0):
            raise ValueError("sphere chart requires positive samples")
        r1 = tangents[0] / f
        r2 = tangents[1] / f
        return p ** 2 * grids.integrate(r1 * grids.derivative(r2, 1))
    if n == 2:
        rf = f.values
        if np.any(rf <= 0):
            raise ValueError("sphere chart requires positive samples")
        ws = [TorusFunction(f.grid, t.values / rf) for t in tangents]
        return p ** 3 * _wedge_integral_torus(*ws)
    raise ValueError("only n = 1 and n = 2 are supported")


class VirasoroElement:
    """Vector field f(x) d/dx on the circle plus a central charge."""

    __slots__ = ("vector_part", "central")

    def __init__(self, vector_part: SampledFunction, central: float = 0.0):
        if vector_part.grid.kind != "circle":
            raise ValueError("Virasoro vector parts live on the circle")
        object.__setattr__(self, "vector_part", vector_part)
        object.__setattr__(self, "central", float(central))

    def __setattr__(self, *_):
        raise AttributeError("VirasoroElement is immutable")


def virasoro_bracket(x: VirasoroElement, y: VirasoroElement) -> VirasoroElement:
    """[(f, a), (g, b)] = ((f'g - fg') d/dx, int f' g'' dx); the input
    charges never appear (the extension is central)."""
    f, g = x.vector_part, y.vector_part
    require_same_grid(f, g)
    fp = grids.derivative(f, 1)
    gp = grids.derivative(g, 1)
    vector = fp * g - f * gp
    mu = Density(f.with_values(np.ones(f.grid.n)))
    central = gelfand_fuchs_omega(
        [TangentDensity(fp), TangentDensity(gp)], mu, n=1
    )
    return VirasoroElement(vector, central)


def group_cocycle_residual(phi: SampledFunction, psi: SampledFunction,
                           chi: SampledFunction, mu: Density) -> float:
    """Residual of the inhomogeneous 2-cocycle identity under the fixed
    convention m(phi, psi) = psi o phi:
    |c(psi,chi) - c(m(phi,psi),chi) + c(phi,m(psi,chi)) - c(phi,psi)|."""
    def m(a, b):
        return grids.compose_maps(b, a)

    term1 = bott_thurston_c([psi, chi], mu)
    term2 = bott_thurston_c([m(phi, psi), chi], mu)
    term3 = bott_thurston_c([phi, m(psi, chi)], mu)
    term4 = bott_thurston_c([phi, psi], mu)
    return abs(term1 - term2 + term3 - term4)
