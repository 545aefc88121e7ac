"""Lp geometry on positive and probability densities over the circle.

Densities are represented by their coefficient against dx.  The Finsler
metric, the explicit geodesic between positive densities, the residuals of
the geodesic equations, the flat isometric embedding and the 1-d transport
(Moser) map all live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import grids
from .config import check_exponent, get_config
from .errors import AllMasked, NotInImage, TooFewSlices, UnsupportedExponent
from .grids import SampledFunction, require_same_grid


class Density:
    """Positive density rho dx on a circle grid."""

    __slots__ = ("rho",)

    def __init__(self, rho: SampledFunction):
        if rho.grid.kind != "circle":
            raise ValueError("densities live on circle grids")
        if np.any(rho.values <= 0):
            raise ValueError("density coefficient must be strictly positive")
        object.__setattr__(self, "rho", rho)

    def __setattr__(self, *_):
        raise AttributeError("Density is immutable")

    @property
    def grid(self):
        return self.rho.grid

    def mass(self) -> float:
        return grids.integrate(self.rho)


class ProbabilityDensity(Density):
    """Positive density with unit total mass."""

    def __init__(self, rho: SampledFunction):
        super().__init__(rho)
        mass = grids.integrate(rho)
        if abs(mass - 1.0) > get_config().mass_tol:
            raise ValueError(f"probability density has mass {mass}")


class TangentDensity:
    """Tangent vector a dx at a density; zero-mean when tangent to Prob."""

    __slots__ = ("a",)

    def __init__(self, a: SampledFunction):
        if a.grid.kind != "circle":
            raise ValueError("tangent densities live on circle grids")
        object.__setattr__(self, "a", a)

    def __setattr__(self, *_):
        raise AttributeError("TangentDensity is immutable")

    @property
    def grid(self):
        return self.a.grid

    def require_prob_tangent(self) -> "TangentDensity":
        mean = grids.integrate(self.a)
        if abs(mean) > get_config().mean_tol:
            raise ValueError(f"tangent to Prob must have zero mean, got {mean}")
        return self


@dataclass(frozen=True)
class ResidualField:
    """Residual samples over interior times of a path; values[k, i] is the
    residual at time times[k], node i."""

    times: np.ndarray
    values: np.ndarray
    masked_nodes: int = 0

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))


def lp_fisher_norm(mu: Density, a: TangentDensity, p: float) -> float:
    """Finsler norm F(mu, a) = (int |a/mu|^p mu)^(1/p); sup |a/mu| at p = inf."""
    require_same_grid(mu.rho, a.a)
    p = check_exponent(p)
    w = a.a.values / mu.rho.values
    if math.isinf(p):
        return float(np.max(np.abs(w)))
    return float(grids.integrate(mu.rho.with_values(np.abs(w) ** p * mu.rho.values)) ** (1.0 / p))


def geodesic_explicit(rho0: Density, rho1: Density, t: float, p: float) -> Density:
    """Pointwise geodesic (t rho1^(1/p) + (1-t) rho0^(1/p))^p between positive
    densities; exact endpoint interpolation at t = 0, 1."""
    require_same_grid(rho0.rho, rho1.rho)
    p = check_exponent(p, allow_inf=False)
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if t == 0.0:
        return rho0
    if t == 1.0:
        return rho1
    mix = t * rho1.rho.values ** (1.0 / p) + (1.0 - t) * rho0.rho.values ** (1.0 / p)
    return Density(rho0.rho.with_values(mix ** p))


def _path_arrays(path, times=None):
    if len(path) < 5:
        raise TooFewSlices("need at least 5 uniformly spaced time slices")
    rhos = [d.rho for d in path]
    require_same_grid(*rhos)
    vals = np.stack([r.values for r in rhos])
    if times is None:
        times = np.linspace(0.0, 1.0, len(path))
    times = np.asarray(times, dtype=float)
    dts = np.diff(times)
    if not np.allclose(dts, dts[0], rtol=1e-12, atol=1e-15):
        raise ValueError("time slices must be uniformly spaced")
    return vals, times, float(dts[0])


def _time_derivatives(vals: np.ndarray, dt: float):
    """Central first and second time differences at interior slices."""
    d1 = (vals[2:] - vals[:-2]) / (2.0 * dt)
    d2 = (vals[2:] - 2.0 * vals[1:-1] + vals[:-2]) / dt ** 2
    return d1, d2


def dens_geodesic_residual(path, p: float, times=None) -> ResidualField:
    """Residual of d/dt(rho_t/rho) + (1/p)(rho_t/rho)^2 at interior times."""
    p = check_exponent(p, allow_inf=False, min_p=1.0 + 1e-12)
    vals, tgrid, dt = _path_arrays(path, times)
    d1, d2 = _time_derivatives(vals, dt)
    mid = vals[1:-1]
    w = d1 / mid
    # d/dt w = rho_tt/rho - w^2, evaluated in one central-difference pass
    residual = d2 / mid - w ** 2 + w ** 2 / p
    return ResidualField(tgrid[1:-1], residual)


def prob_geodesic_residual(path, p: float, times=None) -> ResidualField:
    """Residual of grad(|w|^(p-2) dw/dt + (1/p)|w|^p), w = rho_t/rho.

    For p < 2 nodes with |w| below the mask floor are reported as zero and
    counted; more than half the nodes masked raises AllMasked.
    """
    p = check_exponent(p, allow_inf=False, min_p=1.0 + 1e-12)
    cfg = get_config()
    vals, tgrid, dt = _path_arrays(path, times)
    d1, d2 = _time_derivatives(vals, dt)
    mid = vals[1:-1]
    grid = path[0].grid
    w = d1 / mid
    wt = d2 / mid - w ** 2
    aw = np.abs(w)
    mask = np.zeros_like(w, dtype=bool)
    if p < 2.0:
        mask = aw < cfg.mask_floor
        if mask.mean() > 0.5:
            raise AllMasked(f"{mask.mean():.0%} of nodes below mask floor")
        aw = np.where(mask, 1.0, aw)
    bracket = aw ** (p - 2.0) * wt + aw ** p / p
    residual = np.stack([
        grids.derivative(SampledFunction(grid, row), 1).values for row in bracket
    ])
    residual[mask] = 0.0
    return ResidualField(tgrid[1:-1], residual, masked_nodes=int(mask.sum()))


def chern_geodesic_residual(path, p: float, times=None) -> ResidualField:
    """Residual of the formal connection form of the Prob geodesic equation,
    d/dt w + (1/p) w^2 + ((p-1)/p) (int w^2 mu / int |w|^(2-p) mu) |w|^(2-p).

    Only 1 < p <= 2 is accepted: the |w|^(2-p) factor is not integrable at
    zeros of w for larger p.
    """
    p = check_exponent(p, allow_inf=False, min_p=1.0 + 1e-12)
    if p > 2.0:
        raise UnsupportedExponent("the formal geodesic form requires p <= 2")
    vals, tgrid, dt = _path_arrays(path, times)
    d1, d2 = _time_derivatives(vals, dt)
    mid = vals[1:-1]
    grid = path[0].grid
    w = d1 / mid
    wt = d2 / mid - w ** 2
    aw = np.abs(w)
    resid = np.empty_like(w)
    for k in range(w.shape[0]):
        mu = SampledFunction(grid, mid[k])
        num = grids.integrate(mu.with_values(w[k] ** 2 * mid[k]))
        den = grids.integrate(mu.with_values(aw[k] ** (2.0 - p) * mid[k]))
        resid[k] = wt[k] + w[k] ** 2 / p + (p - 1.0) / p * (num / den) * aw[k] ** (2.0 - p)
    return ResidualField(tgrid[1:-1], resid)


def flat_embed(mu: Density, p: float) -> SampledFunction:
    """Isometric chart f = p (mu/dx)^(1/p) into (C^inf, L^p)."""
    p = check_exponent(p, allow_inf=False)
    return mu.rho.with_values(p * mu.rho.values ** (1.0 / p))


def flat_embed_inverse(f: SampledFunction, p: float) -> Density:
    """Inverse chart (f/p)^p dx; defined on strictly positive functions."""
    p = check_exponent(p, allow_inf=False)
    if np.any(f.values <= 0):
        raise NotInImage("flat chart image consists of positive functions")
    return Density(f.with_values((f.values / p) ** p))


def flat_differential(mu: Density, a: TangentDensity, p: float) -> SampledFunction:
    """Pushforward of the tangent a under the flat chart:
    (a/dx)(mu/dx)^(1/p - 1)."""
    require_same_grid(mu.rho, a.a)
    p = check_exponent(p, allow_inf=False)
    return a.a.with_values(a.a.values * mu.rho.values ** (1.0 / p - 1.0))


def moser_map_1d(mu: ProbabilityDensity, nu: ProbabilityDensity) -> SampledFunction:
    """Monotone degree-1 circle map phi = G^(-1) o F with phi^* nu = mu,
    where F, G are the cumulative integrals of mu, nu from node 0.

    The construction is verified by the pushforward residual
    |phi' (nu o phi) - mu| before returning.
    """
    require_same_grid(mu.rho, nu.rho)
    cfg = get_config()
    F = grids.cumulative_integral(mu.rho)
    G = grids.cumulative_integral(nu.rho)
    x = mu.grid.points()
    from . import kernels

    ug = np.ascontiguousarray(G.values - x)
    phi_vals = kernels.invert_periodic_lift(ug, 1.0, F.values, cfg.bisect_tol)
    phi = mu.rho.with_values(phi_vals)
    pulled = pullback_density(nu, phi)
    resid = np.max(np.abs(pulled.rho.values - mu.rho.values))
    if resid > cfg.moser_residual_tol:
        raise ValueError(f"transport residual {resid:.3e} exceeds tolerance")
    return phi


def pullback_density(mu: Density, phi: SampledFunction) -> Density:
    """phi^* mu = phi' (rho o phi) dx for a monotone degree-1 lift phi."""
    u = phi - SampledFunction(phi.grid, phi.grid.points())
    dphi = grids.derivative(u, 1) + 1.0
    rho_at = grids.compose(mu.rho, phi)
    return Density(rho_at * dphi)


def pullback_tangent(a: TangentDensity, phi: SampledFunction) -> TangentDensity:
    """phi^* a, same transformation law as for densities."""
    u = phi - SampledFunction(phi.grid, phi.grid.points())
    dphi = grids.derivative(u, 1) + 1.0
    return TangentDensity(grids.compose(a.a, phi) * dphi)
