"""Luxemburg-norm Finsler geometry: Young functions, the norm as a
monotone root-find, its first variation, diffeo-invariance, the unit
sphere embedding, and the Euler-Arnold geodesic residuals on circle
diffeomorphism paths with their Lp reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import grids
from .config import check_exponent, get_config
from .densities import Density, ProbabilityDensity, ResidualField, pullback_density
from .errors import (
    MissingInverse,
    NonFiniteIntegral,
    PositivityViolation,
    TooFewSlices,
    ZeroDenominator,
)
from .grids import GridDescriptor, SampledFunction, require_same_grid


@dataclass(frozen=True)
class YoungFunction:
    """Symmetric convex generator of an Orlicz norm.

    evaluate/derivative must be vectorized; inverse_on_positives is needed
    only by the sphere embedding.  Invariants are spot-checked on a
    log-spaced grid at construction.  check_superlinear exists because the
    p = 1 power function is the admissible boundary case of the family yet
    fails the superlinearity proxy.
    """

    evaluate: callable
    derivative: callable
    label: str
    inverse_on_positives: callable | None = None
    check_superlinear: bool = field(default=True, repr=False)

    def __post_init__(self):
        cfg = get_config()
        ts = np.logspace(-6, 6, cfg.young_check_points)
        vals = self.evaluate(ts)
        if abs(float(self.evaluate(np.array([0.0]))[0])) > 1e-15:
            raise ValueError(f"{self.label}: Young functions vanish at 0")
        if np.max(np.abs(self.evaluate(-ts) - vals)) > 1e-12 * np.max(np.abs(vals)):
            raise ValueError(f"{self.label}: Young functions are symmetric")
        if np.any(np.diff(vals) <= 0):
            raise ValueError(f"{self.label}: must increase strictly on the positives")
        # superlinearity proxy: the slope ratio Phi(t)/t must grow by 10x
        # across the check range (a fixed threshold would reject the
        # slowly-superlinear |t| log(1+|t|) generator)
        slope_lo = float(self.evaluate(np.array([1.0]))[0])
        if self.check_superlinear and vals[-1] / ts[-1] <= 10.0 * slope_lo:
            raise ValueError(f"{self.label}: fails the superlinearity proxy")


def power_young(p: float) -> YoungFunction:
    p = check_exponent(p, allow_inf=False)
    return YoungFunction(
        evaluate=lambda t: np.abs(t) ** p,
        derivative=lambda t: p * np.abs(t) ** (p - 1.0) * np.sign(t),
        inverse_on_positives=lambda v: v ** (1.0 / p),
        label=f"power:{p:g}",
        check_superlinear=p > 1.0,
    )


def log_young() -> YoungFunction:
    def ev(t):
        a = np.abs(t)
        return a * np.log1p(a)

    def dv(t):
        a = np.abs(t)
        return np.sign(t) * (np.log1p(a) + a / (1.0 + a))

    return YoungFunction(
        evaluate=ev,
        derivative=dv,
        inverse_on_positives=_bisection_inverse(ev),
        label="loglinear",
    )


def _bisection_inverse(ev, iters: int = 200):
    """Vectorized numeric inverse of a strictly increasing Phi on [0, inf)."""

    def inv(v):
        v = np.asarray(v, dtype=float)
        lo = np.zeros_like(v)
        hi = np.ones_like(v)
        for _ in range(100):
            mask = ev(hi) < v
            if not mask.any():
                break
            hi = np.where(mask, hi * 2.0, hi)
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            go_left = ev(mid) > v
            hi = np.where(go_left, mid, hi)
            lo = np.where(go_left, lo, mid)
        return 0.5 * (lo + hi)

    return inv


def _weighted_modular_root(vals: np.ndarray, weight: np.ndarray, young: YoungFunction,
                           cell: float) -> float:
    """inf{r > 0 : cell * sum Phi(vals/r) weight <= 1} by doubling bracket
    plus bisection to the configured relative tolerance."""
    cfg = get_config()
    if not np.any(vals != 0.0):
        return 0.0

    def modular(r):
        with np.errstate(over="ignore"):
            return cell * float(np.sum(young.evaluate(vals / r) * weight))

    r = max(1e-8, float(np.max(np.abs(vals))) / 10.0)
    g = modular(r)
    if np.isnan(g):
        raise NonFiniteIntegral("modular integral is NaN at the initial bracket")
    if g <= 1.0:
        hi = r
        lo = r
        for _ in range(200):
            lo /= 2.0
            if modular(lo) > 1.0:
                break
        else:
            return 0.0
    else:
        lo = r
        hi = r
        for _ in range(200):
            hi *= 2.0
            if modular(hi) <= 1.0:
                break
        else:
            raise NonFiniteIntegral("modular never fell below 1 while doubling")
    while (hi - lo) > cfg.luxemburg_rtol * hi:
        mid = 0.5 * (lo + hi)
        if modular(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def luxemburg_norm(f: SampledFunction, mu: Density, young: YoungFunction) -> float:
    """inf{r > 0 : int Phi(f/r) mu <= 1}; zero for f = 0."""
    require_same_grid(f, mu.rho)
    return _weighted_modular_root(f.values, mu.rho.values, young, f.grid.h)


def luxemburg_first_variation(f: SampledFunction, h: SampledFunction, mu: Density,
                              young: YoungFunction) -> float:
    """First variation of the norm at f in direction h:
    ||f|| int h Phi'(f/||f||) mu / int f Phi'(f/||f||) mu."""
    require_same_grid(f, h, mu.rho)
    norm = luxemburg_norm(f, mu, young)
    if norm == 0.0:
        raise ZeroDenominator("variation is undefined at f = 0")
    weights = young.derivative(f.values / norm) * mu.rho.values
    denom = grids.integrate(f.with_values(f.values * weights))
    if denom <= 0.0:
        raise ZeroDenominator("variation denominator must be positive")
    numer = grids.integrate(f.with_values(h.values * weights))
    return norm * numer / denom


def orlicz_finsler_invariance(f: SampledFunction, mu: Density, young: YoungFunction,
                              phi: SampledFunction):
    """Norm of the ratio field before and after simultaneous pullback of
    density and tangent by a circle diffeomorphism; equal in exact
    arithmetic for every Young function."""
    before = luxemburg_norm(f, mu, young)
    mu_p = pullback_density(mu, phi)
    f_p = grids.compose(f, phi)
    after = luxemburg_norm(f_p, mu_p, young)
    return before, after


def phi_embedding(rho: ProbabilityDensity, young: YoungFunction) -> SampledFunction:
    """Pointwise inverse chart Phi^{-1}(rho), landing on the Orlicz unit
    sphere for probability densities."""
    if young.inverse_on_positives is None:
        raise MissingInverse(f"{young.label} supplies no inverse on the positives")
    return rho.rho.with_values(young.inverse_on_positives(rho.rho.values))


@dataclass(frozen=True)
class DiffeoPath:
    """Time-indexed monotone circle lifts phi(t, x).

    degrees carries the per-slice lift winding (the total mass of the
    corresponding density); paths built from positive-density flows that
    are not probability-normalized have non-unit degree.
    """

    grid: GridDescriptor
    values: np.ndarray  # (T, n)
    times: np.ndarray
    degrees: np.ndarray | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        times = np.asarray(self.times, dtype=float)
        if values.ndim != 2 or values.shape[1] != self.grid.n:
            raise ValueError("values must be (T, n) over the path grid")
        if times.shape != (values.shape[0],):
            raise ValueError("one time stamp per slice required")
        dts = np.diff(times)
        if not np.allclose(dts, dts[0], rtol=1e-12, atol=1e-15):
            raise ValueError("time slices must be uniformly spaced")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "times", times)
        if self.degrees is not None:
            object.__setattr__(self, "degrees", np.asarray(self.degrees, dtype=float))


def _path_stretch_rate(path: DiffeoPath):
    """phi_x per slice and f = phi_tx / phi_x at interior slices."""
    if path.values.shape[0] < 5:
        raise TooFewSlices("need at least 5 time slices")
    cfg = get_config()
    x = path.grid.points()
    deg = path.degrees if path.degrees is not None else np.ones(path.values.shape[0])
    phix = np.empty_like(path.values)
    for k in range(path.values.shape[0]):
        u = SampledFunction(path.grid, path.values[k] - deg[k] * x)
        phix[k] = grids.derivative(u, 1).values + deg[k]
    dt = path.times[1] - path.times[0]
    phitx = (phix[2:] - phix[:-2]) / (2.0 * dt)
    f = phitx / phix[1:-1]
    if np.min(f) < cfg.positivity_floor:
        raise PositivityViolation(
            f"stretch rate dips to {np.min(f):.3e}, below the floor {cfg.positivity_floor}")
    return phix, f, dt


def orlicz_geodesic_residual(path: DiffeoPath, young: YoungFunction):
    """Residual field of the Euler-Arnold equation for the right-invariant
    Luxemburg norm,
    K0^2 Phi(f/K0)/D = d/dt(K0 Phi'(f/K0)/D) + (K0 Phi'(f/K0)/D) f,
    with f = phi_tx/phi_x, D = int f Phi'(f/K0) phi_x dx and K0 the norm of
    the Eulerian stretch rate, all recomputed per slice."""
    phix, f, dt = _path_stretch_rate(path)
    cell = path.grid.h
    T = f.shape[0]
    lhs = np.empty_like(f)
    A = np.empty_like(f)
    for k in range(T):
        w = phix[k + 1]
        k0 = _weighted_modular_root(f[k], w, young, cell)
        dvals = young.derivative(f[k] / k0)
        D = cell * float(np.sum(f[k] * dvals * w))
        lhs[k] = k0 ** 2 * young.evaluate(f[k] / k0) / D
        A[k] = k0 * dvals / D
    dA = (A[2:] - A[:-2]) / (2.0 * dt)
    residual = lhs[1:-1] - dA - A[1:-1] * f[1:-1]
    return ResidualField(path.times[2:-2], residual)


def lp_reduction_residual(path: DiffeoPath, p: float):
    """Residual of the constant-speed reduction for power Young functions,
    p d/dt f^(p-1) + (p-1) f^p = 0 with f = phi_tx/phi_x.

    This is the form consistent with the flow of the explicit positive-
    density geodesic (df/dt = -f^2/p) for every p.
    """
    p = check_exponent(p, allow_inf=False)
    _, f, dt = _path_stretch_rate(path)
    fp = f ** (p - 1.0)
    dfp = (fp[2:] - fp[:-2]) / (2.0 * dt)
    residual = p * dfp + (p - 1.0) * f[1:-1] ** p
    return ResidualField(path.times[2:-2], residual)


def stretch_path(grid: GridDescriptor, times, scale_fn) -> DiffeoPath:
    """Uniform-stretch path phi(t, x) = c(t) x for a positive scale c(t);
    its Eulerian stretch rate is f = c'(t)/c(t), constant in x."""
    times = np.asarray(times, dtype=float)
    degrees = np.array([scale_fn(t) for t in times], dtype=float)
    x = grid.points()
    values = degrees[:, None] * x[None, :]
    return DiffeoPath(grid, values, times, degrees=degrees)
