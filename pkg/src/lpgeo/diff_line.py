"""Diffeomorphism groups of the line with decaying displacements.

A line diffeomorphism is stored as phi = id + f with the displacement f
vanishing at the left end and f' decaying at both ends.  The module houses
the flat charts (phi' based), the map to densities, the right-invariant
homogeneous Sobolev energy, the shifted Lp metric on line densities and
the affine extension with its covering chart.
"""

from __future__ import annotations

import math

import numpy as np

from . import grids
from .config import check_exponent
from .errors import NotInImage
from .grids import SampledFunction, require_same_grid


class LineDiffeo:
    """phi = id + f on a line grid; f' > -1, f decays on the left, f'
    decays on both sides.

    The derivative is cached: constructors that know f' analytically pass
    it in, otherwise it is computed with edge-value continuation (exact for
    displacements approaching a constant at +infinity).
    """

    __slots__ = ("f", "fprime")

    def __init__(self, f: SampledFunction, fprime: SampledFunction | None = None):
        if f.grid.kind != "line":
            raise ValueError("line diffeomorphisms live on line grids")
        if fprime is None:
            fprime = grids.derivative_edge(f, 1)
        require_same_grid(f, fprime)
        if np.any(fprime.values <= -1.0):
            raise ValueError("displacement slope must stay above -1")
        grids.check_line_decay(f, sides="left")
        grids.check_line_decay(fprime, sides="both")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "fprime", fprime)

    def __setattr__(self, *_):
        raise AttributeError("LineDiffeo is immutable")

    @property
    def grid(self):
        return self.f.grid

    def phi_values(self) -> np.ndarray:
        return self.grid.points() + self.f.values

    def dphi(self) -> SampledFunction:
        """phi' = 1 + f'."""
        return self.fprime + 1.0

    def eval(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return pts + grids.interp_at(self.f, pts)


class StrictLineDiffeo(LineDiffeo):
    """Subgroup member with f' > 0 (strictly expanding everywhere)."""

    def __init__(self, f, fprime=None):
        super().__init__(f, fprime)
        if np.any(self.fprime.values <= 0.0):
            raise ValueError("strict diffeomorphisms require f' > 0")


class ExtendedLineDiffeo:
    """Affine extension phi = a id + b + a f_core with a > 0.

    The (a, b, core) decomposition is unique thanks to the decay of the
    core displacement; the identity a id + b + a f = (a id + b) o (id + f)
    holds at the nodes by construction.
    """

    __slots__ = ("a", "b", "core")

    def __init__(self, a: float, b: float, core: LineDiffeo):
        if a <= 0:
            raise ValueError("scale factor a must be positive")
        object.__setattr__(self, "a", float(a))
        object.__setattr__(self, "b", float(b))
        object.__setattr__(self, "core", core)

    def __setattr__(self, *_):
        raise AttributeError("ExtendedLineDiffeo is immutable")

    @property
    def grid(self):
        return self.core.grid

    def phi_values(self) -> np.ndarray:
        x = self.grid.points()
        return self.a * x + self.b + self.a * self.core.f.values

    def dphi(self) -> SampledFunction:
        return (self.core.fprime + 1.0) * self.a

    def eval(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return self.a * pts + self.b + self.a * grids.interp_at(self.core.f, pts)


class LineDensity:
    """mu = g dx with g in W^{inf,1}.

    The strict domain of Dens is g > 0; the shifted metric F_p stays
    defined down to g > -1, and inverse charts may produce such shifted
    coefficients, so only g > -1 is enforced here.  Operations requiring
    genuine densities check positivity themselves.
    """

    __slots__ = ("g",)

    def __init__(self, g: SampledFunction):
        if g.grid.kind != "line":
            raise ValueError("line densities live on line grids")
        if np.any(g.values <= -1.0):
            raise ValueError("shifted coefficient must stay above -1")
        grids.check_line_decay(g, sides="both")
        object.__setattr__(self, "g", g)

    def __setattr__(self, *_):
        raise AttributeError("LineDensity is immutable")

    @property
    def grid(self):
        return self.g.grid


def identity(grid) -> LineDiffeo:
    zero = SampledFunction(grid, np.zeros(grid.n))
    return LineDiffeo(zero, fprime=zero)


def from_slope(grid, slope_fn) -> LineDiffeo:
    """Build id + f from an analytic f' > -1, anchoring f(-L) = 0."""
    fprime = grids.sample(grid, slope_fn)
    f = grids.cumulative_integral(fprime)
    cls = StrictLineDiffeo if np.all(fprime.values > 0) else LineDiffeo
    return cls(f, fprime=fprime)


def compose(outer: LineDiffeo, inner: LineDiffeo) -> LineDiffeo:
    """outer o inner with the chain rule supplying the cached derivative.

    Quintic interpolation keeps the composed slope clean enough for the
    downstream Schwarzian finite differences, which amplify interpolation
    noise by h^-2.
    """
    require_same_grid(outer.f, inner.f)
    if np.all(inner.f.values == 0.0):
        return outer
    if np.all(outer.f.values == 0.0):
        return inner
    phi_inner = inner.phi_values()
    f_vals = inner.f.values + grids.interp_at(outer.f, phi_inner, order=6)
    # expanded chain rule a + b + a b keeps tiny tail slopes positive where
    # the factored form (1+a)(1+b) - 1 would round to zero
    fo = grids.interp_at(outer.fprime, phi_inner, order=6)
    fi = inner.fprime.values
    fp_vals = fo + fi + fo * fi
    f = inner.f.with_values(f_vals)
    fp = inner.f.with_values(fp_vals)
    cls = StrictLineDiffeo if np.all(fp_vals > 0) else LineDiffeo
    return cls(f, fprime=fp)


def phi_p(phi: LineDiffeo, p: float) -> SampledFunction:
    """Flat chart p (phi'^(1/p) - 1); log(phi') in the p = infinity limit."""
    p = check_exponent(p)
    dphi = phi.dphi().values
    if math.isinf(p):
        return phi.f.with_values(np.log(dphi))
    out = p * (dphi ** (1.0 / p) - 1.0)
    return phi.f.with_values(out)


def phi_p_inverse(g: SampledFunction, p: float) -> LineDiffeo:
    """Inverse chart x + int_-inf^x ((g/p + 1)^p - 1); exp(g) - 1 at p = inf."""
    p = check_exponent(p)
    if math.isinf(p):
        slope = np.exp(g.values) - 1.0
    else:
        if np.any(g.values <= -p):
            raise NotInImage(f"chart image requires values > -{p}")
        slope = (g.values / p + 1.0) ** p - 1.0
    fprime = g.with_values(slope)
    f = grids.cumulative_integral(fprime)
    return LineDiffeo(f, fprime=fprime)


def w1p_energy(phi: LineDiffeo, h: SampledFunction, p: float,
               hprime: SampledFunction | None = None) -> float:
    """Right-invariant homogeneous Sobolev norm
    (int phi_x^(1-p) |h_x|^p dx)^(1/p) of a tangent h at phi."""
    require_same_grid(phi.f, h)
    p = check_exponent(p, allow_inf=False)
    hx = grids.derivative_edge(h, 1) if hprime is None else hprime
    integrand = phi.dphi().values ** (1.0 - p) * np.abs(hx.values) ** p
    return float(grids.integrate(h.with_values(integrand)) ** (1.0 / p))


def gamma(phi: StrictLineDiffeo) -> LineDensity:
    """(phi - id)^* dx = f'(x) dx, the chart onto line densities."""
    return LineDensity(phi.fprime)


def gamma_inverse(mu: LineDensity) -> StrictLineDiffeo:
    if np.any(mu.g.values <= 0):
        raise NotInImage("gamma inverse requires a strictly positive coefficient")
    f = grids.cumulative_integral(mu.g)
    return StrictLineDiffeo(f, fprime=mu.g)


def line_fp_norm(mu, a: SampledFunction, p: float) -> float:
    """Shifted metric F_p(mu, a) = (int |a/(g+1)|^p (g+1) dx)^(1/p);
    F_inf is the sup of |a/(g+1)|.  Accepts a LineDensity or a raw
    coefficient function (the degenerate g = 0 limit is admissible)."""
    g = mu.g if isinstance(mu, LineDensity) else mu
    require_same_grid(g, a)
    p = check_exponent(p)
    denom = g.values + 1.0
    w = a.values / denom
    if math.isinf(p):
        return float(np.max(np.abs(w)))
    return float(grids.integrate(a.with_values(np.abs(w) ** p * denom)) ** (1.0 / p))


def psi_p(mu: LineDensity, p: float) -> SampledFunction:
    """Chart p (((mu+dx)/dx)^(1/p) - 1) on line densities; log(1 + g) at
    p = infinity."""
    p = check_exponent(p)
    shifted = mu.g.values + 1.0
    if math.isinf(p):
        return mu.g.with_values(np.log(shifted))
    return mu.g.with_values(p * (shifted ** (1.0 / p) - 1.0))


def psi_p_inverse(f: SampledFunction, p: float) -> LineDensity:
    p = check_exponent(p)
    if math.isinf(p):
        return LineDensity(f.with_values(np.exp(f.values) - 1.0))
    if np.any(f.values <= -p):
        raise NotInImage(f"chart image requires values > -{p}")
    return LineDensity(f.with_values((f.values / p + 1.0) ** p - 1.0))


def extended_phi_infty(phi: ExtendedLineDiffeo) -> SampledFunction:
    """Covering chart log(phi') on the affine extension; the translation
    part b never enters, realizing the real-line fibre."""
    return phi.core.f.with_values(np.log(phi.a * (1.0 + phi.core.fprime.values)))
