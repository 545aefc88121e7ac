"""Schwarz potential, Schwarzian and Lp-Schwarzian calculus on the line.

The primary computation route goes through the potential u = log(phi'):
S = u'' - u'^2/2.  The two-variable potential V(y, z) = log of the divided
difference supplies an independent cross-check, with the Schwarzian equal
to 6 times the mixed second derivative of V on the diagonal.  The real
Bers chart phi -> S{phi} and the one-dimensional dynamics bound on the
preimage tangents complete the module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import diff_line, grids
from .config import check_exponent, get_config
from .errors import ImageViolation, MixedSign
from .grids import SampledFunction

_BERS_INTEGRAL_TOL = 1e-10


class SchwarzField:
    """Coefficient s(x) of a quadratic differential s dx (x) dx."""

    __slots__ = ("s",)

    def __init__(self, s: SampledFunction):
        if s.grid.kind != "line":
            raise ValueError("Schwarz fields live on line grids")
        grids.check_line_decay(s, sides="both")
        object.__setattr__(self, "s", s)

    def __setattr__(self, *_):
        raise AttributeError("SchwarzField is immutable")

    @property
    def grid(self):
        return self.s.grid


def _log_slope(phi) -> SampledFunction:
    """Potential u = log(phi'), via log1p on the decaying displacement slope."""
    if isinstance(phi, diff_line.ExtendedLineDiffeo):
        return phi.core.f.with_values(
            math.log(phi.a) + np.log1p(phi.core.fprime.values)
        )
    return phi.f.with_values(np.log1p(phi.fprime.values))


def _phi_samples(phi) -> np.ndarray:
    return phi.phi_values()


def schwarz_potential(phi, y, z) -> np.ndarray | float:
    """V(y, z) = log((phi(y) - phi(z)) / (y - z)), with the diagonal limit
    log phi'((y+z)/2) taken below the cancellation threshold."""
    cfg = get_config()
    y_arr = np.asarray(y, dtype=float)
    z_arr = np.asarray(z, dtype=float)
    near = np.abs(y_arr - z_arr) < cfg.diag_switch
    mid = 0.5 * (y_arr + z_arr)
    dphi_mid = _interp_dphi(phi, np.atleast_1d(mid))
    py = phi.eval(np.atleast_1d(y_arr))
    pz = phi.eval(np.atleast_1d(z_arr))
    dy = np.atleast_1d(y_arr - z_arr)
    safe = np.where(np.atleast_1d(near), 1.0, dy)
    quotient = np.where(np.atleast_1d(near), dphi_mid, (py - pz) / safe)
    out = np.log(quotient)
    if np.isscalar(y) and np.isscalar(z):
        return float(out[0])
    return out.reshape(y_arr.shape)


def _interp_dphi(phi, points: np.ndarray) -> np.ndarray:
    if isinstance(phi, diff_line.ExtendedLineDiffeo):
        return phi.a * (1.0 + grids.interp_at(phi.core.fprime, points))
    return 1.0 + grids.interp_at(phi.fprime, points)


def schwarzian(phi) -> SchwarzField:
    """S{phi} = u'' - u'^2 / 2 with u = log(phi')."""
    u = _log_slope(phi)
    up = grids.derivative_edge(u, 1)
    upp = grids.derivative_edge(u, 2)
    return SchwarzField(upp - 0.5 * up * up)


_D1_OFFSETS = (-2, -1, 1, 2)
_D1_WEIGHTS = (1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0)


def _potential_mixed_diagonal(phi, potential_of_quotient, diag_values) -> tuple[np.ndarray, slice]:
    """Mixed second derivative of a potential on the diagonal, using a
    node-aligned 4th-order tensor stencil.

    Keeping the stencil points on grid nodes makes every evaluation exact
    sample arithmetic; an off-node step would inject oscillatory cubic
    interpolation error two orders of magnitude above the truncation term.
    """
    cfg = get_config()
    k = max(1, int(cfg.potential_step_nodes))
    g = phi.grid
    step = k * g.h
    x = g.points()
    pv = _phi_samples(phi)
    core = slice(2 * k, g.n - 2 * k)
    idx = np.arange(g.n)[core]
    acc = np.zeros(idx.shape[0])
    for a, wa in zip(_D1_OFFSETS, _D1_WEIGHTS):
        for b, wb in zip(_D1_OFFSETS, _D1_WEIGHTS):
            ja = idx + a * k
            jb = idx + b * k
            if a == b:
                V = diag_values[ja]
            else:
                V = potential_of_quotient((pv[ja] - pv[jb]) / (x[ja] - x[jb]))
            acc += wa * wb * V
    return acc / step ** 2, core


def schwarzian_via_potential(phi) -> tuple[np.ndarray, slice]:
    """Definitional route 6 d^2 V / dy dz on the diagonal; returns the field
    on the interior nodes it is defined on."""
    u = _log_slope(phi)
    mixed, core = _potential_mixed_diagonal(phi, np.log, u.values)
    return 6.0 * mixed, core


def lp_schwarzian(phi, p: float) -> SchwarzField:
    """S_p{phi} = (3/(2p) (phi''/phi')^2 + S{phi}) phi'^(1/p)."""
    p = check_exponent(p, allow_inf=False)
    u = _log_slope(phi)
    up = grids.derivative_edge(u, 1)  # phi''/phi'
    upp = grids.derivative_edge(u, 2)
    s = upp.values - 0.5 * up.values ** 2
    dphi = np.exp(u.values)
    out = (1.5 / p * up.values ** 2 + s) * dphi ** (1.0 / p)
    return SchwarzField(u.with_values(out))


def lp_schwarzian_via_potential(phi, p: float) -> tuple[np.ndarray, slice]:
    """Cross-check route 6 d^2 V_p / dy dz on the diagonal."""
    p = check_exponent(p, allow_inf=False)
    diag = diff_line.phi_p(phi, p) if not isinstance(phi, diff_line.ExtendedLineDiffeo) \
        else SampledFunction(phi.grid, p * (phi.dphi().values ** (1.0 / p) - 1.0))
    mixed, core = _potential_mixed_diagonal(
        phi, lambda q: p * (q ** (1.0 / p) - 1.0), diag.values
    )
    return 6.0 * mixed, core


def _interior(grid, margin: int = 6) -> slice:
    return slice(margin, grid.n - margin)


def schwarzian_chain_residual(phi, psi: diff_line.LineDiffeo) -> float:
    """sup | S{phi o psi} - (S{phi} o psi psi'^2 + S{psi}) | over interior."""
    comp = diff_line.compose(phi, psi) if not isinstance(phi, diff_line.ExtendedLineDiffeo) \
        else diff_line.ExtendedLineDiffeo(phi.a, phi.b, diff_line.compose(phi.core, psi))
    lhs = schwarzian(comp).s.values
    s_phi = schwarzian(phi).s
    s_psi = schwarzian(psi).s
    psi_vals = psi.phi_values()
    dpsi = psi.dphi().values
    rhs = grids.interp_at(s_phi, psi_vals) * dpsi ** 2 + s_psi.values
    cut = _interior(psi.grid)
    return float(np.max(np.abs(lhs[cut] - rhs[cut])))


def lp_schwarzian_chain_residual(phi: diff_line.LineDiffeo, psi: diff_line.LineDiffeo,
                                 p: float) -> float:
    """sup-norm residual of the Lp chain rule
    S_p{phi o psi} = S_p{phi} o psi psi'^(2+1/p) + S_p{psi} (phi' o psi)^(1/p)
                     + (3/p) (phi'' o psi / phi' o psi) psi'' (phi o psi)'^(1/p)."""
    p = check_exponent(p, allow_inf=False)
    comp = diff_line.compose(phi, psi)
    lhs = lp_schwarzian(comp, p).s.values

    sp_phi = lp_schwarzian(phi, p).s
    sp_psi = lp_schwarzian(psi, p).s.values
    psi_vals = psi.phi_values()
    dpsi = psi.dphi().values
    ddpsi = grids.derivative_edge(psi.fprime, 1).values

    dphi_at = 1.0 + grids.interp_at(phi.fprime, psi_vals)
    u_phi = _log_slope(phi)
    up_at = grids.interp_at(grids.derivative_edge(u_phi, 1), psi_vals)  # (phi''/phi') o psi
    dcomp = dphi_at * dpsi

    rhs = (
        grids.interp_at(sp_phi, psi_vals) * dpsi ** (2.0 + 1.0 / p)
        + sp_psi * dphi_at ** (1.0 / p)
        + 3.0 / p * up_at * ddpsi * dcomp ** (1.0 / p)
    )
    cut = _interior(psi.grid)
    return float(np.max(np.abs(lhs[cut] - rhs[cut])))


def bers_map(phi) -> SchwarzField:
    """The real Bers chart phi -> S{phi}, with the necessary image
    diagnostic int S dx <= 0 enforced up to quadrature tolerance."""
    field = schwarzian(phi)
    total = grids.integrate(field.s)
    if total > _BERS_INTEGRAL_TOL:
        raise ImageViolation(f"int S dx = {total:.3e} > 0 is impossible for this class")
    return field


def schwarzian_preimage(u: SampledFunction) -> diff_line.LineDiffeo:
    """Given a potential u (not an arbitrary Schwarz field), build the
    diffeomorphism whose log-slope chart equals u'' - u'^2/2, that is
    x + int_-inf^x (e^(u'' - u'^2/2) - 1)."""
    up = grids.derivative_edge(u, 1)
    upp = grids.derivative_edge(u, 2)
    s = upp - 0.5 * up * up
    return diff_line.phi_p_inverse(s, math.inf)


def kernel_direction(phi, c0: float, c1: float) -> SampledFunction:
    """Truncated realization of the formal Bers-kernel direction
    c0 int e^u + c1; a smooth window confines it to the grid so it is an
    admissible (but no longer exactly annihilating) variation."""
    u = _log_slope(phi)
    grown = grids.cumulative_integral(u.with_values(np.exp(u.values)))
    x = phi.grid.points()
    L = phi.grid.half_width
    window = np.exp(-((x / (0.55 * L)) ** 8))
    return u.with_values((c0 * grown.values + c1) * window)


def bers_directional_derivative(phi, delta: SampledFunction, step: float = 1e-5) -> float:
    """Central finite-difference directional derivative of the Bers chart
    in potential coordinates; sup-norm of the response field."""
    u = _log_slope(phi)

    def beta(vals):
        f = u.with_values(vals)
        fp = grids.derivative_edge(f, 1)
        fpp = grids.derivative_edge(f, 2)
        return fpp.values - 0.5 * fp.values ** 2

    hi = beta(u.values + step * delta.values)
    lo = beta(u.values - step * delta.values)
    return float(np.max(np.abs((hi - lo) / (2.0 * step))))


@dataclass(frozen=True)
class DynamicsReport:
    min_tangent: float
    sign: int
    s_sup: float
    s_inf: float


def dynamics_tangent_check(phi: diff_line.LineDiffeo, n: int, m: int) -> DynamicsReport:
    """Iterated-preimage tangent bound from one-dimensional dynamics.

    Builds the preimage of S{phi^m} through the log-slope chart, composes
    it with itself n times and reports the minimal tangent together with
    the sign of S{phi} on its dominant support region.
    """
    cfg = get_config()
    if not (1 <= n <= cfg.dynamics_max_power and 1 <= m <= cfg.dynamics_max_power):
        raise ValueError(f"composition powers limited to {cfg.dynamics_max_power}")
    s_vals = schwarzian(phi).s.values
    smax = np.max(np.abs(s_vals))
    if smax < 1e-14:
        return DynamicsReport(1.0, 0, float(s_vals.max()), float(s_vals.min()))
    support = np.abs(s_vals) >= cfg.dynamics_support_frac * smax
    signs = np.sign(s_vals[support])
    if signs.max() > 0 and signs.min() < 0:
        raise MixedSign("Schwarzian changes sign on its dominant support region")
    sign = int(signs[0])

    power = phi
    for _ in range(m - 1):
        power = diff_line.compose(power, phi)
    xi = schwarzian_preimage(_log_slope(power))
    iterated = xi
    for _ in range(n - 1):
        iterated = diff_line.compose(iterated, xi)
    min_tangent = float(np.min(iterated.dphi().values))
    return DynamicsReport(min_tangent, sign, float(s_vals.max()), float(s_vals.min()))
