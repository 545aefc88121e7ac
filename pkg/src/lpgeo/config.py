"""Single record of numerical tolerances and floors.

Every operation reads these values instead of hardcoding its own, so a test
or a CLI run can tighten or loosen the whole library in one place.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class NumericalConfig:
    # boundary decay for W^{inf,1}-type line functions
    decay_tol: float = 1e-10
    # per-node bisection tolerance for monotone inversion
    bisect_tol: float = 1e-12
    # relative tolerance of the Luxemburg norm root-find
    luxemburg_rtol: float = 1e-12
    # mask floor for |w|^(p-2) factors with p < 2
    mask_floor: float = 1e-6
    # positivity floor C for Eulerian stretch rates in geodesic residuals
    positivity_floor: float = 1e-3
    # |y-z| below which the Schwarz potential switches to its diagonal limit
    diag_switch: float = 1e-6
    # mixed-derivative stencil step for potential routes, in grid spacings
    potential_step_nodes: int = 1
    # parameter step for mixed finite differences of the group cocycle
    cocycle_fd_step: float = 1e-2
    # spectral closedness residual bound for symplectic candidates
    closedness_tol: float = 1e-8
    # pointwise Pfaffian lower bound for nondegeneracy
    pfaffian_floor: float = 1e-6
    # verified pushforward residual of the 1-d transport map
    moser_residual_tol: float = 1e-6
    # |S| >= frac * max|S| defines the dominant-sign support region
    dynamics_support_frac: float = 0.6
    # largest admissible composition power in the dynamics check
    dynamics_max_power: int = 8
    # probability mass and zero-mean tolerances
    mass_tol: float = 1e-10
    mean_tol: float = 1e-10
    # location-scale generator admission tolerances
    generator_mass_tol: float = 1e-8
    generator_symmetry_tol: float = 1e-10
    # number of log-spaced abscissae for Young-function spot checks
    young_check_points: int = 64
    # largest admissible finite exponent
    max_finite_p: float = 1e6

    def replace(self, **kwargs) -> "NumericalConfig":
        return dataclasses.replace(self, **kwargs)


_config = NumericalConfig()


def get_config() -> NumericalConfig:
    return _config


def set_config(cfg: NumericalConfig) -> None:
    global _config
    _config = cfg


def check_exponent(p: float, *, allow_inf: bool = True, min_p: float = 1.0) -> float:
    """Validate an exponent; math.inf encodes the p -> infinity case."""
    cfg = get_config()
    if math.isinf(p):
        if not allow_inf:
            raise ValueError("p = infinity is not admissible here")
        return p
    if not (min_p <= p <= cfg.max_finite_p):
        raise ValueError(f"finite exponent must lie in [{min_p}, {cfg.max_finite_p}], got {p}")
    return float(p)
