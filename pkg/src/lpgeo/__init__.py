"""Lp information geometry on densities, diffeomorphism groups of the
line, symplectic forms and Orlicz spaces, with a verification CLI."""

from . import (  # noqa: F401
    cocycles,
    densities,
    diff_line,
    grids,
    hyperbolic,
    orlicz,
    schwarzian,
    symplectic,
)
from .config import NumericalConfig, get_config, set_config  # noqa: F401
from .kernels import backend_name  # noqa: F401

__version__ = "0.1.0"
