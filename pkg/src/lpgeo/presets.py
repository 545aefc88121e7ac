"""Named builtin sample functions for configuration-driven runs.

Functions are specified as {"name": ..., <parameters>} or as a raw
{"values": [...]} array; no expression parser by design.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .grids import GridDescriptor, SampledFunction


def _constant(x, value=1.0):
    return np.full_like(x, float(value))


def _sine(x, frequency=1, amplitude=1.0, phase=0.0, offset=0.0):
    return offset + amplitude * np.sin(2.0 * np.pi * frequency * x + phase)


def _cosine(x, frequency=1, amplitude=1.0, phase=0.0, offset=0.0):
    return offset + amplitude * np.cos(2.0 * np.pi * frequency * x + phase)


def _gaussian_bump(x, centre=0.0, width=1.0, amplitude=1.0):
    return amplitude * np.exp(-(((x - centre) / width) ** 2))


def _smoothed_step(x, centre=0.0, width=1.0, left=0.0, right=1.0):
    return left + (right - left) * 0.5 * (1.0 + np.tanh((x - centre) / width))


BUILTINS = {
    "constant": _constant,
    "sine": _sine,
    "cosine": _cosine,
    "gaussian-bump": _gaussian_bump,
    "smoothed-step": _smoothed_step,
}


def make_function(grid: GridDescriptor, spec: dict) -> SampledFunction:
    if "values" in spec:
        vals = np.asarray(spec["values"], dtype=float)
        if vals.shape != (grid.n,):
            raise ConfigError(
                f"inline sample array has {vals.shape[0]} entries, grid has {grid.n}")
        return SampledFunction(grid, vals)
    name = spec.get("name")
    if name not in BUILTINS:
        raise ConfigError(f"unknown builtin function {name!r}")
    params = {k: v for k, v in spec.items() if k != "name"}
    try:
        values = BUILTINS[name](grid.points(), **params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for builtin {name!r}: {exc}") from exc
    return SampledFunction(grid, values)
