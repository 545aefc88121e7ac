"""Pure-numpy reference implementations of the hot interpolation kernels.

The numba backend mirrors these routines operation-for-operation so both
paths produce bitwise-identical results; keep the arithmetic in sync.
"""

from __future__ import annotations

import numpy as np


def interp_periodic(values: np.ndarray, queries: np.ndarray, period: float) -> np.ndarray:
    """Cubic Lagrange interpolation of periodic samples on a uniform grid."""
    n = values.shape[0]
    h = period / n
    s = np.mod(queries, period) / h
    j = np.floor(s).astype(np.int64)
    t = s - j
    j = np.mod(j, n)
    vm = values[np.mod(j - 1, n)]
    v0 = values[j]
    v1 = values[np.mod(j + 1, n)]
    v2 = values[np.mod(j + 2, n)]
    wm = -t * (t - 1.0) * (t - 2.0) / 6.0
    w0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0
    w1 = -(t + 1.0) * t * (t - 2.0) / 2.0
    w2 = (t + 1.0) * t * (t - 1.0) / 6.0
    return wm * vm + w0 * v0 + w1 * v1 + w2 * v2


def interp_line(x0: float, h: float, values: np.ndarray, queries: np.ndarray) -> np.ndarray:
    """Cubic Lagrange interpolation on a uniform line grid.

    Queries outside [x0, x0 + (n-1) h] are evaluated with the outermost
    4-point stencil, i.e. extrapolated with the edge cubic.
    """
    n = values.shape[0]
    s = (queries - x0) / h
    j = np.floor(s).astype(np.int64)
    j = np.clip(j, 1, n - 3)
    t = s - j
    vm = values[j - 1]
    v0 = values[j]
    v1 = values[j + 1]
    v2 = values[j + 2]
    wm = -t * (t - 1.0) * (t - 2.0) / 6.0
    w0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0
    w1 = -(t + 1.0) * t * (t - 2.0) / 2.0
    w2 = (t + 1.0) * t * (t - 1.0) / 6.0
    return wm * vm + w0 * v0 + w1 * v1 + w2 * v2


_OFF6 = np.array([-2, -1, 0, 1, 2, 3])


def _weights6(t: np.ndarray) -> list[np.ndarray]:
    """Quintic Lagrange weights for offsets -2..3 at parameter t in [0, 1).

    The (t - k)/(m - k) grouping matches the numba kernel so both backends
    agree bitwise.
    """
    ws = []
    for m in _OFF6:
        w = np.ones_like(t)
        for k in _OFF6:
            if k != m:
                w = w * ((t - k) / (m - k))
        ws.append(w)
    return ws


def interp_periodic6(values: np.ndarray, queries: np.ndarray, period: float) -> np.ndarray:
    """6-point quintic Lagrange interpolation of periodic samples."""
    n = values.shape[0]
    h = period / n
    s = np.mod(queries, period) / h
    j = np.floor(s).astype(np.int64)
    t = s - j
    j = np.mod(j, n)
    out = np.zeros_like(t)
    for off, w in zip(_OFF6, _weights6(t)):
        out += w * values[np.mod(j + off, n)]
    return out


def interp_line6(x0: float, h: float, values: np.ndarray, queries: np.ndarray) -> np.ndarray:
    """6-point quintic Lagrange interpolation on a uniform line grid."""
    n = values.shape[0]
    s = (queries - x0) / h
    j = np.floor(s).astype(np.int64)
    j = np.clip(j, 2, n - 4)
    t = s - j
    out = np.zeros_like(t)
    for off, w in zip(_OFF6, _weights6(t)):
        out += w * values[j + off]
    return out


def invert_periodic_lift(
    u: np.ndarray, period: float, targets: np.ndarray, tol: float, max_iter: int = 200
) -> np.ndarray:
    """Solve y + u(y) = target per node for a degree-1 monotone lift."""
    lo = targets - np.max(u)
    hi = targets - np.min(u)
    it = 0
    active = (hi - lo) > tol
    while active.any() and it < max_iter:
        mid = 0.5 * (lo + hi)
        fmid = mid + interp_periodic(u, mid, period)
        go_left = fmid > targets
        hi = np.where(active & go_left, mid, hi)
        lo = np.where(active & ~go_left, mid, lo)
        active = (hi - lo) > tol
        it += 1
    return 0.5 * (lo + hi)


def invert_line_map(
    x0: float, h: float, values: np.ndarray, targets: np.ndarray, tol: float, max_iter: int = 200
) -> np.ndarray:
    """Solve map(y) = target per node by bisection; NaN marks no bracket."""
    n = values.shape[0]
    xend = x0 + (n - 1) * h
    lo = np.full_like(targets, x0)
    hi = np.full_like(targets, xend)
    bad = (targets < values[0]) | (targets > values[-1])
    it = 0
    active = (hi - lo) > tol
    while active.any() and it < max_iter:
        mid = 0.5 * (lo + hi)
        fmid = interp_line(x0, h, values, mid)
        go_left = fmid > targets
        hi = np.where(active & go_left, mid, hi)
        lo = np.where(active & ~go_left, mid, lo)
        active = (hi - lo) > tol
        it += 1
    out = 0.5 * (lo + hi)
    out[bad] = np.nan
    return out
