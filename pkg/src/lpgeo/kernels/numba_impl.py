"""numba-jitted interpolation kernels; arithmetic mirrors numpy_impl exactly."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _interp_periodic_scalar(values, q, period):
    n = values.shape[0]
    h = period / n
    s = (q % period) / h
    j = int(np.floor(s))
    t = s - j
    j = j % n
    vm = values[(j - 1) % n]
    v0 = values[j]
    v1 = values[(j + 1) % n]
    v2 = values[(j + 2) % n]
    wm = -t * (t - 1.0) * (t - 2.0) / 6.0
    w0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0
    w1 = -(t + 1.0) * t * (t - 2.0) / 2.0
    w2 = (t + 1.0) * t * (t - 1.0) / 6.0
    return wm * vm + w0 * v0 + w1 * v1 + w2 * v2


@njit(cache=True)
def _interp_line_scalar(x0, h, values, q):
    n = values.shape[0]
    s = (q - x0) / h
    j = int(np.floor(s))
    if j < 1:
        j = 1
    elif j > n - 3:
        j = n - 3
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


@njit(cache=True)
def interp_periodic(values, queries, period):
    out = np.empty(queries.shape[0])
    for i in range(queries.shape[0]):
        out[i] = _interp_periodic_scalar(values, queries[i], period)
    return out


@njit(cache=True)
def interp_line(x0, h, values, queries):
    out = np.empty(queries.shape[0])
    for i in range(queries.shape[0]):
        out[i] = _interp_line_scalar(x0, h, values, queries[i])
    return out


@njit(cache=True)
def _interp_periodic6_scalar(values, q, period):
    n = values.shape[0]
    h = period / n
    s = (q % period) / h
    j = int(np.floor(s))
    t = s - j
    j = j % n
    out = 0.0
    for m in range(-2, 4):
        w = 1.0
        for k in range(-2, 4):
            if k != m:
                w *= (t - k) / (m - k)
        out += w * values[(j + m) % n]
    return out


@njit(cache=True)
def _interp_line6_scalar(x0, h, values, q):
    n = values.shape[0]
    s = (q - x0) / h
    j = int(np.floor(s))
    if j < 2:
        j = 2
    elif j > n - 4:
        j = n - 4
    t = s - j
    out = 0.0
    for m in range(-2, 4):
        w = 1.0
        for k in range(-2, 4):
            if k != m:
                w *= (t - k) / (m - k)
        out += w * values[j + m]
    return out


@njit(cache=True)
def interp_periodic6(values, queries, period):
    out = np.empty(queries.shape[0])
    for i in range(queries.shape[0]):
        out[i] = _interp_periodic6_scalar(values, queries[i], period)
    return out


@njit(cache=True)
def interp_line6(x0, h, values, queries):
    out = np.empty(queries.shape[0])
    for i in range(queries.shape[0]):
        out[i] = _interp_line6_scalar(x0, h, values, queries[i])
    return out


@njit(cache=True)
def invert_periodic_lift(u, period, targets, tol, max_iter=200):
    umax = np.max(u)
    umin = np.min(u)
    out = np.empty(targets.shape[0])
    for i in range(targets.shape[0]):
        x = targets[i]
        lo = x - umax
        hi = x - umin
        it = 0
        while (hi - lo) > tol and it < max_iter:
            mid = 0.5 * (lo + hi)
            fmid = mid + _interp_periodic_scalar(u, mid, period)
            if fmid > x:
                hi = mid
            else:
                lo = mid
            it += 1
        out[i] = 0.5 * (lo + hi)
    return out


@njit(cache=True)
def invert_line_map(x0, h, values, targets, tol, max_iter=200):
    n = values.shape[0]
    xend = x0 + (n - 1) * h
    out = np.empty(targets.shape[0])
    for i in range(targets.shape[0]):
        x = targets[i]
        if x < values[0] or x > values[n - 1]:
            out[i] = np.nan
            continue
        lo = x0
        hi = xend
        it = 0
        while (hi - lo) > tol and it < max_iter:
            mid = 0.5 * (lo + hi)
            fmid = _interp_line_scalar(x0, h, values, mid)
            if fmid > x:
                hi = mid
            else:
                lo = mid
            it += 1
        out[i] = 0.5 * (lo + hi)
    return out
