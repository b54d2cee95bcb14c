"""Second-order finite-difference stencils on uniform grids.

Interior nodes use centered stencils.  At the ends the stencils are either
wrapped (periodic) or one-sided of the same order.
"""
import numpy as np


def _arr(f):
    # keeps extended precision inputs in extended precision
    f = np.asarray(f)
    return f.astype(np.result_type(f.dtype, np.float64), copy=False)


def d1(f, h, axis=0, periodic=False):
    f = np.moveaxis(_arr(f), axis, 0)
    if periodic:
        out = (np.roll(f, -1, axis=0) - np.roll(f, 1, axis=0)) / (2 * h)
    else:
        if f.shape[0] < 3:
            raise ValueError("need at least 3 nodes for a second-order derivative")
        out = np.empty_like(f)
        out[1:-1] = (f[2:] - f[:-2]) / (2 * h)
        out[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h)
        out[-1] = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2 * h)
    return np.moveaxis(out, 0, axis)


def d2(f, h, axis=0, periodic=False):
    f = np.moveaxis(_arr(f), axis, 0)
    if periodic:
        out = (np.roll(f, -1, axis=0) - 2 * f + np.roll(f, 1, axis=0)) / h**2
    else:
        if f.shape[0] < 4:
            raise ValueError("need at least 4 nodes for a one-sided second derivative")
        out = np.empty_like(f)
        out[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / h**2
        out[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / h**2
        out[-1] = (2 * f[-1] - 5 * f[-2] + 4 * f[-3] - f[-4]) / h**2
    return np.moveaxis(out, 0, axis)


def d1_interior(f, h, axis=0):
    """Centered first difference, NaN on the two end nodes of ``axis``.

    Used where a second derivative of the result is taken later: a one-sided
    end value would carry a different error constant and spoil the order.
    """
    f = np.moveaxis(_arr(f), axis, 0)
    out = np.full_like(f, np.nan)
    out[1:-1] = (f[2:] - f[:-2]) / (2 * h)
    return np.moveaxis(out, 0, axis)


def d2_interior(f, h, axis=0):
    f = np.moveaxis(_arr(f), axis, 0)
    out = np.full_like(f, np.nan)
    out[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / h**2
    return np.moveaxis(out, 0, axis)


def _pad_nan(core, n, width):
    out = np.full((n,) + core.shape[1:], np.nan, dtype=core.dtype)
    out[width:n - width] = core
    return out


def _apply4(f, h, axis, periodic, coeffs, power, width):
    f = np.moveaxis(_arr(f), axis, 0)
    n = f.shape[0]
    if periodic:
        out = sum(c * np.roll(f, -k, axis=0) for k, c in coeffs.items())
    else:
        if n <= 2 * width:
            raise ValueError("grid too small for a fourth-order stencil")
        out = _pad_nan(
            sum(c * f[width + k:n - width + k] for k, c in coeffs.items()), n, width
        )
    return np.moveaxis(out / h**power, 0, axis)


def d1_4(f, h, axis=0, periodic=False):
    """Fourth-order centered first derivative (NaN where it does not fit)."""
    c = {-2: 1 / 12, -1: -8 / 12, 1: 8 / 12, 2: -1 / 12}
    return _apply4(f, h, axis, periodic, c, 1, 2)


def d2_4(f, h, axis=0, periodic=False):
    c = {-2: -1 / 12, -1: 16 / 12, 0: -30 / 12, 1: 16 / 12, 2: -1 / 12}
    return _apply4(f, h, axis, periodic, c, 2, 2)


def d3_4(f, h, axis=0, periodic=False):
    c = {-3: 1 / 8, -2: -1.0, -1: 13 / 8, 1: -13 / 8, 2: 1.0, 3: -1 / 8}
    return _apply4(f, h, axis, periodic, c, 3, 3)
