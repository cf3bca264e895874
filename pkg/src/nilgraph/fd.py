"""Finite differences on uniform grids.

All grid fields follow the [iy, ix] layout (y is axis 0, x is axis 1);
trailing axes are value components.  Stencils are 4th order: centered
5-point in the interior, one-sided/offset 5- or 6-point at the edges,
so first derivatives are exact through degree 4 and second derivatives
through degree 5.  Grids with fewer than 5 nodes along an axis fall back
to 2nd-order stencils (minimum 3 nodes).

Complex Wirtinger operators use z = x + iy:
    d/dz    = (d/dx - i d/dy)/2
    d/dzbar = (d/dx + i d/dy)/2
"""

from __future__ import annotations

import numpy as np


def _move(f: np.ndarray, axis: int) -> np.ndarray:
    return np.moveaxis(f, axis, 0)


def d1(f: np.ndarray, h: float, axis: int) -> np.ndarray:
    """First derivative along `axis` with spacing h."""
    g = _move(np.asarray(f), axis)
    n = g.shape[0]
    out = np.empty_like(g, dtype=np.result_type(g.dtype, np.float64))
    if n >= 5:
        out[2:-2] = (g[:-4] - 8 * g[1:-3] + 8 * g[3:-1] - g[4:]) / (12 * h)
        out[0] = (-25 * g[0] + 48 * g[1] - 36 * g[2] + 16 * g[3] - 3 * g[4]) / (12 * h)
        out[1] = (-3 * g[0] - 10 * g[1] + 18 * g[2] - 6 * g[3] + g[4]) / (12 * h)
        out[-2] = (3 * g[-1] + 10 * g[-2] - 18 * g[-3] + 6 * g[-4] - g[-5]) / (12 * h)
        out[-1] = (25 * g[-1] - 48 * g[-2] + 36 * g[-3] - 16 * g[-4] + 3 * g[-5]) / (12 * h)
    elif n >= 3:
        out[1:-1] = (g[2:] - g[:-2]) / (2 * h)
        out[0] = (-3 * g[0] + 4 * g[1] - g[2]) / (2 * h)
        out[-1] = (3 * g[-1] - 4 * g[-2] + g[-3]) / (2 * h)
    else:
        raise ValueError(f"need at least 3 nodes along axis, got {n}")
    return np.moveaxis(out, 0, axis)


def d2(f: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Second derivative along `axis` with spacing h."""
    g = _move(np.asarray(f), axis)
    n = g.shape[0]
    out = np.empty_like(g, dtype=np.result_type(g.dtype, np.float64))
    h2 = h * h
    if n >= 6:
        out[2:-2] = (-g[:-4] + 16 * g[1:-3] - 30 * g[2:-2] + 16 * g[3:-1] - g[4:]) / (12 * h2)
        out[0] = (45 * g[0] - 154 * g[1] + 214 * g[2] - 156 * g[3] + 61 * g[4] - 10 * g[5]) / (12 * h2)
        out[1] = (10 * g[0] - 15 * g[1] - 4 * g[2] + 14 * g[3] - 6 * g[4] + g[5]) / (12 * h2)
        out[-2] = (10 * g[-1] - 15 * g[-2] - 4 * g[-3] + 14 * g[-4] - 6 * g[-5] + g[-6]) / (12 * h2)
        out[-1] = (45 * g[-1] - 154 * g[-2] + 214 * g[-3] - 156 * g[-4] + 61 * g[-5] - 10 * g[-6]) / (12 * h2)
    elif n >= 3:
        out[1:-1] = (g[2:] - 2 * g[1:-1] + g[:-2]) / h2
        out[0] = (g[0] - 2 * g[1] + g[2]) / h2
        out[-1] = (g[-1] - 2 * g[-2] + g[-3]) / h2
    else:
        raise ValueError(f"need at least 3 nodes along axis, got {n}")
    return np.moveaxis(out, 0, axis)


def dx(f, h):
    return d1(f, h, axis=1)


def dy(f, h):
    return d1(f, h, axis=0)


def dxx(f, h):
    return d2(f, h, axis=1)


def dyy(f, h):
    return d2(f, h, axis=0)


def dxy(f, h):
    return d1(d1(f, h, axis=1), h, axis=0)


def dz(f, h):
    """Wirtinger d/dz of a grid field (complex output)."""
    return 0.5 * (dx(f, h) - 1j * dy(f, h))


def dzbar(f, h):
    """Wirtinger d/dzbar of a grid field (complex output)."""
    return 0.5 * (dx(f, h) + 1j * dy(f, h))


def dzz(f, h):
    return 0.25 * (dxx(f, h) - dyy(f, h)) - 0.5j * dxy(f, h)


def dzzbar(f, h):
    """d^2/dz dzbar = Laplacian/4."""
    return 0.25 * (dxx(f, h) + dyy(f, h))


def interior_slice(margin: int):
    """Index tuple selecting the grid interior, `margin` nodes off each edge."""
    s = slice(margin, -margin if margin else None)
    return (s, s)
