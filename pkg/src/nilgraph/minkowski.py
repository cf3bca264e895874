"""Lorentz-Minkowski 3-space linear algebra and hyperbolic-plane models.

Vectors are numpy arrays with the Lorentz index last; the metric signature
is (+, +, -) with the third component timelike.  The hyperbolic plane is
the upper sheet {<x,x> = -1, x3 > 0}; Klein and Poincare disk coordinates
are derived from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

MINK_SIGNS = np.array([1.0, 1.0, -1.0])


def mink_inner(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """<u, v> = u1 v1 + u2 v2 - u3 v3, broadcasting over leading axes."""
    u = np.asarray(u)
    v = np.asarray(v)
    return u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] - u[..., 2] * v[..., 2]


def mink_norm2(u: np.ndarray) -> np.ndarray:
    return mink_inner(u, u)


def mink_cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Lorentzian cross product: <mink_cross(u,v), w> = det[u, v, w]."""
    return np.cross(u, v) * MINK_SIGNS


def is_unit_timelike_future(a: np.ndarray, tol: float = 1e-10) -> bool:
    a = np.asarray(a, dtype=float)
    return bool(abs(mink_norm2(a) + 1.0) <= tol and a[..., 2] > 0)


def lorentz_transform_to_e3(a: np.ndarray) -> np.ndarray:
    """Positive Lorentz transform Phi (3x3 matrix) with Phi a = (0, 0, 1).

    a must be unit timelike and future-pointing.  Phi is the boost in the
    plane spanned by a and e3; it preserves orientation, time orientation
    and the Minkowski inner product.
    """
    a = np.asarray(a, dtype=float)
    if not is_unit_timelike_future(a):
        raise ValueError(f"a = {a} is not unit timelike future-pointing")
    r = float(np.hypot(a[0], a[1]))
    if r < 1e-15:
        return np.eye(3)
    b = np.array([a[0] / r, a[1] / r])  # boost direction in the spatial plane
    ch = a[2]               # cosh of the boost parameter
    sh = r                  # sinh, since ch^2 - sh^2 = -<a,a> = 1
    # boost of rapidity -chi along b, written in (b, b_perp, e3) coordinates
    B = np.array([[ch, 0.0, -sh], [0.0, 1.0, 0.0], [-sh, 0.0, ch]])
    R = np.array([[b[0], -b[1], 0.0], [b[1], b[0], 0.0], [0.0, 0.0, 1.0]])
    return R @ B @ R.T


def apply_lorentz(phi: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Apply a 3x3 Lorentz matrix to vectors with the Lorentz index last."""
    return np.asarray(v) @ phi.T


class Model(Enum):
    HYPERBOLOID = "hyperboloid"
    POINCARE = "poincare"
    KLEIN = "klein"


@dataclass(frozen=True)
class HyperbolicPoint:
    """Point of the hyperbolic plane in one of three models.

    coords is a length-3 array; for the disk models the third entry is 0
    and only (x1, x2) carry information (|z| < 1).
    """

    coords: np.ndarray
    model: Model

    def __post_init__(self):
        object.__setattr__(self, "coords", np.asarray(self.coords, dtype=float))
        c = self.coords
        if c.shape != (3,):
            raise ValueError("coords must have shape (3,)")
        if self.model is Model.HYPERBOLOID:
            if abs(mink_norm2(c) + 1.0) > 1e-10 or c[2] <= 0:
                raise ValueError(f"{c} is not on the upper hyperboloid sheet")
        else:
            if c[0] ** 2 + c[1] ** 2 >= 1.0:
                raise ValueError(f"{c[:2]} is not inside the unit disk")


def _to_hyperboloid(p: HyperbolicPoint) -> np.ndarray:
    c = p.coords
    if p.model is Model.HYPERBOLOID:
        return c.copy()
    r2 = c[0] ** 2 + c[1] ** 2
    if p.model is Model.KLEIN:
        x3 = 1.0 / np.sqrt(1.0 - r2)
        return np.array([c[0] * x3, c[1] * x3, x3])
    # Poincare
    s = 1.0 / (1.0 - r2)
    return np.array([2.0 * c[0] * s, 2.0 * c[1] * s, (1.0 + r2) * s])


def model_convert(p: HyperbolicPoint, target: Model) -> HyperbolicPoint:
    """Convert between hyperboloid, Klein and Poincare disk models."""
    x = _to_hyperboloid(p)
    if target is Model.HYPERBOLOID:
        return HyperbolicPoint(x, target)
    if target is Model.KLEIN:
        return HyperbolicPoint(np.array([x[0] / x[2], x[1] / x[2], 0.0]), target)
    return HyperbolicPoint(np.array([x[0] / (1.0 + x[2]), x[1] / (1.0 + x[2]), 0.0]), target)


def hyperboloid_to_klein_grid(N: np.ndarray) -> np.ndarray:
    """Vectorized hyperboloid -> Klein for grids of points (..., 3)."""
    N = np.asarray(N)
    return N[..., :2] / N[..., 2:3]


def hyperboloid_to_poincare_grid(N: np.ndarray) -> np.ndarray:
    N = np.asarray(N)
    return N[..., :2] / (1.0 + N[..., 2:3])
