"""Surface patches and their fundamental data {lambda, u, H, p, A}.

Two parameterizations are supported:

* graph patches in the Heisenberg space: positions (x, y, f(x,y)) on a
  Cartesian grid; data is computed from the vertical-graph quantities
  alpha = f_x + y/2, beta = f_y - x/2, W^2 = 1 + alpha^2 + beta^2.
  In graph coordinates the scale making the conformal-coordinate
  identities (4|A|^2/lambda = 1 - u^2, projection eigenvalues
  {lambda, lambda u^2}) hold verbatim is lambda = W^2, the determinant
  of the induced metric; the Hopf coefficient p is parameter-dependent
  and only computed for conformal patches.

* conformal patches: in the Heisenberg space via the orthonormal frame
  E1 = dx - (y/2) dz, E2 = dy + (x/2) dz, E3 = dz and the connection
  coefficients of the left-invariant metric; in H^2 x R via the flat
  Minkowski 4-space containing the hyperboloid factor.

Heisenberg frame conventions: a tangent vector with coordinate components
(v1, v2, v3) at (x1, x2, x3) has frame components (v1, v2, theta(v)) with
theta(v) = v3 + (x2 v1 - x1 v2)/2; the metric is Euclidean on frame
components, and the vertical Killing field is E3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import fd
from .minkowski import mink_inner
from .spaces import NIL3, SpaceParams

TAU_NIL3 = 0.5


class DegenerateMetricError(ValueError):
    pass


@dataclass
class FundamentalData:
    """Pointwise surface data: conformal factor, angle function, mean
    curvature, Hopf coefficient (conformal patches only), and the vertical
    component A of the complex tangent."""

    lam: np.ndarray
    u: np.ndarray
    H: np.ndarray
    A: np.ndarray
    p: Optional[np.ndarray] = None

    def c4_residual(self) -> np.ndarray:
        """|4|A|^2/lambda - (1 - u^2)| pointwise."""
        return np.abs(4.0 * np.abs(self.A) ** 2 / self.lam - (1.0 - self.u**2))


@dataclass
class SurfacePatch:
    """Grid immersion into a supported homogeneous space.

    kind 'graph': positions[..., 2] = f over the (x, y) mesh; kind
    'conformal': positions are ambient coordinates over a conformal
    parameter grid (3 columns for the Heisenberg space, 4 = hyperboloid
    point + height for H^2 x R).
    """

    space: SpaceParams
    kind: str
    x: np.ndarray
    y: np.ndarray
    positions: np.ndarray
    source: Optional[object] = None  # analytic graph providing exact derivatives

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        self.positions = np.asarray(self.positions, dtype=float)
        if self.kind not in ("graph", "conformal"):
            raise ValueError(f"unknown patch kind {self.kind!r}")
        if self.x.size < 2 or self.y.size < 2 or self.h <= 0:
            raise ValueError("grid spacing must be positive")
        if self.positions.shape[:2] != (self.y.size, self.x.size):
            raise ValueError("positions shape does not match the grid")
        d = np.diff(self.positions, axis=1)
        if d.size and np.min(np.sum(d * d, axis=-1)) == 0.0:
            raise ValueError("adjacent samples coincide; patch is not immersed at grid scale")

    @property
    def h(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def f(self) -> np.ndarray:
        if self.kind != "graph":
            raise ValueError("f is only defined for graph patches")
        return self.positions[..., 2]


def graph_patch(x, y, fvals, space: SpaceParams = NIL3, source=None) -> SurfacePatch:
    X, Y = np.meshgrid(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    pos = np.stack([X, Y, np.asarray(fvals, dtype=float)], axis=-1)
    return SurfacePatch(space=space, kind="graph", x=x, y=y, positions=pos, source=source)


def conformal_patch(x, y, positions, space: SpaceParams) -> SurfacePatch:
    return SurfacePatch(space=space, kind="conformal", x=x, y=y, positions=positions)


# Heisenberg frame machinery


def nil3_frame_components(P: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Frame components of coordinate vectors V at positions P (shape (...,3))."""
    w = V[..., 2] + 0.5 * (P[..., 1] * V[..., 0] - P[..., 0] * V[..., 1])
    return np.stack([V[..., 0], V[..., 1], w], axis=-1)


def nil3_gamma(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Connection correction Gamma(a, v) = v^i nabla_a E_i in frame components."""
    t = TAU_NIL3
    g1 = t * (v[..., 1] * a[..., 2] + v[..., 2] * a[..., 1])
    g2 = -t * (v[..., 0] * a[..., 2] + v[..., 2] * a[..., 0])
    g3 = t * (v[..., 1] * a[..., 0] - v[..., 0] * a[..., 1])
    return np.stack([g1, g2, g3], axis=-1)


def _dot(u, v):
    return np.sum(u * v, axis=-1)


def _graph_quantities(patch: SurfacePatch):
    X, Y = np.meshgrid(patch.x, patch.y)
    src = patch.source
    if src is not None:
        fx = src.fx(X, Y)
        fy = src.fy(X, Y)
    else:
        fx = fd.dx(patch.f, patch.h)
        fy = fd.dy(patch.f, patch.h)
    alpha = fx + 0.5 * Y
    beta = fy - 0.5 * X
    W2 = 1.0 + alpha**2 + beta**2
    return X, Y, alpha, beta, W2


def _nil3_conformal_data(patch: SurfacePatch):
    h = patch.h
    P = patch.positions
    Xx = np.stack([fd.dx(P[..., k], h) for k in range(3)], axis=-1)
    Xy = np.stack([fd.dy(P[..., k], h) for k in range(3)], axis=-1)
    ax = nil3_frame_components(P, Xx)
    ay = nil3_frame_components(P, Xy)

    nu = np.cross(ax, ay)
    n2 = _dot(nu, nu)
    if np.min(n2) <= 1e-28 * np.max(_dot(ax, ax) * _dot(ay, ay)):
        raise DegenerateMetricError("induced metric is degenerate on the grid")
    eta = nu / np.sqrt(n2)[..., None]
    if np.mean(eta[..., 2]) < 0:
        eta = -eta  # canonical orientation: angle function positive

    lam = 0.5 * (_dot(ax, ax) + _dot(ay, ay))
    u = eta[..., 2]
    A = 0.5 * (ax[..., 2] - 1j * ay[..., 2])

    # frame-component fields differentiate like scalars; the ambient
    # covariant derivative adds the connection correction
    dax_x = np.stack([fd.dx(ax[..., k], h) for k in range(3)], axis=-1)
    day_y = np.stack([fd.dy(ay[..., k], h) for k in range(3)], axis=-1)
    deta_x = np.stack([fd.dx(eta[..., k], h) for k in range(3)], axis=-1)
    deta_y = np.stack([fd.dy(eta[..., k], h) for k in range(3)], axis=-1)

    cov_xx = dax_x + nil3_gamma(ax, ax)
    cov_yy = day_y + nil3_gamma(ay, ay)
    cov_eta_x = deta_x + nil3_gamma(ax, eta)
    cov_eta_y = deta_y + nil3_gamma(ay, eta)

    Xz = 0.5 * (ax - 1j * ay)
    cov_eta_z = 0.5 * (cov_eta_x - 1j * cov_eta_y)
    p = -_dot(Xz, cov_eta_z)
    H = 2.0 / lam * _dot(0.25 * (cov_xx + cov_yy), eta)
    return FundamentalData(lam=lam, u=u, H=H, A=A, p=p)


# H^2 x R machinery (hyperboloid factor in Lorentz 3-space, flat height)

H2R_SIGNS = np.array([1.0, 1.0, -1.0, 1.0])


def h2r_inner(u4, v4):
    return np.sum(u4 * v4 * H2R_SIGNS, axis=-1)


def _det3(A, B, C):
    return (
        A[..., 0] * (B[..., 1] * C[..., 2] - B[..., 2] * C[..., 1])
        - A[..., 1] * (B[..., 0] * C[..., 2] - B[..., 2] * C[..., 0])
        + A[..., 2] * (B[..., 0] * C[..., 1] - B[..., 1] * C[..., 0])
    )


def h2r_normal(psi: np.ndarray, t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
    """Unit normal of a surface in H^2 x R, oriented with positive height part.

    psi = (N, h) with N on the hyperboloid; t1, t2 tangent 4-vectors.  The
    normal is the metric dual of the 4-form contraction with (N,0), t1, t2,
    which is automatically tangent to H^2 x R and orthogonal to t1, t2.
    """
    A = np.concatenate([psi[..., :3], np.zeros_like(psi[..., :1])], axis=-1)
    cols = [0, 1, 2, 3]
    n = np.empty_like(psi)
    sign = 1.0
    for mu in cols:
        keep = [c for c in cols if c != mu]
        n[..., mu] = sign * _det3(A[..., keep], t1[..., keep], t2[..., keep])
        sign = -sign
    eta = n * H2R_SIGNS
    nn = h2r_inner(eta, eta)
    if np.min(nn) <= 0:
        raise DegenerateMetricError("degenerate tangent plane in H^2 x R")
    eta = eta / np.sqrt(nn)[..., None]
    if np.mean(eta[..., 3]) < 0:
        eta = -eta
    return eta


def _h2r_conformal_data(patch: SurfacePatch):
    h = patch.h
    P = patch.positions  # (..., 4) = (N1, N2, N3, height)
    tx = np.stack([fd.dx(P[..., k], h) for k in range(4)], axis=-1)
    ty = np.stack([fd.dy(P[..., k], h) for k in range(4)], axis=-1)
    eta = h2r_normal(P, tx, ty)

    lam = 0.5 * (h2r_inner(tx, tx) + h2r_inner(ty, ty))
    if np.min(lam) <= 0:
        raise DegenerateMetricError("induced metric is degenerate")
    u = eta[..., 3]
    A = 0.5 * (tx[..., 3] - 1j * ty[..., 3])  # = h_z

    pxx = np.stack([fd.dxx(P[..., k], h) for k in range(4)], axis=-1)
    pyy = np.stack([fd.dyy(P[..., k], h) for k in range(4)], axis=-1)
    pxy = np.stack([fd.dxy(P[..., k], h) for k in range(4)], axis=-1)
    psi_zz = 0.25 * (pxx - pyy) - 0.5j * pxy
    psi_zzbar = 0.25 * (pxx + pyy)
    # the curvature correction of the hyperboloid factor is proportional to
    # (N, 0), which eta annihilates, so flat second derivatives suffice
    p = h2r_inner(psi_zz, eta.astype(complex))
    H = 2.0 / lam * h2r_inner(psi_zzbar, eta)
    return FundamentalData(lam=lam, u=u, H=H, A=A, p=p)


def fundamental_data(patch: SurfacePatch) -> FundamentalData:
    """{lambda, u, H, p, A} of a patch; p only for conformal parameterizations."""
    patch.space.require_supported()
    if patch.kind == "graph":
        if not patch.space.is_nil3:
            raise ValueError("graph patches are implemented in the Heisenberg space only")
        _, _, alpha, beta, W2 = _graph_quantities(patch)
        W = np.sqrt(W2)
        return FundamentalData(
            lam=W2,
            u=1.0 / W,
            H=mean_curvature(patch),
            A=0.5 * (alpha - 1j * beta),
            p=None,
        )
    if patch.space.is_nil3:
        return _nil3_conformal_data(patch)
    return _h2r_conformal_data(patch)


def mean_curvature(patch: SurfacePatch) -> np.ndarray:
    """Mean curvature field with the canonical (upward) orientation."""
    patch.space.require_supported()
    if patch.kind == "graph":
        X, Y, alpha, beta, W2 = _graph_quantities(patch)
        src = patch.source
        if src is not None:
            fxx = src.fxx(X, Y)
            fxy = src.fxy(X, Y)
            fyy = src.fyy(X, Y)
        else:
            fxx = fd.dxx(patch.f, patch.h)
            fxy = fd.dxy(patch.f, patch.h)
            fyy = fd.dyy(patch.f, patch.h)
        num = (1.0 + beta**2) * fxx - 2.0 * alpha * beta * fxy + (1.0 + alpha**2) * fyy
        return num / (2.0 * W2 ** 1.5)
    return fundamental_data(patch).H


def graph_projection_metric(patch: SurfacePatch):
    """Induced metric g and true projection metric g_F of a graph patch,
    as 2x2 coefficient fields (for the sandwich u^2 g <= g_F <= g)."""
    if patch.kind != "graph":
        raise ValueError("projection metric in graph coordinates needs a graph patch")
    _, _, alpha, beta, _ = _graph_quantities(patch)
    g = (1.0 + alpha**2, alpha * beta, 1.0 + beta**2)
    ones = np.ones_like(alpha)
    gF = (ones, np.zeros_like(alpha), ones)  # vertical projection is the identity
    return g, gF
