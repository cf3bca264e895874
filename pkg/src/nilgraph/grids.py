"""Uniform conformal grids over rectangles and disks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GridSpec:
    """Sampling of a rectangle [x0,x1]x[y0,y1] or of a disk |z| < rho < 1.

    Disk domains are embedded in their bounding box [-rho, rho]^2; nodes
    outside the circle are inactive.  Spacing must be uniform and equal in
    x and y (the grid doubles as a conformal parameter grid).
    """

    kind: str  # 'rect' | 'disk'
    x0: float
    x1: float
    y0: float
    y1: float
    nx: int
    ny: int
    rho: float = 0.0

    def __post_init__(self):
        if self.kind not in ("rect", "disk"):
            raise ValueError(f"unknown grid kind {self.kind!r}")
        if self.nx < 17 or self.ny < 17:
            raise ValueError(f"need at least 17 samples per axis, got {self.nx}x{self.ny}")
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError("empty domain")
        hx = (self.x1 - self.x0) / (self.nx - 1)
        hy = (self.y1 - self.y0) / (self.ny - 1)
        if abs(hx - hy) > 1e-12 * max(hx, hy):
            raise ValueError(f"spacing must be equal in x and y (hx={hx}, hy={hy})")
        if self.kind == "disk" and not (0.0 < self.rho < 1.0):
            raise ValueError(f"disk radius must be in (0, 1), got {self.rho}")

    @classmethod
    def rect(cls, x0, x1, y0, y1, nx, ny=None) -> "GridSpec":
        return cls("rect", x0, x1, y0, y1, nx, ny if ny is not None else nx)

    @classmethod
    def disk(cls, rho, n) -> "GridSpec":
        return cls("disk", -rho, rho, -rho, rho, n, n, rho=rho)

    @property
    def h(self) -> float:
        return (self.x1 - self.x0) / (self.nx - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x0, self.x1, self.nx)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(self.y0, self.y1, self.ny)

    def meshgrid(self):
        return np.meshgrid(self.x, self.y)

    @property
    def center_index(self):
        """(iy, ix) of the node closest to the domain center."""
        return self.ny // 2, self.nx // 2

    def active_mask(self) -> np.ndarray:
        """Solver unknowns: rectangle interior, or nodes strictly inside the circle."""
        if self.kind == "rect":
            m = np.zeros((self.ny, self.nx), dtype=bool)
            m[1:-1, 1:-1] = True
            return m
        X, Y = self.meshgrid()
        return X**2 + Y**2 < self.rho**2

    def valid_mask(self) -> np.ndarray:
        """Nodes carrying field values (active plus the Dirichlet ring)."""
        if self.kind == "rect":
            return np.ones((self.ny, self.nx), dtype=bool)
        a = self.active_mask()
        return a | ring_mask(a)

    def inscribed_square(self):
        """Index slices of the largest centered axis-aligned square sub-grid.

        For disks this is the square inscribed in the circle (side rho*sqrt(2));
        downstream surface operations run on this all-valid rectangular window.
        For rectangles it is the whole grid.
        """
        if self.kind == "rect":
            return slice(0, self.ny), slice(0, self.nx)
        half = self.rho / np.sqrt(2.0)
        ix = np.flatnonzero(np.abs(self.x) <= half + 1e-12)
        iy = np.flatnonzero(np.abs(self.y) <= half + 1e-12)
        return slice(iy[0], iy[-1] + 1), slice(ix[0], ix[-1] + 1)

    def parse_key(self) -> str:
        if self.kind == "rect":
            return f"rect:{self.x0!r},{self.x1!r},{self.y0!r},{self.y1!r},{self.nx}"
        return f"disk:{self.rho!r},{self.nx}"


def ring_mask(active: np.ndarray, reach: int = 1) -> np.ndarray:
    """Inactive nodes within `reach` axis steps of an active node."""
    ring = np.zeros_like(active)
    for d in range(1, reach + 1):
        ring[d:, :] |= active[:-d, :]
        ring[:-d, :] |= active[d:, :]
        ring[:, d:] |= active[:, :-d]
        ring[:, :-d] |= active[:, d:]
    return ring & ~active


def parse_gridspec(text: str) -> GridSpec:
    """CLI grid grammar: rect:x0,x1,y0,y1,n  |  disk:rho,n."""
    kind, _, body = text.partition(":")
    parts = body.split(",")
    try:
        if kind == "rect":
            if len(parts) != 5:
                raise ValueError("rect takes x0,x1,y0,y1,n")
            x0, x1, y0, y1 = map(float, parts[:4])
            n = int(parts[4])
            return GridSpec.rect(x0, x1, y0, y1, n)
        if kind == "disk":
            if len(parts) != 2:
                raise ValueError("disk takes rho,n")
            return GridSpec.disk(float(parts[0]), int(parts[1]))
    except ValueError as exc:
        raise ValueError(f"bad grid spec {text!r}: {exc}") from None
    raise ValueError(f"unknown grid kind {kind!r}")
