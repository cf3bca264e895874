"""Text serialization of grid fields (format "field-v1").

Layout:
    # field-v1
    domain x0 x1 y0 y1
    shape nx ny
    x y v1 [v2 ...]           (nx*ny rows, row-major with y outermost)

Complex-valued columns are stored as re im pairs by the callers.  Floats
are written with repr (shortest round-trip), so identical data serializes
to identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class FieldFormatError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


@dataclass
class FieldGrid:
    """A rectangular grid with one or more real value columns per node."""

    x: np.ndarray          # (nx,)
    y: np.ndarray          # (ny,)
    values: np.ndarray     # (ny, nx, ncols)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 2:
            v = v[:, :, None]
        self.values = v
        if self.values.shape[:2] != (self.y.size, self.x.size):
            raise ValueError(
                f"values shape {self.values.shape} does not match grid {self.y.size}x{self.x.size}"
            )

    @property
    def ncols(self) -> int:
        return self.values.shape[2]

    @property
    def h(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def domain(self):
        return float(self.x[0]), float(self.x[-1]), float(self.y[0]), float(self.y[-1])

    def column(self, k: int) -> np.ndarray:
        return self.values[:, :, k]

    def complex_column(self, k: int) -> np.ndarray:
        """Columns k, k+1 interpreted as re, im."""
        return self.values[:, :, k] + 1j * self.values[:, :, k + 1]


def write_field(path, grid: FieldGrid) -> None:
    x0, x1, y0, y1 = grid.domain
    lines = ["# field-v1", f"domain {x0!r} {x1!r} {y0!r} {y1!r}", f"shape {grid.x.size} {grid.y.size}"]
    for iy in range(grid.y.size):
        for ix in range(grid.x.size):
            vals = " ".join(repr(float(v)) for v in grid.values[iy, ix])
            lines.append(f"{grid.x[ix]!r} {grid.y[iy]!r} {vals}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_field(path) -> FieldGrid:
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines or lines[0].strip() != "# field-v1":
        raise FieldFormatError("missing '# field-v1' header", line=1)
    if len(lines) < 3:
        raise FieldFormatError("truncated header", line=len(lines))

    parts = lines[1].split()
    if len(parts) != 5 or parts[0] != "domain":
        raise FieldFormatError(f"expected 'domain x0 x1 y0 y1', got {lines[1]!r}", line=2)
    try:
        x0, x1, y0, y1 = map(float, parts[1:])
    except ValueError:
        raise FieldFormatError(f"bad domain numbers in {lines[1]!r}", line=2) from None

    parts = lines[2].split()
    if len(parts) != 3 or parts[0] != "shape":
        raise FieldFormatError(f"expected 'shape nx ny', got {lines[2]!r}", line=3)
    try:
        nx, ny = int(parts[1]), int(parts[2])
    except ValueError:
        raise FieldFormatError(f"bad shape numbers in {lines[2]!r}", line=3) from None
    if nx < 2 or ny < 2:
        raise FieldFormatError(f"degenerate shape {nx}x{ny}", line=3)

    nrows = nx * ny
    data_lines = lines[3:]
    if len(data_lines) < nrows:
        raise FieldFormatError(f"expected {nrows} data rows, found {len(data_lines)}", line=len(lines))

    ncols = None
    values = None
    for r in range(nrows):
        lineno = 4 + r
        cols = data_lines[r].split()
        if len(cols) < 3:
            raise FieldFormatError(f"expected 'x y v1 ...', got {data_lines[r]!r}", line=lineno)
        if ncols is None:
            ncols = len(cols) - 2
            values = np.empty((ny, nx, ncols))
        elif len(cols) - 2 != ncols:
            raise FieldFormatError(f"inconsistent column count ({len(cols) - 2} vs {ncols})", line=lineno)
        try:
            row = [float(c) for c in cols]
        except ValueError as exc:
            raise FieldFormatError(str(exc), line=lineno) from None
        iy, ix = divmod(r, nx)
        values[iy, ix] = row[2:]

    x = np.linspace(x0, x1, nx)
    y = np.linspace(y0, y1, ny)
    return FieldGrid(x=x, y=y, values=values)
