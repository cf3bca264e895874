"""Holomorphic quadratic differentials Q dz^2 on C or the unit disk.

Coefficients are closed-form (constant, polynomial, or pole-free rational)
so that Q and Q' are available analytically everywhere in the pipeline.
Recovered coefficient fields from surfaces are plain grids, tested for
holomorphicity with dbar_residual.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fd


class QSpecError(ValueError):
    """Malformed quadratic-differential specification."""


def _polyval(coeffs, z):
    out = np.zeros_like(np.asarray(z, dtype=complex))
    for c in reversed(coeffs):
        out = out * z + c
    return out


def _polyder(coeffs):
    return tuple(k * c for k, c in enumerate(coeffs))[1:] or (0j,)


@dataclass(frozen=True)
class QuadDifferential:
    """Closed-form coefficient Q(z); domain 'plane' or 'disk'.

    Polynomial coefficients are ascending.  Rational forms are num/den with
    den pole-free on the declared domain.  Q identically zero is rejected on
    the plane (only the disk admits it).
    """

    domain: str
    num: tuple = (0j,)
    den: tuple = field(default=(1.0 + 0j,))

    def __post_init__(self):
        if self.domain not in ("plane", "disk"):
            raise QSpecError(f"unknown domain {self.domain!r}")
        num = tuple(complex(c) for c in self.num)
        den = tuple(complex(c) for c in self.den)
        while len(num) > 1 and num[-1] == 0:
            num = num[:-1]
        while len(den) > 1 and den[-1] == 0:
            den = den[:-1]
        if all(c == 0 for c in den):
            raise QSpecError("denominator is identically zero")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        if self.domain == "plane" and self.is_zero:
            raise QSpecError("Q identically zero is only admissible on the disk")
        if len(den) > 1:
            roots = np.roots(list(reversed(den)))
            if self.domain == "plane":
                raise QSpecError("rational Q on the plane must have constant denominator (poles are inevitable otherwise)")
            if roots.size and np.min(np.abs(roots)) <= 1.0:
                raise QSpecError(f"denominator root at |z| = {np.min(np.abs(roots)):.6g} <= 1 lies in the closed disk")

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.num)

    @property
    def is_constant(self) -> bool:
        return len(self.num) == 1 and len(self.den) == 1

    def __call__(self, z):
        return self.evaluate(z)

    def evaluate(self, z) -> np.ndarray:
        """Q(z) on scalars or arrays; exact for polynomials."""
        z = np.asarray(z, dtype=complex)
        self._check_domain(z)
        if len(self.den) == 1:
            return _polyval(self.num, z) / self.den[0]
        return _polyval(self.num, z) / _polyval(self.den, z)

    def derivative(self, z) -> np.ndarray:
        """dQ/dz, analytic."""
        z = np.asarray(z, dtype=complex)
        self._check_domain(z)
        dn = _polyval(_polyder(self.num), z)
        if len(self.den) == 1:
            return dn / self.den[0]
        n = _polyval(self.num, z)
        d = _polyval(self.den, z)
        dd = _polyval(_polyder(self.den), z)
        return (dn * d - n * dd) / (d * d)

    def negated(self) -> "QuadDifferential":
        return QuadDifferential(self.domain, tuple(-c for c in self.num), self.den)

    def _check_domain(self, z):
        if self.domain == "disk" and np.any(np.abs(z) >= 1.0):
            raise ValueError("evaluation point outside the unit disk")


def parse_qspec(spec: str, domain: str) -> QuadDifferential:
    """Parse the CLI mini-grammar.

    const:re,im | poly:c0re,c0im;c1re,c1im;... | rat:<poly>/<poly>
    """

    def poly(text):
        terms = []
        for part in text.split(";"):
            bits = part.split(",")
            if len(bits) != 2:
                raise QSpecError(f"bad coefficient {part!r} (want re,im)")
            try:
                terms.append(complex(float(bits[0]), float(bits[1])))
            except ValueError as exc:
                raise QSpecError(f"bad coefficient {part!r}: {exc}") from None
        return tuple(terms)

    if ":" not in spec:
        raise QSpecError(f"missing kind prefix in {spec!r}")
    kind, _, body = spec.partition(":")
    if kind == "const":
        coeffs = poly(body)
        if len(coeffs) != 1:
            raise QSpecError("const takes exactly one re,im pair")
        return QuadDifferential(domain, coeffs)
    if kind == "poly":
        return QuadDifferential(domain, poly(body))
    if kind == "rat":
        if "/" not in body:
            raise QSpecError("rat needs <poly>/<poly>")
        top, _, bottom = body.partition("/")
        return QuadDifferential(domain, poly(top), poly(bottom))
    raise QSpecError(f"unknown Q kind {kind!r}")


def dbar_derivative(field_grid: np.ndarray, h: float) -> np.ndarray:
    """Discrete d/dzbar of a complex grid field (linear in the field)."""
    field_grid = np.asarray(field_grid)
    if field_grid.ndim != 2 or min(field_grid.shape) < 3:
        raise ValueError(f"grid too small for dbar: shape {field_grid.shape} (need >= 3x3)")
    return fd.dzbar(field_grid, h)


def dbar_residual(field_grid: np.ndarray, h: float) -> np.ndarray:
    """|d field / dzbar| pointwise; zero (to stencil exactness) on holomorphic fields."""
    return np.abs(dbar_derivative(field_grid, h))
