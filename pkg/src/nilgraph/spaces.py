"""Homogeneous 3-space parameters (base curvature kappa, bundle curvature tau)."""

from __future__ import annotations

from dataclasses import dataclass


class UnsupportedSpaceError(ValueError):
    """Metric operations are implemented only for (kappa, tau) in {(0, 1/2), (-1, 0)}."""


@dataclass(frozen=True)
class SpaceParams:
    """Constants selecting the ambient homogeneous space.

    kappa is the curvature of the base surface of the Riemannian fibration,
    tau the bundle curvature.  kappa != 4 tau^2 is required (4-dimensional
    isometry group); metric operations additionally accept only the
    Heisenberg space (0, 1/2) and the product H^2 x R (-1, 0).
    """

    kappa: float
    tau: float

    def __post_init__(self):
        if self.kappa == 4.0 * self.tau * self.tau:
            raise ValueError(f"kappa = 4 tau^2 = {self.kappa} is not a 4-dimensional-isometry-group space")

    @property
    def is_nil3(self) -> bool:
        return self.kappa == 0.0 and self.tau == 0.5

    @property
    def is_h2r(self) -> bool:
        return self.kappa == -1.0 and self.tau == 0.0

    def require_supported(self) -> None:
        if not (self.is_nil3 or self.is_h2r):
            raise UnsupportedSpaceError(
                f"(kappa, tau) = ({self.kappa}, {self.tau}); supported: (0, 0.5) and (-1, 0)"
            )


NIL3 = SpaceParams(kappa=0.0, tau=0.5)
H2R = SpaceParams(kappa=-1.0, tau=0.0)
