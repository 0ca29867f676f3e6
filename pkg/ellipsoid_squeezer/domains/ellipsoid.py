"""
General ellipsoid D_P and its rescaled copies D^r.
"""
from typing import Any, Dict

import numpy as np

from ..exceptions import DomainError
from ..wpoly import WPolynomial
from .base import WeightedBall


class GeneralEllipsoid(WeightedBall):
    """D^r = {|z_n|^2 + P(z')/r < 1}; r = 1 gives D_P."""

    model = "ellipsoid"

    def __init__(self, poly: WPolynomial, r: float = 1.0):
        if not 0 < r <= 1:
            raise DomainError(f"ellipsoid scale r must lie in (0, 1], got {r}")
        super().__init__(poly, alpha=1.0, beta=0.0, gamma=r, kappa=1.0)
        self.r = float(r)

    def defining_value(self, z) -> np.ndarray:
        zp, zn = self.split(z)
        return np.abs(zn) ** 2 + self.poly.evaluate(zp) / self.r - 1.0

    def describe(self) -> Dict[str, Any]:
        return {"model": self.model, "r": self.r}

    def __repr__(self):
        return f"GeneralEllipsoid(r={self.r}, {self.poly!r})"
