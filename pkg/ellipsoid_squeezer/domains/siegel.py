"""
Unbounded Siegel-type model E_P and its rescaled copies E^r.
"""
from typing import Any, Dict

import numpy as np

from ..exceptions import DomainError
from ..wpoly import WPolynomial
from .base import BaseDomain


class SiegelModel(BaseDomain):
    """E^r = {P(z')/r < 2 Re(z_n)}."""

    model = "siegel"

    def __init__(self, poly: WPolynomial, r: float = 1.0):
        super().__init__(poly)
        if not 0 < r <= 1:
            raise DomainError(f"Siegel model scale r must lie in (0, 1], got {r}")
        self.r = float(r)

    @property
    def bounded(self) -> bool:
        return False

    def defining_value(self, z) -> np.ndarray:
        zp, zn = self.split(z)
        return self.poly.evaluate(zp) / self.r - 2.0 * zn.real

    def describe(self) -> Dict[str, Any]:
        return {"model": self.model, "r": self.r}

    def __repr__(self):
        return f"SiegelModel(r={self.r}, {self.poly!r})"
