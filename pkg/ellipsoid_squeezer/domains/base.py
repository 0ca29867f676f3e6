"""
Base domain model: a region {z in C^n : rho(z) < 0} generated by a WPolynomial.
"""
from abc import ABC, abstractmethod
from typing import Any, Dict

import numpy as np

from ..utils import as_point
from ..wpoly import WPolynomial, scale_point


class BaseDomain(ABC):
    """Base class for domain models."""

    model = None

    def __init__(self, poly: WPolynomial):
        """
        Initialize the domain.

        Args:
            poly: Polynomial defining the geometry
        """
        self.poly = poly
        self.signature = poly.signature
        self.n = poly.signature.n

    def check_point(self, z) -> np.ndarray:
        return as_point(z, self.n)

    def split(self, z):
        """Return (z', z_n) views of a point or stack of points."""
        z = self.check_point(z)
        return z[..., :-1], z[..., -1]

    @abstractmethod
    def defining_value(self, z) -> np.ndarray:
        """
        Evaluate the defining function.

        Args:
            z: Point or stack of points in C^n

        Returns:
            Real value(s), negative exactly inside the domain
        """
        pass

    def contains(self, z):
        return self.defining_value(z) < 0

    @property
    @abstractmethod
    def bounded(self) -> bool:
        pass

    @abstractmethod
    def describe(self) -> Dict[str, Any]:
        """Domain JSON spec fields (model, r, lambda)."""
        pass


class WeightedBall(BaseDomain):
    """
    Region alpha |z_n - beta|^2 + P(z')/gamma < kappa.

    Every such region is star-shaped from its center (0', beta) under the
    weighted dilation, so u -> center + (scale_point(s, u'), sqrt(s) u_n) with
    s = kappa / (alpha |u_n|^2 + P(u')/gamma) retracts any offset u onto the
    boundary exactly.
    """

    def __init__(self, poly: WPolynomial, alpha: float, beta: complex, gamma: float, kappa: float):
        super().__init__(poly)
        self.alpha = float(alpha)
        self.beta = complex(beta)
        self.gamma = float(gamma)
        self.kappa = float(kappa)

    @property
    def bounded(self) -> bool:
        return True

    @property
    def center(self) -> np.ndarray:
        c = np.zeros(self.n, dtype=complex)
        c[-1] = self.beta
        return c

    def offset_form(self, u) -> np.ndarray:
        """alpha |u_n|^2 + P(u')/gamma for an offset u from the center."""
        u = self.check_point(u)
        return self.alpha * np.abs(u[..., -1]) ** 2 + self.poly.evaluate(u[..., :-1]) / self.gamma

    def defining_value(self, z) -> np.ndarray:
        z = self.check_point(z)
        return self.offset_form(z - self.center) - self.kappa

    def weighted_scale(self, u, s) -> np.ndarray:
        """Weighted dilation of an offset: (scale_point(s, u'), sqrt(s) u_n)."""
        u = self.check_point(u)
        s = np.asarray(s, dtype=float)
        out = np.empty_like(u)
        out[..., :-1] = scale_point(self.signature, s, u[..., :-1])
        out[..., -1] = np.sqrt(s) * u[..., -1]
        return out

    def retract(self, u) -> np.ndarray:
        """Boundary point on the weighted ray through the offset u."""
        form = self.offset_form(u)
        return self.center + self.weighted_scale(u, self.kappa / form)

    def outer_radius(self, c1: float) -> float:
        """Analytic radius of a ball about the center containing the closure."""
        bound = np.sqrt(self.kappa / self.alpha)
        for mj in self.signature.m:
            bound += (self.gamma * self.kappa / c1) ** (1.0 / (2 * mj))
        return float(bound)
