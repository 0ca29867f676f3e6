"""
Horosphere balls D(r), their dilations Lambda_lambda(D(r)), the normalized
images psi(Lambda_lambda(D(r))) and the cone regions Gamma(r', c).
"""
from typing import Any, Dict

import numpy as np

from ..exceptions import DomainError, UnbalancedPolynomialError
from ..utils import as_point
from ..wpoly import WPolynomial
from .base import WeightedBall


class HorosphereBall(WeightedBall):
    """
    Lambda_lambda(D(r)) = {lambda |z_n|^2 + P(z') < 2 r Re(z_n)}.

    lambda = 1 is the horosphere ball D(r) = {|z_n - r|^2 + P(z') < r^2}.
    """

    model = "horosphere"

    def __init__(self, poly: WPolynomial, r: float, lam: float = 1.0):
        if not 0 < r <= 1:
            raise DomainError(f"horosphere radius r must lie in (0, 1], got {r}")
        if not lam > 0:
            raise DomainError(f"dilation scale lambda must be positive, got {lam}")
        super().__init__(poly, alpha=lam, beta=r / lam, gamma=1.0, kappa=r * r / lam)
        self.r = float(r)
        self.lam = float(lam)

    def defining_value(self, z) -> np.ndarray:
        zp, zn = self.split(z)
        return self.lam * np.abs(zn) ** 2 + self.poly.evaluate(zp) - 2.0 * self.r * zn.real

    def unit_defining_value(self, z) -> np.ndarray:
        """|z_n - r|^2 + P(z') - r^2, the lambda = 1 form before expansion."""
        zp, zn = self.split(z)
        return np.abs(zn - self.r) ** 2 + self.poly.evaluate(zp) - self.r ** 2

    def describe(self) -> Dict[str, Any]:
        return {"model": self.model, "r": self.r, "lambda": self.lam}

    def __repr__(self):
        return f"HorosphereBall(r={self.r}, lambda={self.lam}, {self.poly!r})"


class NormalizedHorosphere(WeightedBall):
    """
    psi(Lambda_lambda(D(r))) on the ellipsoid side.

    For balanced P, v lies in the image iff
    (r + lambda/2) |v_n - beta|^2 + P(v') < 2 r^2 / (2 r + lambda)
    with beta = lambda / (2 r + lambda); it tends to D^r as lambda -> 0.
    """

    model = "normalized-horosphere"

    def __init__(self, poly: WPolynomial, r: float, lam: float):
        if not poly.balanced:
            raise UnbalancedPolynomialError("normalized horosphere needs a balanced polynomial")
        if not 0 < r <= 1 or not lam > 0:
            raise DomainError(f"need 0 < r <= 1 and lambda > 0, got r={r}, lambda={lam}")
        super().__init__(
            poly,
            alpha=r + lam / 2.0,
            beta=lam / (2.0 * r + lam),
            gamma=1.0,
            kappa=2.0 * r * r / (2.0 * r + lam),
        )
        self.r = float(r)
        self.lam = float(lam)
        self.source = HorosphereBall(poly, r, lam)

    def pulled_back_value(self, v) -> np.ndarray:
        """
        rho_{Lambda_lambda D(r)}(psi(v)); +inf where psi is undefined (Re(1 + v_n) <= 0).

        Agrees in sign with defining_value, since psi is an involution.
        """
        from ..holomaps import CayleyMap

        v = self.check_point(v)
        flat = v.reshape(-1, self.n)
        valid = (1.0 + flat[:, -1]).real > 0
        out = np.full(flat.shape[0], np.inf)
        if np.any(valid):
            out[valid] = self.source.defining_value(CayleyMap(self.poly).apply(flat[valid]))
        return out.reshape(v.shape[:-1])

    def describe(self) -> Dict[str, Any]:
        return {"model": self.model, "r": self.r, "lambda": self.lam}


class ConeRegion:
    """Gamma(r', c) = D(r') intersected with {|Im z_n| <= c |Re z_n|} (closed cone)."""

    def __init__(self, poly: WPolynomial, rp: float, c: float):
        if not c > 0:
            raise DomainError(f"cone aperture c must be positive, got {c}")
        self.poly = poly
        self.rp = float(rp)
        self.c = float(c)
        self.ball = HorosphereBall(poly, rp)

    def in_cone(self, z) -> np.ndarray:
        z = as_point(z, self.ball.n)
        zn = z[..., -1]
        return np.abs(zn.imag) <= self.c * np.abs(zn.real)

    def contains(self, z) -> np.ndarray:
        return self.ball.contains(z) & self.in_cone(z)

    def describe(self) -> Dict[str, Any]:
        return {"model": "cone", "rp": self.rp, "c": self.c}
