"""
Explicit biholomorphisms between the ellipsoid D_P, the Siegel model E_P and
their dilations, with a sampling harness that checks them numerically.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .domains import BaseDomain, GeneralEllipsoid, SiegelModel
from .domains.metrics import sample_boundary, sample_exterior, sample_interior
from .exceptions import ConvergenceError, DomainError, SpecError, UnbalancedPolynomialError
from .utils import as_point, spawn_seeds
from .wpoly import WeightSignature, WPolynomial, scale_point

logger = logging.getLogger(__name__)

# Inputs with |rho| below this are too close to the boundary for a sign test
SIGN_FILTER = 1e-8
MAP_TOL = 1e-9
SCALE_TOL = 1e-12


class HolomorphicMap(ABC):
    """Base class for the explicit maps; instances are immutable."""

    name = None

    def __init__(self, signature: WeightSignature):
        self.signature = signature
        self.n = signature.n

    def check_point(self, z) -> np.ndarray:
        return as_point(z, self.n)

    def defined(self, z) -> np.ndarray:
        """Mask of points inside the domain of definition."""
        z = self.check_point(z)
        return np.ones(z.shape[:-1], dtype=bool)

    @abstractmethod
    def apply(self, z) -> np.ndarray:
        """
        Image of a point or stack of points.

        Args:
            z: Point(s) in C^n

        Returns:
            Image point(s), same shape
        """
        pass

    def __call__(self, z) -> np.ndarray:
        return self.apply(z)

    @abstractmethod
    def natural_domains(self, poly: WPolynomial) -> Tuple[BaseDomain, BaseDomain]:
        """(source, target) pair the map is a biholomorphism between."""
        pass

    def describe(self) -> Dict[str, Any]:
        return {"map": self.name}


def _require_balanced(poly: WPolynomial, what: str):
    if not poly.balanced:
        raise UnbalancedPolynomialError(
            f"{what} needs a balanced polynomial (wt(K) = wt(L) = 1/2 for every term)"
        )


class IdentityMap(HolomorphicMap):
    name = "identity"

    def __init__(self, poly: WPolynomial):
        super().__init__(poly.signature)

    def apply(self, z) -> np.ndarray:
        return self.check_point(z).copy()

    def natural_domains(self, poly):
        d = GeneralEllipsoid(poly)
        return d, d


class CayleyMap(HolomorphicMap):
    """
    psi(z) = (2^(1/2m_j) (1 + z_n)^(-1/m_j) z_j, (1 - z_n)/(1 + z_n)).

    A biholomorphism D_P -> E_P and its own inverse. Powers use the principal
    branch, which is continuous on Re(1 + z_n) > 0.
    """

    name = "cayley"

    def __init__(self, poly: WPolynomial):
        _require_balanced(poly, "the Cayley map")
        super().__init__(poly.signature)

    def defined(self, z) -> np.ndarray:
        z = self.check_point(z)
        return (1.0 + z[..., -1]).real > 0

    def apply(self, z) -> np.ndarray:
        z = self.check_point(z)
        one_plus = 1.0 + z[..., -1]
        if np.any(one_plus == 0):
            raise DomainError("the Cayley map has a pole at z_n = -1")
        if np.any(one_plus.real <= 0):
            raise DomainError("the Cayley map needs Re(1 + z_n) > 0 for a principal branch")
        exps = self.signature.exponents
        out = np.empty_like(z)
        out[..., :-1] = z[..., :-1] * np.power(2.0, exps) * np.power(one_plus[..., None], -2.0 * exps)
        out[..., -1] = (1.0 - z[..., -1]) / one_plus
        return out

    def natural_domains(self, poly):
        return GeneralEllipsoid(poly), SiegelModel(poly)


class EllipsoidAutomorphism(HolomorphicMap):
    """
    phi_{a,theta}(z) = ((1 - |a|^2)^(1/2m_j) z_j / (1 - conj(a) z_n)^(1/m_j),
                       e^(i theta) (z_n - a) / (1 - conj(a) z_n)).
    """

    name = "automorphism"

    def __init__(self, poly: WPolynomial, a: complex = 0j, theta: float = 0.0):
        _require_balanced(poly, "the ellipsoid automorphism")
        a = complex(a)
        if not abs(a) < 1:
            raise DomainError(f"automorphism parameter needs |a| < 1, got |a| = {abs(a):.6g}")
        super().__init__(poly.signature)
        self.a = a
        self.theta = float(theta)

    def defined(self, z) -> np.ndarray:
        z = self.check_point(z)
        return (1.0 - np.conj(self.a) * z[..., -1]).real > 0

    def apply(self, z) -> np.ndarray:
        z = self.check_point(z)
        denom = 1.0 - np.conj(self.a) * z[..., -1]
        if np.any(denom.real <= 0):
            raise DomainError("automorphism evaluated where Re(1 - conj(a) z_n) <= 0")
        exps = self.signature.exponents
        out = np.empty_like(z)
        out[..., :-1] = (z[..., :-1] * np.power(1.0 - abs(self.a) ** 2, exps)
                         * np.power(denom[..., None], -2.0 * exps))
        out[..., -1] = np.exp(1j * self.theta) * (z[..., -1] - self.a) / denom
        return out

    def natural_domains(self, poly):
        d = GeneralEllipsoid(poly)
        return d, d

    def describe(self):
        return {"map": self.name, "a": [self.a.real, self.a.imag], "theta": self.theta}


class Dilation(HolomorphicMap):
    """Lambda_lambda(z) = (z_j / lambda^(1/2m_j), z_n / lambda)."""

    name = "dilation"

    def __init__(self, signature: WeightSignature, lam: float):
        if not lam > 0:
            raise DomainError(f"dilation scale lambda must be positive, got {lam}")
        super().__init__(signature)
        self.lam = float(lam)

    def apply(self, z) -> np.ndarray:
        z = self.check_point(z)
        out = np.empty_like(z)
        out[..., :-1] = scale_point(self.signature, 1.0 / self.lam, z[..., :-1])
        out[..., -1] = z[..., -1] / self.lam
        return out

    def compose(self, other: "Dilation") -> "Dilation":
        return Dilation(self.signature, self.lam * other.lam)

    def natural_domains(self, poly):
        e = SiegelModel(poly)
        return e, e

    def describe(self):
        return {"map": self.name, "lambda": self.lam}


class NormalizationMap(HolomorphicMap):
    """G_lambda = psi o Lambda_lambda, from the Siegel side into D_P."""

    name = "normalization"

    def __init__(self, poly: WPolynomial, lam: float):
        self.cayley = CayleyMap(poly)
        self.dilation = Dilation(poly.signature, lam)
        super().__init__(poly.signature)
        self.lam = self.dilation.lam

    def defined(self, z) -> np.ndarray:
        return self.cayley.defined(self.dilation.apply(z))

    def apply(self, z) -> np.ndarray:
        return self.cayley.apply(self.dilation.apply(z))

    def natural_domains(self, poly):
        return SiegelModel(poly), GeneralEllipsoid(poly)

    def describe(self):
        return {"map": self.name, "lambda": self.lam}


class BallAutomorphism(HolomorphicMap):
    """
    Moebius automorphism of the unit ball sending a to 0 (and 0 to a):
    phi_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z, a>), s_a = sqrt(1 - |a|^2).

    Only defined when D_P is the Euclidean ball.
    """

    name = "ball-automorphism"

    def __init__(self, poly: WPolynomial, a):
        if not poly.is_euclidean:
            raise DomainError("ball automorphisms need P(z') = sum |z_j|^2")
        super().__init__(poly.signature)
        self.a = self.check_point(a).astype(complex).copy()
        norm2 = float(np.vdot(self.a, self.a).real)
        if not norm2 < 1:
            raise DomainError(f"ball automorphism centre must lie in the unit ball, |a|^2 = {norm2:.6g}")
        self._norm2 = norm2

    def apply(self, z) -> np.ndarray:
        z = self.check_point(z)
        a = self.a
        if self._norm2 == 0:
            return -z
        inner = z @ np.conj(a)
        proj = inner[..., None] * a / self._norm2
        s = np.sqrt(1.0 - self._norm2)
        return (a - proj - s * (z - proj)) / (1.0 - inner)[..., None]

    def natural_domains(self, poly):
        d = GeneralEllipsoid(poly)
        return d, d

    def describe(self):
        return {"map": self.name, "a": [float(x) for c in self.a for x in (c.real, c.imag)]}


MAP_TYPES = {
    'identity': IdentityMap,
    'cayley': CayleyMap,
    'automorphism': EllipsoidAutomorphism,
    'dilation': Dilation,
    'normalization': NormalizationMap,
    'ball-automorphism': BallAutomorphism,
}


def map_from_descriptor(poly: WPolynomial, descriptor: Dict[str, Any]) -> HolomorphicMap:
    """
    Build a map from {"map": ..., "a": [re, im], "theta": ..., "lambda": ...}.

    Raises:
        SpecError: for an unknown map name
    """
    name = descriptor.get("map", "cayley")
    if name not in MAP_TYPES:
        raise SpecError(f"unknown map {name!r}; expected one of {sorted(MAP_TYPES)}")
    lam = descriptor.get("lambda")
    if name in ("dilation", "normalization"):
        lam = 1.0 if lam is None else float(lam)
        if name == "dilation":
            return Dilation(poly.signature, lam)
        return NormalizationMap(poly, lam)
    if name == "automorphism":
        a = descriptor.get("a", [0.0, 0.0])
        return EllipsoidAutomorphism(poly, complex(*a), float(descriptor.get("theta", 0.0)))
    if name == "ball-automorphism":
        a = np.asarray(descriptor.get("a", [0.0] * (2 * poly.signature.n)), dtype=float)
        return BallAutomorphism(poly, a[0::2] + 1j * a[1::2])
    return MAP_TYPES[name](poly)


def orbit_to_slice(poly: WPolynomial, p) -> np.ndarray:
    """
    Move an interior point of D_P into the slice {z_n = 0} by phi_{p_n, 0}.

    Raises:
        DomainError: if |p_n| >= 1
    """
    p = as_point(p, poly.signature.n)
    pn = complex(p[-1])
    if not abs(pn) < 1:
        raise DomainError(f"orbit reduction needs |p_n| < 1, got {abs(pn):.6g}")
    return EllipsoidAutomorphism(poly, pn, 0.0).apply(p)


def solve_normalization_scale(signature: WeightSignature, q) -> float:
    """
    The unique lambda > 0 with ||Lambda_lambda(q)|| = 1.

    lambda -> ||Lambda_lambda(q)|| is strictly decreasing, so a bracket
    [||q||^(2M), ||q||^(1/(2M))] (M = max m_j) is widened until it changes
    sign and the root is polished in log lambda.

    Raises:
        DomainError: for q = 0
        ConvergenceError: if the residual stays above SCALE_TOL
    """
    q = as_point(q, signature.n)
    norm = float(np.linalg.norm(q))
    if norm == 0:
        raise DomainError("normalization scale is undefined at q = 0")

    def dil_norm(log_lam: float) -> float:
        return float(np.linalg.norm(Dilation(signature, np.exp(log_lam)).apply(q))) - 1.0

    big_m = max(signature.m)
    ends = sorted((2 * big_m * np.log(norm), np.log(norm) / (2 * big_m)))
    lo, hi = ends[0] - 1.0, ends[1] + 1.0
    for _ in range(200):
        if dil_norm(lo) > 0 > dil_norm(hi):
            break
        lo, hi = lo - 2.0 * (hi - lo), hi + 2.0 * (hi - lo)
        logger.debug("normalization scale bracket widened to [%g, %g]", lo, hi)
    else:
        raise ConvergenceError("could not bracket the normalization scale")

    log_lam = brentq(dil_norm, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    residual = abs(dil_norm(log_lam))
    if residual > SCALE_TOL:
        raise ConvergenceError(f"normalization scale residual {residual:.3e} exceeds {SCALE_TOL}")
    return float(np.exp(log_lam))


def cayley_identity_residual(poly: WPolynomial, z) -> np.ndarray:
    """
    |2 Re w_n - P(w') - 2(1 - |z_n|^2 - P(z'))/|1 + z_n|^2| with w = psi(z),
    relative to max(1, |1 + z_n|^-2).
    """
    z = as_point(z, poly.signature.n)
    w = CayleyMap(poly).apply(z)
    scale = np.abs(1.0 + z[..., -1]) ** -2
    rhs = 2.0 * (1.0 - np.abs(z[..., -1]) ** 2 - poly.evaluate(z[..., :-1])) * scale
    lhs = 2.0 * w[..., -1].real - poly.evaluate(w[..., :-1])
    return np.abs(lhs - rhs) / np.maximum(1.0, scale)


@dataclass
class MaxViolationReport:
    """Worst-case violations found by sampling a map on its source domain."""

    map: Dict[str, Any]
    samples: int
    filtered: int
    sign_disagreements: int
    max_boundary_residual: float
    max_identity_residual: Optional[float] = None
    tol: float = MAP_TOL
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        ok = self.sign_disagreements == 0 and self.max_boundary_residual <= self.tol
        if self.max_identity_residual is not None:
            ok = ok and self.max_identity_residual <= self.tol
        return ok

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "map": self.map,
            "samples": self.samples,
            "filtered": self.filtered,
            "sign_disagreements": self.sign_disagreements,
            "max_boundary_residual": self.max_boundary_residual,
            "max_identity_residual": self.max_identity_residual,
            "tol": self.tol,
            "pass": self.passed,
        }
        data.update(self.extra)
        return data


def _relative_value(domain: BaseDomain, w: np.ndarray) -> np.ndarray:
    scale = np.maximum(1.0, np.sum(np.abs(w) ** 2, axis=-1))
    return domain.defining_value(w) / scale


def verify_map(hmap: HolomorphicMap, source: BaseDomain, target: BaseDomain,
               sample_count: int = 1000, seed: int = 0) -> MaxViolationReport:
    """
    Sample a map on its source domain and report the worst violations.

    Interior and exterior samples test membership preservation (inputs with
    |rho| <= 1e-8 are filtered out); boundary samples test that the boundary
    lands on the boundary (residual relative to max(1, |w|^2)). For the
    Cayley map from D_P the defining-function identity is checked too.

    Args:
        hmap: Map under test
        source: Domain the samples are drawn from
        target: Domain the images are tested against
        sample_count: Samples per kind (interior, exterior, boundary)
        seed: Seed of the sample streams

    Returns:
        MaxViolationReport (never raises on a violation)
    """
    inner_seed, outer_seed, boundary_seed = spawn_seeds(seed, 3)
    inside = sample_interior(source, sample_count, inner_seed)
    outside = sample_exterior(source, sample_count, outer_seed)
    boundary = sample_boundary(source, sample_count, boundary_seed)

    points = np.concatenate([inside, outside])
    points = points[hmap.defined(points)]
    rho = source.defining_value(points)
    keep = np.abs(rho) > SIGN_FILTER
    points, rho = points[keep], rho[keep]
    image_rho = target.defining_value(hmap.apply(points))
    disagreements = int(np.count_nonzero(np.sign(rho) != np.sign(image_rho)))

    boundary = boundary[hmap.defined(boundary)]
    boundary_residual = float(np.max(np.abs(_relative_value(target, hmap.apply(boundary))), initial=0.0))

    identity_residual = None
    if isinstance(hmap, CayleyMap) and isinstance(source, GeneralEllipsoid) and source.r == 1.0:
        checked = np.concatenate([inside, boundary])
        identity_residual = float(np.max(cayley_identity_residual(source.poly, checked), initial=0.0))

    report = MaxViolationReport(
        map=hmap.describe(),
        samples=3 * sample_count,
        filtered=3 * sample_count - len(points) - len(boundary),
        sign_disagreements=disagreements,
        max_boundary_residual=boundary_residual,
        max_identity_residual=identity_residual,
        extra={"source": source.describe(), "target": target.describe()},
    )
    if not report.passed:
        logger.warning("map %s failed verification: %s", hmap.name, report.to_dict())
    return report
