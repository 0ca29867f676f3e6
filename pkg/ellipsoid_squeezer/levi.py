"""
Levi form of rho on the complex tangent space of an ellipsoid boundary and
the sampled WB-domain check.

For rho(z) = alpha |z_n - beta|^2 + P(z')/gamma - kappa the complex tangent
space at q is {t : sum_j drho/dz_j(q) t_j = 0}. With s = conj(t) this is the
orthogonal complement of g = (dP/dz'/gamma, alpha conj(q_n - beta)), and the
Levi form becomes s^H H s for the complex Hessian H of rho.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from .config import DEFAULT_CONFIG, NumericsConfig
from .domains import WeightedBall
from .exceptions import OffBoundaryError, VanishingGradientError
from .utils import complex_normal, interleave, make_rng, random_phase, spawn_seeds
from .wpoly import project_to_weighted_sphere, scale_point

logger = logging.getLogger(__name__)

STRONG = "strongly-pseudoconvex"
WEAK = "weakly-pseudoconvex"
INDEFINITE = "indefinite"

TREND_FACTORS = (1.0, 3.0, 10.0, 30.0)


def classify(min_eigenvalue: float, tol: float) -> str:
    if min_eigenvalue > tol:
        return STRONG
    if min_eigenvalue >= -tol:
        return WEAK
    return INDEFINITE


def defining_gradient(domain: WeightedBall, z) -> np.ndarray:
    """(drho/dz_1, ..., drho/dz_n), shape (..., n)."""
    zp, zn = domain.split(z)
    g = np.empty(zp.shape[:-1] + (domain.n,), dtype=complex)
    g[..., :-1] = domain.poly.gradient(zp) / domain.gamma
    g[..., -1] = domain.alpha * np.conj(zn - domain.beta)
    return g


def defining_hessian(domain: WeightedBall, z) -> np.ndarray:
    """d^2 rho / dz_j d conj(z_k), shape (..., n, n)."""
    zp, _ = domain.split(z)
    H = np.zeros(zp.shape[:-1] + (domain.n, domain.n), dtype=complex)
    H[..., :-1, :-1] = domain.poly.hessian(zp) / domain.gamma
    H[..., -1, -1] = domain.alpha
    return H


def tangent_basis(g: np.ndarray) -> np.ndarray:
    """
    Orthonormal basis of the orthogonal complement of g.

    Args:
        g: Non-zero vector(s), shape (..., n)

    Returns:
        Columns spanning g-perp, shape (..., n, n-1)
    """
    unit = g / np.linalg.norm(g, axis=-1, keepdims=True)
    Q, _ = np.linalg.qr(unit[..., :, None], mode="complete")
    return Q[..., :, 1:]


def restricted_levi_matrix(domain: WeightedBall, z, basis: Optional[np.ndarray] = None) -> np.ndarray:
    """B^H H B for a tangent basis B (computed from the gradient when omitted)."""
    if basis is None:
        basis = tangent_basis(defining_gradient(domain, z))
    H = defining_hessian(domain, z)
    return np.conj(np.swapaxes(basis, -1, -2)) @ H @ basis


def restricted_levi_eigenvalues(domain: WeightedBall, z) -> np.ndarray:
    """Ascending eigenvalues of the restricted Levi form, batched over leading axes."""
    M = restricted_levi_matrix(domain, z)
    M = 0.5 * (M + np.conj(np.swapaxes(M, -1, -2)))
    return np.linalg.eigvalsh(M)


@dataclass
class LeviReport:
    """Restricted Levi form at one boundary point."""

    point: np.ndarray
    gradient_norm: float
    restricted_eigenvalues: List[float]
    classification: str
    tol: float
    hermitian_residual: float = 0.0

    @property
    def min_eigenvalue(self) -> float:
        return self.restricted_eigenvalues[0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "point": interleave(self.point),
            "gradient_norm": self.gradient_norm,
            "restricted_eigenvalues": self.restricted_eigenvalues,
            "classification": self.classification,
            "tol": self.tol,
            "hermitian_residual": self.hermitian_residual,
        }


def levi_report(domain: WeightedBall, q, tol: float = 1e-8, config: NumericsConfig = None) -> LeviReport:
    """
    Levi form of rho restricted to the complex tangent space at q.

    Args:
        domain: Ellipsoid (or another weighted-ball domain)
        q: Boundary point
        tol: Threshold on the minimum eigenvalue
        config: Numerical settings (boundary and gradient tolerances)

    Returns:
        LeviReport with ascending eigenvalues and a classification
    """
    config = config or DEFAULT_CONFIG
    q = domain.check_point(q)
    rho = float(domain.defining_value(q))
    if abs(rho) > config.boundary_tol:
        raise OffBoundaryError(f"Levi form requested off the boundary (rho = {rho:.3e})",
                               {"point": interleave(q), "rho": rho})
    g = defining_gradient(domain, q)
    gnorm = float(np.linalg.norm(g))
    if gnorm <= config.gradient_tol:
        raise VanishingGradientError(f"gradient of rho vanishes at the boundary point (|g| = {gnorm:.3e})",
                                     {"point": interleave(q), "gradient_norm": gnorm})
    M = restricted_levi_matrix(domain, q)
    herm = float(np.max(np.abs(M - M.conj().T), initial=0.0))
    eigs = np.linalg.eigvalsh(0.5 * (M + M.conj().T))
    return LeviReport(
        point=q,
        gradient_norm=gnorm,
        restricted_eigenvalues=[float(e) for e in eigs],
        classification=classify(float(eigs[0]), tol),
        tol=tol,
        hermitian_residual=herm,
    )


@dataclass
class WBReport:
    """Sampled check of strong pseudoconvexity away from z' = 0'."""

    passed: bool
    tol: float
    min_eigenvalue: Optional[float]
    argmin_point: Optional[np.ndarray]
    samples: int
    exclusion_radius: float
    trend: List[Dict[str, Any]] = field(default_factory=list)
    note: str = "strong pseudoconvexity is certified only at the sampled boundary points"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pass": self.passed,
            "tol": self.tol,
            "min_eigenvalue": self.min_eigenvalue,
            "argmin_point": None if self.argmin_point is None else interleave(self.argmin_point),
            "samples": self.samples,
            "exclusion_radius": self.exclusion_radius,
            "trend": self.trend,
            "note": self.note,
        }


def _boundary_on_shells(domain: WeightedBall, low: float, count: int, seed, shell: bool) -> np.ndarray:
    """
    Boundary points with sigma(z') = s for s drawn in [low, gamma kappa / P(w)],
    or s = low exactly when shell is set; directions that cannot reach low are dropped.
    """
    rng = make_rng(seed)
    sig = domain.signature
    w = project_to_weighted_sphere(sig, complex_normal(rng, (count, sig.dim)))
    top = domain.gamma * domain.kappa / domain.poly.evaluate(w)
    reach = top >= low
    w, top = w[reach], top[reach]
    if shell:
        s = np.full(len(w), low)
    else:
        s = rng.uniform(low, top)
    zp = scale_point(sig, s, w)
    radial = np.sqrt(np.maximum(domain.kappa - domain.poly.evaluate(zp) / domain.gamma, 0.0) / domain.alpha)
    zn = domain.beta + radial * random_phase(rng, len(w))
    return np.concatenate([zp, zn[:, None]], axis=1)


def wb_check(domain: WeightedBall, exclusion_radius: float, sample_count: int, seed: int = 0,
             tol: float = 1e-8, config: NumericsConfig = None) -> WBReport:
    """
    Sample boundary points with sigma(z') >= exclusion_radius and report the
    minimum restricted Levi eigenvalue, plus its trend on the shells
    sigma(z') = radius / k for k in 1, 3, 10, 30.

    Args:
        domain: Ellipsoid domain
        exclusion_radius: Lower bound on sigma(z') of the sampled points
        sample_count: Number of boundary samples
        seed: Sample stream seed
        tol: Pass threshold on the minimum eigenvalue
        config: Numerical settings (trend sample count)

    Returns:
        WBReport; never raises on a failing sample
    """
    config = config or DEFAULT_CONFIG
    main_seed, *trend_seeds = spawn_seeds(seed, 1 + len(TREND_FACTORS))
    points = _boundary_on_shells(domain, exclusion_radius, sample_count, main_seed, shell=False)

    if len(points):
        eigs = restricted_levi_eigenvalues(domain, points)[:, 0]
        k = int(np.argmin(eigs))
        min_eig, argmin = float(eigs[k]), points[k]
    else:
        logger.warning("wb_check: no boundary point has sigma(z') >= %g", exclusion_radius)
        min_eig, argmin = None, None

    trend = []
    for factor, child in zip(TREND_FACTORS, trend_seeds):
        radius = exclusion_radius / factor
        shell = _boundary_on_shells(domain, radius, config.trend_samples, child, shell=True)
        value = float(np.min(restricted_levi_eigenvalues(domain, shell)[:, 0])) if len(shell) else None
        trend.append({"radius": radius, "min_eig": value})

    passed = min_eig is None or min_eig > tol
    logger.debug("wb_check: min eigenvalue %s over %d samples", min_eig, len(points))
    return WBReport(
        passed=passed,
        tol=tol,
        min_eigenvalue=min_eig,
        argmin_point=argmin,
        samples=len(points),
        exclusion_radius=exclusion_radius,
        trend=trend,
    )
