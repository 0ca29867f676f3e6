"""
Metric quantities of domains: boundary distance r(z, Omega), circumscribed
radius R(z, Omega), diameter, boundary and interior sampling.

All extremal quantities are multi-start numerical estimates: every returned
boundary point is certified feasible (|rho| <= boundary_tol), so distances
are upper bounds for the true r(z, Omega) and radii are lower bounds for the
true R(z, Omega). No global optimality is claimed.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from scipy.optimize import minimize
from scipy.spatial.distance import pdist

from ..config import DEFAULT_CONFIG, NumericsConfig
from ..exceptions import ConvergenceError, DomainError
from ..utils import complex_normal, interleave, make_rng, random_phase, spawn_seeds, to_complex, to_real
from ..wpoly import WPolynomial, comparability_constants, project_to_weighted_sphere, scale_point
from .base import BaseDomain, WeightedBall
from .horosphere import HorosphereBall
from .siegel import SiegelModel

logger = logging.getLogger(__name__)


@dataclass
class DistanceEstimate:
    """A numerically estimated extremal distance and where it is attained."""

    value: float
    point: np.ndarray
    seeds: int
    converged: int
    spread: float
    on_boundary: bool = False
    analytic_bound: Optional[float] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "value": self.value,
            "point": interleave(self.point),
            "seeds": self.seeds,
            "converged": self.converged,
            "spread": self.spread,
            "label": "numerical estimate",
        }
        if self.on_boundary:
            data["warning"] = "point on the boundary"
        if self.analytic_bound is not None:
            data["analytic_bound"] = self.analytic_bound
        data.update(self.extra)
        return data


def _require_weighted(domain: BaseDomain) -> WeightedBall:
    if not isinstance(domain, WeightedBall):
        raise DomainError(f"{type(domain).__name__} is unbounded; metric quantities need a bounded domain")
    return domain


def _nelder_mead(objective, x0: np.ndarray, config: NumericsConfig):
    return minimize(objective, x0, method="Nelder-Mead", options={
        "maxiter": config.max_iterations * x0.size,
        "xatol": config.xatol,
        "fatol": config.fatol,
    })


def _residual(domain: BaseDomain, w: np.ndarray) -> float:
    return float(abs(domain.defining_value(w)))


def outer_radius(domain: WeightedBall, config: NumericsConfig = None) -> float:
    c1, _ = comparability_constants(domain.poly, config)
    return domain.outer_radius(c1)


def ray_boundary_hits(domain: WeightedBall, z: np.ndarray, directions: np.ndarray,
                      config: NumericsConfig = None) -> np.ndarray:
    """
    Shoot rays z + t d from an interior point and bisect to the boundary.

    Args:
        domain: Bounded domain
        z: Interior point
        directions: Unit complex directions, shape (k, n)
        config: Numerical settings

    Returns:
        Boundary points, one per direction, retracted exactly onto rho = 0
    """
    config = config or DEFAULT_CONFIG
    reach = outer_radius(domain, config) + float(np.linalg.norm(z - domain.center))
    lo = np.zeros(len(directions))
    hi = np.full(len(directions), 1.01 * reach + 1e-9)
    for _ in range(config.bisection_steps):
        mid = 0.5 * (lo + hi)
        inside = domain.defining_value(z + mid[:, None] * directions) < 0
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    hits = z + (0.5 * (lo + hi))[:, None] * directions
    return domain.retract(hits - domain.center)


def _axis_directions(n: int) -> np.ndarray:
    eye = np.eye(n, dtype=complex)
    return np.concatenate([eye, 1j * eye])


def boundary_distance(domain: BaseDomain, z, config: NumericsConfig = None, seed: int = None) -> DistanceEstimate:
    """
    Estimate r(z, Omega) = sup{r : B(z; r) in Omega}.

    Rays in the 2n real axis directions plus random directions seed a
    Nelder-Mead search over the weighted boundary parameterization.

    Args:
        domain: Bounded weighted-ball domain
        z: Interior point
        config: Numerical settings
        seed: Seed for the random directions (defaults to config.seed)

    Returns:
        DistanceEstimate whose point is the closest boundary point found
    """
    config = config or DEFAULT_CONFIG
    domain = _require_weighted(domain)
    z = domain.check_point(z)
    rho = float(domain.defining_value(z))
    if abs(rho) <= config.boundary_tol:
        logger.warning("boundary_distance: point %s is on the boundary", z)
        return DistanceEstimate(0.0, z.copy(), 0, 0, 0.0, on_boundary=True)
    if rho > 0:
        raise DomainError(f"point lies outside the domain (rho = {rho:.3e})")

    rng = make_rng(config.seed if seed is None else seed)
    random_dirs = complex_normal(rng, (config.distance_random_directions, domain.n))
    random_dirs /= np.linalg.norm(random_dirs, axis=1, keepdims=True)
    directions = np.concatenate([_axis_directions(domain.n), random_dirs])
    hits = ray_boundary_hits(domain, z, directions, config)
    hit_dists = np.linalg.norm(hits - z, axis=1)

    best = int(np.argmin(hit_dists))
    best_value, best_point = float(hit_dists[best]), hits[best]

    def objective(x):
        u = to_complex(x)
        if not np.any(u):
            return np.inf
        w = domain.retract(u)
        return float(np.sum(np.abs(w - z) ** 2))

    converged = 0
    local_values = []
    starts = np.argsort(hit_dists)[:config.distance_refine_starts]
    for idx in starts:
        res = _nelder_mead(objective, to_real(hits[idx] - domain.center), config)
        converged += bool(res.success)
        w = domain.retract(to_complex(res.x))
        if _residual(domain, w) > config.boundary_tol:
            logger.debug("boundary_distance: discarded infeasible candidate")
            continue
        value = float(np.linalg.norm(w - z))
        local_values.append(value)
        if value < best_value:
            best_value, best_point = value, w

    if converged == 0:
        raise ConvergenceError(f"boundary distance search did not converge from {len(starts)} seeds")
    spread = float(max(local_values) - min(local_values)) if local_values else 0.0
    return DistanceEstimate(best_value, best_point, len(directions), converged, spread)


def circumscribed_radius(domain: BaseDomain, z, config: NumericsConfig = None, seed: int = None) -> DistanceEstimate:
    """
    Estimate R(z, Omega) = inf{R : B(z; R) contains Omega}.

    The maximum of |w - z| over the closure is attained on the boundary; it
    is cross-checked against the analytic bound |z - c| + outer radius.

    Args:
        domain: Bounded weighted-ball domain (Siegel models are rejected)
        z: Any point
        config: Numerical settings
        seed: Seed for boundary samples

    Returns:
        DistanceEstimate whose point is the farthest boundary point found
    """
    config = config or DEFAULT_CONFIG
    if isinstance(domain, SiegelModel) or not domain.bounded:
        raise DomainError("circumscribed radius is infinite for an unbounded domain")
    domain = _require_weighted(domain)
    z = domain.check_point(z)

    samples = sample_boundary(domain, config.radius_samples, config.seed if seed is None else seed)
    samples = np.concatenate([samples, ray_boundary_hits(domain, domain.center, _axis_directions(domain.n), config)])
    dists = np.linalg.norm(samples - z, axis=1)
    best = int(np.argmax(dists))
    best_value, best_point = float(dists[best]), samples[best]

    def objective(x):
        u = to_complex(x)
        if not np.any(u):
            return np.inf
        return -float(np.sum(np.abs(domain.retract(u) - z) ** 2))

    converged = 0
    local_values = []
    starts = np.argsort(-dists)[:config.radius_refine_starts]
    for idx in starts:
        res = _nelder_mead(objective, to_real(samples[idx] - domain.center), config)
        converged += bool(res.success)
        w = domain.retract(to_complex(res.x))
        if _residual(domain, w) > config.boundary_tol:
            continue
        value = float(np.linalg.norm(w - z))
        local_values.append(value)
        if value > best_value:
            best_value, best_point = value, w

    if converged == 0:
        raise ConvergenceError(f"circumscribed radius search did not converge from {len(starts)} seeds")
    analytic = float(np.linalg.norm(z - domain.center)) + outer_radius(domain, config)
    if best_value > analytic * (1 + 1e-9):
        logger.warning("circumscribed radius %.6g exceeds analytic bound %.6g", best_value, analytic)
    spread = float(max(local_values) - min(local_values)) if local_values else 0.0
    return DistanceEstimate(best_value, best_point, len(samples), converged, spread, analytic_bound=analytic)


def diameter(domain: BaseDomain, config: NumericsConfig = None, seed: int = None) -> DistanceEstimate:
    """
    Estimate the diameter of a bounded domain.

    The farthest pairs among boundary samples are refined jointly over two
    boundary parameterizations.

    Returns:
        DistanceEstimate; point holds one endpoint, extra["partner"] the other
    """
    config = config or DEFAULT_CONFIG
    domain = _require_weighted(domain)
    samples = sample_boundary(domain, config.diameter_samples, config.seed if seed is None else seed)
    real_samples = to_real(samples)
    pair_dists = pdist(real_samples)
    rows, cols = np.triu_indices(len(samples), 1)
    order = np.argsort(-pair_dists)[:config.diameter_refine_starts]

    k = int(order[0])
    best_value = float(pair_dists[k])
    best_pair = (samples[rows[k]], samples[cols[k]])
    n = domain.n

    def objective(x):
        u, v = to_complex(x[:2 * n]), to_complex(x[2 * n:])
        if not np.any(u) or not np.any(v):
            return np.inf
        return -float(np.sum(np.abs(domain.retract(u) - domain.retract(v)) ** 2))

    converged = 0
    local_values = []
    for idx in order:
        x0 = np.concatenate([to_real(samples[rows[idx]] - domain.center),
                             to_real(samples[cols[idx]] - domain.center)])
        res = _nelder_mead(objective, x0, config)
        converged += bool(res.success)
        a, b = domain.retract(to_complex(res.x[:2 * n])), domain.retract(to_complex(res.x[2 * n:]))
        value = float(np.linalg.norm(a - b))
        local_values.append(value)
        if value > best_value:
            best_value, best_pair = value, (a, b)

    if converged == 0:
        raise ConvergenceError("diameter search did not converge")
    spread = float(max(local_values) - min(local_values)) if local_values else 0.0
    return DistanceEstimate(best_value, best_pair[0], len(samples), converged, spread,
                            extra={"partner": interleave(best_pair[1])})


def sample_boundary(domain: BaseDomain, count: int, seed: int = 0) -> np.ndarray:
    """
    Deterministic boundary samples.

    z' is drawn on a weighted ray with P(z')/gamma <= kappa, then |z_n - beta|
    is solved from the defining function and given a random phase. Siegel
    models get z' Gaussian and Re z_n = P(z')/(2r) exactly.

    Args:
        domain: Weighted-ball domain or Siegel model
        count: Number of points
        seed: Stream seed

    Returns:
        Array of shape (count, n)
    """
    if count <= 0:
        return np.zeros((0, domain.n), dtype=complex)
    rng = make_rng(seed)
    if isinstance(domain, SiegelModel):
        zp = complex_normal(rng, (count, domain.n - 1)) * 0.5
        zn = domain.poly.evaluate(zp) / (2.0 * domain.r) + 1j * rng.normal(0.0, 1.0, count)
        return np.concatenate([zp, zn[:, None]], axis=1)
    domain = _require_weighted(domain)
    sig = domain.signature
    w = project_to_weighted_sphere(sig, complex_normal(rng, (count, sig.dim)))
    p_w = domain.poly.evaluate(w)
    s = (1.0 - rng.uniform(0.0, 1.0, count)) * domain.gamma * domain.kappa / p_w
    zp = scale_point(sig, s, w)
    radial = np.sqrt(np.maximum(domain.kappa - domain.poly.evaluate(zp) / domain.gamma, 0.0) / domain.alpha)
    zn = domain.beta + radial * random_phase(rng, count)
    return np.concatenate([zp, zn[:, None]], axis=1)


def _displaced_boundary(domain: BaseDomain, count: int, seed, low: float, high: float) -> np.ndarray:
    boundary_seed, factor_seed = spawn_seeds(seed, 2)
    boundary = sample_boundary(domain, count, boundary_seed)
    if count <= 0:
        return boundary
    rng = make_rng(factor_seed)
    if isinstance(domain, SiegelModel):
        # Re z_n moves by a log-normal margin, inward when the factor range is below 1
        sign = 1.0 if high <= 1.0 else -1.0
        boundary[:, -1] += sign * np.exp(rng.normal(-1.0, 1.0, count))
        return boundary
    factor = rng.uniform(low, high, count)
    return domain.center + domain.weighted_scale(boundary - domain.center, factor)


def sample_interior(domain: BaseDomain, count: int, seed: int = 0) -> np.ndarray:
    """
    Deterministic interior samples.

    Weighted balls: boundary samples pulled toward the center by a weighted
    dilation with factor in (0, 1). Siegel models: Re z_n above P(z')/(2r)
    by a log-normal margin.
    """
    return _displaced_boundary(domain, count, seed, 0.02, 0.98)


def sample_exterior(domain: BaseDomain, count: int, seed: int = 0) -> np.ndarray:
    """Deterministic samples outside the closure (weighted factor in (1.05, 2))."""
    return _displaced_boundary(domain, count, seed, 1.05, 2.0)


def family_covers(poly: WPolynomial, lam: float, r: float, points) -> bool:
    """
    Test K in Lambda_lambda(D(r)) for a finite K in E^r.

    Raises:
        DomainError: if some point of K is not in E^r
    """
    siegel = SiegelModel(poly, r)
    points = siegel.check_point(points)
    if not np.all(siegel.contains(points)):
        raise DomainError("family_covers expects points of the Siegel model E^r")
    return bool(np.all(HorosphereBall(poly, r, lam).contains(points)))


def sampled_set_distance(domain: BaseDomain, points, config: NumericsConfig = None,
                         seed: int = None) -> List[DistanceEstimate]:
    """boundary_distance for every point of a sampled set, seeds spawned per point."""
    config = config or DEFAULT_CONFIG
    children = spawn_seeds(config.seed if seed is None else seed, len(points))
    return [boundary_distance(domain, p, config, seed=child) for p, child in zip(points, children)]
