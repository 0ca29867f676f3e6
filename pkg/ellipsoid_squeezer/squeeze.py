"""
Lower bounds for the squeezing function sigma_Omega(z).

Every bound is a ratio r/R of a boundary distance and a circumscribed
radius: sigma_Omega(z) >= r(z, Omega) / R(z, Omega), transported through
biholomorphisms where that improves the ratio. Distances and radii are
multi-start estimates (see domains.metrics); the reports carry the seeds
and tolerances needed to reproduce them.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .config import DEFAULT_CONFIG, NumericsConfig
from .domains import (ConeRegion, GeneralEllipsoid, NormalizedHorosphere, boundary_distance,
                      circumscribed_radius, diameter)
from .domains.metrics import sampled_set_distance
from .exceptions import (ConeMembershipError, ConvergenceError, DomainError, RegimeError,
                         UnbalancedPolynomialError)
from .holomaps import BallAutomorphism, CayleyMap, NormalizationMap, orbit_to_slice, solve_normalization_scale
from .levi import wb_check
from .utils import complex_normal, interleave, make_rng, seed_record, spawn_seeds
from .wpoly import WPolynomial, comparability_constants, project_to_weighted_sphere, scale_point

logger = logging.getLogger(__name__)

METHOD_NAMES = {
    "lemma21": "lemma21",
    "slice": "slice-reduced",
    "extreme": "extreme-point",
}

CASE_RULE = "Case 2 when the last ratio exceeds {threshold:g} and ratios increase over the trailing half"


@dataclass
class SqueezeBoundReport:
    """A lower bound for sigma at one point with the quantities it came from."""

    point: np.ndarray
    bound: float
    method: str
    trace: Dict[str, Any] = field(default_factory=dict)
    numerics: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "point": interleave(self.point),
            "bound": self.bound,
            "method": self.method,
            "trace": self.trace,
            "numerics": self.numerics,
        }


def _numerics(config: NumericsConfig, seed) -> Dict[str, Any]:
    data = config.to_dict()
    data["seed"] = seed_record(seed)
    return data


def _require_interior(domain, z, config: NumericsConfig) -> np.ndarray:
    z = domain.check_point(z)
    rho = float(domain.defining_value(z))
    if rho >= -config.boundary_tol:
        where = "on the boundary" if abs(rho) <= config.boundary_tol else "outside the domain"
        raise DomainError(f"point lies {where} (rho = {rho:.3e}); an interior point is required",
                          {"point": interleave(z), "rho": rho})
    return z


def _ratio(r_value: float, big_r: float) -> float:
    if not big_r > 0:
        raise ConvergenceError("circumscribed radius estimate is not positive")
    return min(1.0, r_value / big_r)


def lemma21_bound(domain: GeneralEllipsoid, z, config: NumericsConfig = None, seed=None) -> SqueezeBoundReport:
    """
    sigma(z) >= r(z, Omega) / R(z, Omega).

    Args:
        domain: Bounded domain
        z: Interior point
        config: Numerical settings
        seed: Stream seed (defaults to config.seed)

    Returns:
        SqueezeBoundReport with r, R and the attaining points in the trace
    """
    config = config or DEFAULT_CONFIG
    seed = config.seed if seed is None else seed
    z = _require_interior(domain, z, config)
    near_seed, far_seed = spawn_seeds(seed, 2)
    near = boundary_distance(domain, z, config, seed=near_seed)
    far = circumscribed_radius(domain, z, config, seed=far_seed)
    trace = {
        "domain": domain.describe(),
        "r": near.value,
        "R": far.value,
        "nearest": near.to_dict(),
        "farthest": far.to_dict(),
    }
    return SqueezeBoundReport(z, _ratio(near.value, far.value), METHOD_NAMES["lemma21"], trace,
                              _numerics(config, seed))


def slice_reduced_bound(domain: GeneralEllipsoid, p, config: NumericsConfig = None, seed=None) -> SqueezeBoundReport:
    """
    Move p into the slice {z_n = 0} by phi_{p_n,0} and bound sigma there.

    sigma is invariant under automorphisms, so the bound at the orbit image
    is a bound at p. When D_P is the Euclidean ball the image is recentred
    to the origin, where r = R.

    Raises:
        UnbalancedPolynomialError: automorphisms need a balanced P
    """
    config = config or DEFAULT_CONFIG
    seed = config.seed if seed is None else seed
    p = _require_interior(domain, p, config)
    image = orbit_to_slice(domain.poly, p)
    stages = [{"stage": "orbit-to-slice", "image": interleave(image)}]
    target = image
    if domain.poly.is_euclidean and domain.r == 1.0:
        target = BallAutomorphism(domain.poly, image).apply(image)
        stages.append({"stage": "ball-recentre", "image": interleave(target)})

    inner = lemma21_bound(domain, target, config, seed)
    trace = dict(inner.trace)
    trace["orbit_image"] = interleave(image)
    trace["stages"] = stages
    return SqueezeBoundReport(p, inner.bound, METHOD_NAMES["slice"], trace, inner.numerics)


def _sample_normalized_slice(poly: WPolynomial, rp: float, c: float, count: int, seed) -> np.ndarray:
    """Points of {||z|| = 1} in the Siegel model E^{r'} and in the cone |Im z_n| <= c Re z_n."""
    rng = make_rng(seed)
    n = poly.signature.n
    accepted = []
    for _ in range(50):
        batch = 64 * max(count, 1)
        modulus = rng.uniform(0.0, 1.0, batch)
        phase = rng.uniform(-np.arctan(c), np.arctan(c), batch)
        zn = modulus * np.exp(1j * phase)
        direction = complex_normal(rng, (batch, n - 1))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        zp = direction * np.sqrt(1.0 - modulus ** 2)[:, None]
        keep = poly.evaluate(zp) / rp < 2.0 * zn.real
        accepted.extend(np.concatenate([zp[keep], zn[keep, None]], axis=1))
        if len(accepted) >= count:
            break
    return np.asarray(accepted[:count], dtype=complex).reshape(-1, n)


def uniform_extreme_constant(poly: WPolynomial, r: float, rp: float, c: float, d: float,
                             config: NumericsConfig = None, seed=None) -> Dict[str, Any]:
    """
    gamma_0 = (dist(psi(S), boundary of D^r) / 2) / d over a sampled
    S = {||z|| = 1} in E^{r'} and the cone.
    """
    config = config or DEFAULT_CONFIG
    seed = config.seed if seed is None else seed
    sample_seed, distance_seed = spawn_seeds(seed, 2)
    slice_points = _sample_normalized_slice(poly, rp, c, config.gamma_samples, sample_seed)
    if not len(slice_points):
        logger.warning("uniform constant: no sample of the normalized slice was accepted")
        return {"gamma0": None, "samples": 0}
    images = CayleyMap(poly).apply(slice_points)
    target = GeneralEllipsoid(poly, r)
    distances = [estimate.value for estimate in sampled_set_distance(target, images, config, distance_seed)]
    k = int(np.argmin(distances))
    delta = distances[k] / 2.0
    return {
        "gamma0": delta / d,
        "delta": delta,
        "samples": len(images),
        "worst_point": interleave(slice_points[k]),
        "label": "sampled estimate of the uniform constant",
    }


def extreme_point_bound(poly: WPolynomial, r: float, rp: float, c: float, q,
                        config: NumericsConfig = None, seed=None) -> SqueezeBoundReport:
    """
    Bound sigma at q near a boundary point of a domain Omega containing D(r).

    Pipeline: lambda with ||Lambda_lambda(q)|| = 1, w = G_lambda(q),
    delta_q = dist(w, boundary of G_lambda(D(r))), d = diam(D_P) and the
    bound delta_q / d. The alternative constant R(w, D_P) and the uniform
    sampled gamma_0 are reported in the trace.

    Raises:
        UnbalancedPolynomialError: P not balanced
        ConeMembershipError: q outside Gamma(r', c)
        RegimeError: the normalized image is not interior
    """
    config = config or DEFAULT_CONFIG
    seed = config.seed if seed is None else seed
    if not poly.balanced:
        raise UnbalancedPolynomialError("the extreme-point bound needs a balanced polynomial")
    if not 0 < rp < r <= 1:
        raise DomainError(f"need 0 < r' < r <= 1, got r'={rp}, r={r}")
    cone = ConeRegion(poly, rp, c)
    q = cone.ball.check_point(q)
    if not bool(cone.contains(q)):
        raise ConeMembershipError(f"q is not in the approach region Gamma(r'={rp}, c={c})",
                                  {"point": interleave(q)})

    lam = solve_normalization_scale(poly.signature, q)
    w = NormalizationMap(poly, lam).apply(q)
    image_domain = NormalizedHorosphere(poly, r, lam)
    closed_form = float(image_domain.defining_value(w))
    pulled_back = float(image_domain.pulled_back_value(w))
    if not (closed_form < -config.boundary_tol and pulled_back < 0):
        raise RegimeError(
            "normalized image of q is not interior to the normalized horosphere",
            {"lambda": lam, "image": interleave(w), "rho": closed_form, "pulled_back": pulled_back},
        )

    delta_seed, diam_seed, radius_seed, gamma_seed = spawn_seeds(seed, 4)
    near = boundary_distance(image_domain, w, config, seed=delta_seed)
    ellipsoid = GeneralEllipsoid(poly)
    diam = diameter(ellipsoid, config, seed=diam_seed)
    far = circumscribed_radius(ellipsoid, w, config, seed=radius_seed)
    bound = near.value / diam.value
    if not 0 < bound <= 1:
        raise ConvergenceError(f"extreme-point bound {bound:.6g} outside (0, 1]")

    trace = {
        "lambda": lam,
        "image": interleave(w),
        "delta": near.value,
        "d": diam.value,
        "R": far.value,
        "alternative_bound": _ratio(near.value, far.value),
        "nearest": near.to_dict(),
        "pulled_back_residual": float(abs(image_domain.pulled_back_value(near.point))),
        "diameter": diam.to_dict(),
        "uniform": uniform_extreme_constant(poly, r, rp, c, diam.value, config, gamma_seed),
        "region": {"r": r, "rp": rp, "c": c},
    }
    return SqueezeBoundReport(q, bound, METHOD_NAMES["extreme"], trace, _numerics(config, seed))


@dataclass
class OrbitRecord:
    """Slice image of one point of a sequence approaching (0', e^(i theta))."""

    point: np.ndarray
    image: np.ndarray
    image_value: float
    identity_residual: float
    distance_proxy: float
    boundary_distance: float
    ratio: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "point": interleave(self.point),
            "image": interleave(self.image),
            "P_image": self.image_value,
            "identity_residual": self.identity_residual,
            "distance_proxy": self.distance_proxy,
            "boundary_distance": self.boundary_distance,
            "ratio": self.ratio,
        }


@dataclass
class OrbitTrace:
    records: List[OrbitRecord]
    case: int
    rule: str
    constant: Optional[float] = None

    @property
    def image_bound(self) -> Optional[float]:
        """C / (1 + C), a bound for P(b_j) on the trailing half in Case 1."""
        if self.constant is None:
            return None
        return self.constant / (1.0 + self.constant)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "records": [rec.to_dict() for rec in self.records],
            "case": self.case,
            "rule": self.rule,
            "constant": self.constant,
            "image_bound": self.image_bound,
        }


def orbit_trace(domain: GeneralEllipsoid, points: Sequence, config: NumericsConfig = None) -> OrbitTrace:
    """
    Slice images b_j = phi_{a_n,0}(a_j) of a sequence and the nontangentiality
    ratio P(a')/(1 - |a_n|^2 - P(a')), whose boundedness separates Case 1
    (P(b_j) stays below 1) from Case 2 (P(b_j) -> 1).

    The ratio uses -rho(a) = 1 - |a_n|^2 - P(a'), comparable to the Euclidean
    distance near the boundary; the numerical estimate of dist(a, boundary)
    is recorded next to it.
    """
    config = config or DEFAULT_CONFIG
    poly = domain.poly
    points = [_require_interior(domain, a, config) for a in points]
    distances = sampled_set_distance(domain, points, config)
    records = []
    for a, distance in zip(points, distances):
        image = orbit_to_slice(poly, a)
        pa = float(poly.evaluate(a[:-1])) / domain.r
        pb = float(poly.evaluate(image[:-1])) / domain.r
        gap = 1.0 - abs(a[-1]) ** 2
        proxy = float(-domain.defining_value(a))
        records.append(OrbitRecord(
            point=a,
            image=image,
            image_value=pb,
            identity_residual=abs(pb * gap - pa),
            distance_proxy=proxy,
            boundary_distance=distance.value,
            ratio=pa / proxy,
        ))

    ratios = np.array([rec.ratio for rec in records])
    tail = ratios[len(ratios) // 2:]
    rule = CASE_RULE.format(threshold=config.case2_ratio)
    if len(tail) and tail[-1] > config.case2_ratio and np.all(np.diff(tail) > 0):
        return OrbitTrace(records, 2, rule)
    constant = float(np.max(tail)) if len(tail) else None
    return OrbitTrace(records, 1, rule, constant)


@dataclass
class HHRProfile:
    """Uniform lower bounds r(K_eps)/R(K_eps) over nested slice compacts."""

    levels: List[Dict[str, Any]]
    notes: Dict[str, str]

    def to_dict(self) -> Dict[str, Any]:
        return {"levels": self.levels, "notes": self.notes}


HHR_NOTES = {
    "computed": "r(K_eps)/R(K_eps) on sampled slice compacts K_eps = {(z', 0): P(z')/r <= 1 - eps}",
    "reduction": "every interior point is moved into the slice by an automorphism, so the bound holds "
                 "on the whole automorphism orbit of K_eps",
    "degenerate_limit": "the bound tends to 0 as eps -> 0; it is not uniform on the whole slice",
    "cited": "sigma tends to 1 at strongly pseudoconvex boundary points; this limit is cited, not computed",
}


def _slice_level_points(domain: GeneralEllipsoid, eps: float, count: int, seed) -> np.ndarray:
    """Slice points with P(z')/r = u (1 - eps): count interior draws and count on the shell."""
    n = domain.n
    level = 1.0 - eps
    if level <= 0:
        return np.zeros((1, n), dtype=complex)
    rng = make_rng(seed)
    sig = domain.signature
    w = project_to_weighted_sphere(sig, complex_normal(rng, (2 * count, sig.dim)))
    fraction = np.concatenate([rng.uniform(0.05, 1.0, count), np.ones(count)])
    s = fraction * level * domain.r / domain.poly.evaluate(w)
    zp = scale_point(sig, s, w)
    return np.concatenate([zp, np.zeros((2 * count, 1), dtype=complex)], axis=1)


def hhr_scan(domain: GeneralEllipsoid, epsilon_grid: Sequence[float], samples_per_level: int,
             seed: int = 0, config: NumericsConfig = None, jobs: int = 1) -> HHRProfile:
    """
    r(K_eps, Omega) / R(K_eps, Omega) for each eps of the grid.

    Levels are processed from the largest eps (smallest K_eps) down and share
    their samples cumulatively, so K_eps sets are nested and the bounds are
    monotone in eps. The origin is always part of K_eps.

    Args:
        domain: Ellipsoid D^r
        epsilon_grid: Values in (0, 1]
        samples_per_level: Interior and shell samples added per level
        seed: Stream seed
        config: Numerical settings
        jobs: Worker threads for the per-point distance searches

    Returns:
        HHRProfile with levels in the order of epsilon_grid
    """
    config = config or DEFAULT_CONFIG
    if not domain.poly.balanced:
        raise UnbalancedPolynomialError("the slice scan relies on automorphisms and needs a balanced polynomial")
    for eps in epsilon_grid:
        if not 0 < eps <= 1:
            raise DomainError(f"epsilon must lie in (0, 1], got {eps}")

    order = sorted(set(float(e) for e in epsilon_grid), reverse=True)
    level_seeds = spawn_seeds(seed, len(order))
    origin = np.zeros(domain.n, dtype=complex)
    results = {}
    r_inf, big_r_sup = np.inf, 0.0
    worst = None
    evaluated = 0

    def evaluate(args):
        point, child = args
        near_seed, far_seed = spawn_seeds(child, 2)
        return (boundary_distance(domain, point, config, seed=near_seed).value,
                circumscribed_radius(domain, point, config, seed=far_seed).value)

    with ThreadPoolExecutor(max_workers=jobs) as executor:
        for eps, level_seed in zip(order, level_seeds):
            point_seed, eval_seed = spawn_seeds(level_seed, 2)
            batch = list(_slice_level_points(domain, eps, samples_per_level, point_seed))
            if evaluated == 0:
                batch.insert(0, origin)
            children = spawn_seeds(eval_seed, len(batch))
            for point, (near, far) in zip(batch, executor.map(evaluate, zip(batch, children))):
                if near < r_inf:
                    r_inf, worst = near, point
                big_r_sup = max(big_r_sup, far)
            evaluated += len(batch)
            results[eps] = {
                "epsilon": eps,
                "r_K": r_inf,
                "R_K": big_r_sup,
                "bound": _ratio(r_inf, big_r_sup),
                "samples": evaluated,
                "worst_point": interleave(worst),
            }
            logger.debug("hhr_scan eps=%g: bound %.6g over %d points", eps, results[eps]["bound"], evaluated)

    levels = [results[float(e)] for e in epsilon_grid]
    return HHRProfile(levels, dict(HHR_NOTES))


def hhr_certificate(domain: GeneralEllipsoid, epsilon_grid: Sequence[float], samples: int,
                    exclusion_radius: float = 0.1, seed: int = 0, tol: float = 1e-8,
                    config: NumericsConfig = None, jobs: int = 1) -> Dict[str, Any]:
    """
    Chain the evidence for a uniform positive lower bound of sigma on D_P:
    positivity of P, the sampled WB check, the slice scan, and the cited
    boundary limit. Each link is labelled computed or cited.
    """
    config = config or DEFAULT_CONFIG
    links = []
    c1, c2 = comparability_constants(domain.poly, config)
    links.append({"link": "positivity", "status": "computed", "c1": c1, "c2": c2, "holds": c1 > 0})
    links.append({"link": "balanced", "status": "computed", "holds": domain.poly.balanced})

    wb = wb_check(domain, exclusion_radius, samples, seed, tol, config)
    links.append({"link": "wb-domain", "status": "computed (sampled)", "holds": wb.passed,
                  "report": wb.to_dict()})

    profile = None
    if domain.poly.balanced:
        profile = hhr_scan(domain, epsilon_grid, samples, seed, config, jobs)
        holds = all(level["bound"] > 0 for level in profile.levels)
        links.append({"link": "slice-scan", "status": "computed", "holds": holds,
                      "report": profile.to_dict()})
    links.append({"link": "boundary-limit", "status": "cited", "holds": True,
                  "statement": HHR_NOTES["cited"]})

    established = all(link["holds"] for link in links) and profile is not None
    return {
        "links": links,
        "conclusion": "uniform lower bound supported by sampled evidence" if established
                      else "not established",
        "established": established,
    }
