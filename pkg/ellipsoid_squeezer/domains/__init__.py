from typing import Any, Dict

from ..exceptions import SpecError
from ..wpoly import WPolynomial
from .base import BaseDomain, WeightedBall
from .ellipsoid import GeneralEllipsoid
from .horosphere import ConeRegion, HorosphereBall, NormalizedHorosphere
from .metrics import (DistanceEstimate, boundary_distance, circumscribed_radius, diameter,
                      family_covers, sample_boundary, sample_exterior, sample_interior)
from .siegel import SiegelModel

__all__ = [
    'BaseDomain',
    'ConeRegion',
    'GeneralEllipsoid',
    'HorosphereBall',
    'NormalizedHorosphere',
    'SiegelModel',
    'WeightedBall',
    'DistanceEstimate',
    'boundary_distance',
    'circumscribed_radius',
    'diameter',
    'family_covers',
    'sample_boundary',
    'sample_exterior',
    'sample_interior',
    'DOMAIN_MODELS',
    'domain_from_spec',
]

DOMAIN_MODELS = {
    'ellipsoid': GeneralEllipsoid,
    'siegel': SiegelModel,
    'horosphere': HorosphereBall,
}


def domain_from_spec(poly: WPolynomial, data: Dict[str, Any]) -> BaseDomain:
    """
    Build the domain named by a domain JSON spec.

    Args:
        poly: Validated polynomial from the same spec
        data: Spec fields "model", "r" and optional "lambda"

    Returns:
        Domain instance
    """
    model = data.get("model", "ellipsoid")
    if model not in DOMAIN_MODELS:
        raise SpecError(f"unknown domain model {model!r}; expected one of {sorted(DOMAIN_MODELS)}")
    r = float(data.get("r", 1.0))
    if model == "horosphere":
        return HorosphereBall(poly, r, float(data.get("lambda", 1.0)))
    return DOMAIN_MODELS[model](poly, r)
