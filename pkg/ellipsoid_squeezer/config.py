from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

COMMANDS = (
    "validate",
    "wb-check",
    "levi",
    "bound",
    "sweep",
    "maps-verify",
    "orbit-trace",
    "hhr-scan",
)

BOUND_METHODS = ("lemma21", "slice", "extreme")

# Samples per command when --samples is not given
DEFAULT_SAMPLES = {"hhr-scan": 50}
FALLBACK_SAMPLES = 1000


@dataclass
class NumericsConfig:
    """Tolerances, restart budgets and sample counts for every numerical pipeline."""

    positivity_tol: float = 1e-8
    boundary_tol: float = 1e-10
    levi_tol: float = 1e-8
    gradient_tol: float = 1e-10

    # Weighted-sphere extrema (comparability constants, positivity)
    sphere_restarts: int = 64
    sphere_candidates: int = 4096
    max_iterations: int = 500
    xatol: float = 1e-10
    fatol: float = 1e-14

    # Boundary distance / circumscribed radius / diameter
    distance_random_directions: int = 32
    distance_refine_starts: int = 6
    radius_samples: int = 2048
    radius_refine_starts: int = 6
    diameter_samples: int = 512
    diameter_refine_starts: int = 4
    bisection_steps: int = 80

    # Squeeze pipelines
    gamma_samples: int = 16
    trend_samples: int = 256
    case2_ratio: float = 1e3

    seed: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class RunConfig:
    """Fully resolved configuration of one CLI invocation."""

    command: str
    spec_path: Optional[str] = None
    out: Optional[str] = None
    format: str = "json"
    seed: int = 0
    samples: Optional[int] = None
    tol: float = 1e-8
    jobs: int = 1
    method: str = "lemma21"
    r: float = 1.0
    rp: float = 0.5
    c: float = 1.0
    lam: Optional[float] = None
    points: List[Tuple[complex, ...]] = field(default_factory=list)
    eps_grid: List[float] = field(default_factory=lambda: [0.5, 0.2, 0.1])
    exclusion: float = 0.1
    map_name: str = "cayley"
    a: complex = 0j
    theta: float = 0.0
    minimal: bool = False
    verbose: bool = False
    numerics: NumericsConfig = field(default_factory=NumericsConfig)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.method not in BOUND_METHODS:
            raise ValueError(f"unknown bound method {self.method!r}")
        if self.jobs < 1:
            raise ValueError("--jobs must be at least 1")
        if self.samples is None:
            self.samples = DEFAULT_SAMPLES.get(self.command, FALLBACK_SAMPLES)
        # The run seed drives every stream in the pipelines
        self.numerics.seed = self.seed
        self.numerics.levi_tol = self.tol

    def to_dict(self) -> Dict[str, Any]:
        """Every resolved value, points interleaved as [re, im, ...]."""
        data = asdict(self)
        data["points"] = [
            [part for value in point for part in (value.real, value.imag)]
            for point in self.points
        ]
        data["a"] = [self.a.real, self.a.imag]
        return data


DEFAULT_CONFIG = NumericsConfig()
