from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple
import logging

import numpy as np

from .config import RunConfig
from .domains import GeneralEllipsoid, WeightedBall, domain_from_spec
from .exceptions import SpecError, SqueezerError
from .holomaps import map_from_descriptor, verify_map
from .levi import levi_report, wb_check
from .squeeze import (extreme_point_bound, hhr_certificate, lemma21_bound, orbit_trace,
                      slice_reduced_bound)
from .utils import load_json_file, spawn_seeds
from .wpoly import PolynomialSpec, WPolynomial, build_polynomial, validate

logger = logging.getLogger(__name__)

DOMAIN_KEYS = ("model", "r", "lambda")


@dataclass
class RunResult:
    """Outcome of one command: the report body and the process exit code."""
    command: str
    exit_code: int
    result: Dict[str, Any] = field(default_factory=dict)
    error: Optional[Dict[str, Any]] = None

    @property
    def status(self) -> str:
        if self.error is not None:
            return "error"
        return "ok" if self.exit_code == 0 else "fail"


class SqueezeRunner:
    """Loads a domain spec and dispatches one command to its pipeline."""

    def __init__(self, config: RunConfig, progress_tracker=None):
        """
        Initialize the runner.

        Args:
            config: Resolved run configuration
            progress_tracker: Optional rich progress object
        """
        self.config = config
        self.progress = progress_tracker
        self.task_id = None
        self._spec_data = None

    def _advance(self, description: str, advance: float = 0, **kwargs):
        if self.progress and self.task_id is not None:
            self.progress.update(self.task_id, description=description, advance=advance, **kwargs)

    @property
    def spec_data(self) -> Dict[str, Any]:
        if self._spec_data is None:
            if not self.config.spec_path:
                raise SpecError("no --spec file given")
            self._spec_data = load_json_file(self.config.spec_path)
        return self._spec_data

    def polynomial(self) -> WPolynomial:
        return build_polynomial(PolynomialSpec.from_dict(self.spec_data))

    def domain(self, poly: WPolynomial) -> WeightedBall:
        """
        Domain named by the spec's model field, with r (and lambda) from the run config.

        Commands that work on the ellipsoid D^r reject the other models.
        """
        fields = {key: self.spec_data[key] for key in DOMAIN_KEYS if key in self.spec_data}
        fields["r"] = self.config.r
        if self.config.lam is not None:
            fields["lambda"] = self.config.lam
        return domain_from_spec(poly, fields)

    def ellipsoid(self, poly: WPolynomial) -> GeneralEllipsoid:
        domain = self.domain(poly)
        if not isinstance(domain, GeneralEllipsoid):
            raise SpecError(f"command {self.config.command!r} needs the ellipsoid model, got {domain.model!r}")
        return domain

    def _points(self, minimum: int = 1) -> List[Tuple[complex, ...]]:
        if len(self.config.points) < minimum:
            raise SpecError(f"command {self.config.command!r} needs at least {minimum} --point")
        return self.config.points

    def run(self) -> RunResult:
        """
        Run the configured command.

        Returns:
            RunResult; library errors are captured into its error field
        """
        handlers = {
            "validate": self._run_validate,
            "wb-check": self._run_wb_check,
            "levi": self._run_levi,
            "bound": self._run_bound,
            "sweep": self._run_sweep,
            "maps-verify": self._run_maps_verify,
            "orbit-trace": self._run_orbit_trace,
            "hhr-scan": self._run_hhr_scan,
        }
        if self.progress:
            self.task_id = self.progress.add_task(f"Running {self.config.command}...", total=100)
        try:
            result = handlers[self.config.command]()
        except SqueezerError as e:
            logger.debug("command %s failed: %s", self.config.command, e.message)
            result = RunResult(self.config.command, e.exit_code, error=e.to_dict())
        self._advance(f"{self.config.command} complete", completed=100)
        return result

    def _run_validate(self) -> RunResult:
        spec = PolynomialSpec.from_dict(self.spec_data)
        report = validate(spec, self.config.numerics)
        return RunResult("validate", 0 if report.valid else 2, report.to_dict())

    def _run_wb_check(self) -> RunResult:
        domain = self.ellipsoid(self.polynomial())
        self._advance("Sampling boundary...", advance=10)
        report = wb_check(domain, self.config.exclusion, self.config.samples, self.config.seed,
                          self.config.tol, self.config.numerics)
        return RunResult("wb-check", 0 if report.passed else 2, report.to_dict())

    def _run_levi(self) -> RunResult:
        domain = self.domain(self.polynomial())
        if not isinstance(domain, WeightedBall):
            raise SpecError(f"command 'levi' needs a bounded model, got {domain.model!r}")
        report = levi_report(domain, self._points()[0], self.config.tol, self.config.numerics)
        return RunResult("levi", 0, report.to_dict())

    def _bound_at(self, poly: WPolynomial, point, seed) -> Dict[str, Any]:
        cfg = self.config
        if cfg.method == "extreme":
            report = extreme_point_bound(poly, cfg.r, cfg.rp, cfg.c, point, cfg.numerics, seed)
        elif cfg.method == "slice":
            report = slice_reduced_bound(self.ellipsoid(poly), point, cfg.numerics, seed)
        else:
            report = lemma21_bound(self.domain(poly), point, cfg.numerics, seed)
        return report.to_dict()

    def _run_bound(self) -> RunResult:
        poly = self.polynomial()
        self._advance(f"Computing {self.config.method} bound...", advance=10)
        report = self._bound_at(poly, self._points()[0], self.config.seed)
        return RunResult("bound", 0, report)

    def _run_sweep(self) -> RunResult:
        poly = self.polynomial()
        points = self._points()
        seeds = spawn_seeds(self.config.seed, len(points))
        step = 90.0 / len(points)

        def evaluate(args):
            index, point, seed = args
            try:
                report = self._bound_at(poly, point, seed)
            except SqueezerError as e:
                report = {"point": [v for z in point for v in (z.real, z.imag)], "error": e.to_dict()}
            self._advance(f"Swept {index + 1}/{len(points)} points", advance=step)
            return report

        with ThreadPoolExecutor(max_workers=self.config.jobs) as executor:
            rows = list(executor.map(evaluate, zip(range(len(points)), points, seeds)))

        exit_code = max([row["error"]["exit_code"] for row in rows if "error" in row], default=0)
        summary = {
            "method": self.config.method,
            "count": len(rows),
            "failed": sum("error" in row for row in rows),
            "min_bound": min([row["bound"] for row in rows if "bound" in row], default=None),
        }
        return RunResult("sweep", exit_code, {"summary": summary, "reports": rows})

    def _run_maps_verify(self) -> RunResult:
        poly = self.polynomial()
        cfg = self.config
        descriptor = {
            "map": cfg.map_name,
            "a": [cfg.a.real, cfg.a.imag],
            "theta": cfg.theta,
            "lambda": cfg.lam,
        }
        hmap = map_from_descriptor(poly, descriptor)
        source, target = hmap.natural_domains(poly)
        self._advance(f"Sampling {hmap.name} map...", advance=10)
        report = verify_map(hmap, source, target, cfg.samples, cfg.seed)
        return RunResult("maps-verify", 0 if report.passed else 2, report.to_dict())

    def _run_orbit_trace(self) -> RunResult:
        domain = self.ellipsoid(self.polynomial())
        trace = orbit_trace(domain, [np.asarray(p) for p in self._points()], self.config.numerics)
        return RunResult("orbit-trace", 0, trace.to_dict())

    def _run_hhr_scan(self) -> RunResult:
        domain = self.ellipsoid(self.polynomial())
        cfg = self.config
        self._advance("Scanning slice compacts...", advance=10)
        certificate = hhr_certificate(domain, cfg.eps_grid, cfg.samples, cfg.exclusion, cfg.seed,
                                      cfg.tol, cfg.numerics, cfg.jobs)
        return RunResult("hhr-scan", 0, certificate)


def build_report(config: RunConfig, result: RunResult) -> Dict[str, Any]:
    """Report document: resolved config plus either the result or the error."""
    report = {
        "command": result.command,
        "status": result.status,
        "exit_code": result.exit_code,
        "config": config.to_dict(),
    }
    if result.error is not None:
        report["error"] = result.error
    else:
        report["result"] = result.result
    return report
