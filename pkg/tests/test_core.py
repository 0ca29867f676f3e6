import json
import os
import unittest

from ellipsoid_squeezer.config import RunConfig
from ellipsoid_squeezer.core import RunResult, SqueezeRunner, build_report
from ellipsoid_squeezer.domains import GeneralEllipsoid, HorosphereBall

from tests.fixtures import (
    BALL_TERMS,
    INTRO_TERMS,
    QUARTIC_TERMS,
    cleanup_spec_dir,
    create_spec_dir,
    fast_numerics,
    spec_dict,
)


class TestRunResult(unittest.TestCase):

    def test_status(self):
        self.assertEqual(RunResult("bound", 0).status, "ok")
        self.assertEqual(RunResult("wb-check", 2).status, "fail")
        self.assertEqual(RunResult("bound", 1, error={"message": "x"}).status, "error")


class TestSqueezeRunner(unittest.TestCase):

    def setUp(self):
        self.spec_dir = create_spec_dir({
            "ball.json": spec_dict((1,), BALL_TERMS),
            "quartic.json": spec_dict((2,), QUARTIC_TERMS),
            "intro.json": spec_dict((4,), INTRO_TERMS),
            "broken.json": spec_dict((2, 2), [((2, 0), (2, 0), 1.0), ((0, 2), (0, 2), 1.0), ((2, 0), (0, 2), 0.3)]),
            "horosphere.json": spec_dict((1,), BALL_TERMS, model="horosphere", r=0.5, **{"lambda": 2.0}),
            "siegel.json": spec_dict((1,), BALL_TERMS, model="siegel"),
        })

    def tearDown(self):
        if hasattr(self, 'spec_dir') and os.path.exists(self.spec_dir):
            cleanup_spec_dir(self.spec_dir)

    def run_command(self, command, spec="ball.json", **options):
        config = RunConfig(
            command=command,
            spec_path=os.path.join(self.spec_dir, spec) if spec else None,
            numerics=fast_numerics(),
            **options
        )
        return SqueezeRunner(config).run()

    def test_validate(self):
        result = self.run_command("validate")

        # Verify a valid spec exits 0
        self.assertEqual(result.exit_code, 0)
        self.assertTrue(result.result["valid"])

    def test_validate_violation(self):
        result = self.run_command("validate", spec="broken.json")
        self.assertEqual(result.exit_code, 2)
        self.assertFalse(result.result["valid"])
        self.assertEqual(len(result.result["hermitian_violations"]), 1)

    def test_missing_spec(self):
        result = self.run_command("validate", spec=None)
        self.assertEqual(result.exit_code, 1)
        self.assertEqual(result.error["type"], "SpecError")

    def test_levi(self):
        result = self.run_command("levi", spec="quartic.json", points=[(0j, 1 + 0j)])
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(result.result["classification"], "weakly-pseudoconvex")

    def test_levi_off_boundary(self):
        result = self.run_command("levi", points=[(0j, 0.5 + 0j)])
        self.assertEqual(result.exit_code, 2)
        self.assertEqual(result.error["type"], "OffBoundaryError")

    def test_levi_rejects_siegel_model(self):
        result = self.run_command("levi", spec="siegel.json", points=[(0j, 0j)])

        # Verify the unbounded model is refused before the Levi pipeline runs
        self.assertEqual(result.exit_code, 1)
        self.assertEqual(result.error["type"], "SpecError")
        self.assertIn("siegel", result.error["message"])

    def test_bound(self):
        result = self.run_command("bound", points=[(0j, 0.5 + 0j)])
        self.assertEqual(result.exit_code, 0)
        self.assertAlmostEqual(result.result["bound"], 1.0 / 3.0, places=7)

    def test_bound_needs_point(self):
        result = self.run_command("bound")
        self.assertEqual(result.exit_code, 1)
        self.assertIn("--point", result.error["message"])

    def test_extreme_bound(self):
        result = self.run_command("bound", method="extreme", points=[(0j, 0.1 + 0j)], r=1.0, rp=0.5, c=1.0)
        self.assertEqual(result.exit_code, 0)
        self.assertAlmostEqual(result.result["bound"], 1.9 / 4.2, delta=1e-5)

    def test_sweep_records_failures(self):
        points = [(0j, 0.5 + 0j), (0j, 1 + 0j), (0.2 + 0j, 0.1j)]
        result = self.run_command("sweep", points=points, jobs=2)
        summary = result.result["summary"]

        # The boundary point fails without stopping the sweep
        self.assertEqual(result.exit_code, 2)
        self.assertEqual(summary["count"], 3)
        self.assertEqual(summary["failed"], 1)
        self.assertEqual(result.result["reports"][1]["error"]["type"], "DomainError")
        self.assertAlmostEqual(result.result["reports"][0]["bound"], 1.0 / 3.0, places=7)

    def test_sweep_independent_of_jobs(self):
        points = [(0.1 + 0j, 0.2j), (0j, 0.6 + 0j), (0.3j, -0.1 + 0j)]
        serial = self.run_command("sweep", spec="quartic.json", points=points, jobs=1, seed=3)
        threaded = self.run_command("sweep", spec="quartic.json", points=points, jobs=3, seed=3)
        self.assertEqual(json.dumps(serial.result, sort_keys=True), json.dumps(threaded.result, sort_keys=True))

    def test_maps_verify(self):
        result = self.run_command("maps-verify", spec="quartic.json", samples=100)
        self.assertEqual(result.exit_code, 0)
        self.assertTrue(result.result["pass"])
        self.assertEqual(result.result["map"], {"map": "cayley"})

    def test_maps_verify_unbalanced(self):
        result = self.run_command("maps-verify", spec="intro.json", samples=10)
        self.assertEqual(result.exit_code, 2)
        self.assertEqual(result.error["type"], "UnbalancedPolynomialError")

    def test_orbit_trace(self):
        result = self.run_command("orbit-trace", points=[(0.5 + 0j, 0.5 + 0j), (0.1 + 0j, 0.9 + 0j)])
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(len(result.result["records"]), 2)

    def test_hhr_scan(self):
        result = self.run_command("hhr-scan", samples=4, eps_grid=[0.5], exclusion=0.1)
        self.assertEqual(result.exit_code, 0)
        self.assertTrue(result.result["established"])

    def test_domain_models(self):
        runner = SqueezeRunner(RunConfig(command="levi", spec_path=os.path.join(self.spec_dir, "horosphere.json")))
        poly = runner.polynomial()

        # The spec names the model; r comes from the run config
        domain = runner.domain(poly)
        self.assertIsInstance(domain, HorosphereBall)
        self.assertEqual(domain.lam, 2.0)
        self.assertEqual(domain.r, 1.0)

        ellipsoid_runner = SqueezeRunner(RunConfig(command="wb-check", spec_path=os.path.join(self.spec_dir, "ball.json")))
        self.assertIsInstance(ellipsoid_runner.ellipsoid(ellipsoid_runner.polynomial()), GeneralEllipsoid)

    def test_wb_check_needs_ellipsoid(self):
        result = self.run_command("wb-check", spec="horosphere.json", samples=10)
        self.assertEqual(result.exit_code, 1)
        self.assertEqual(result.error["type"], "SpecError")


class TestBuildReport(unittest.TestCase):

    def test_success_report(self):
        config = RunConfig(command="bound", points=[(0j, 0.5 + 0j)])
        report = build_report(config, RunResult("bound", 0, {"bound": 0.5}))

        # Verify the report carries the resolved config
        self.assertEqual(report["status"], "ok")
        self.assertEqual(report["result"], {"bound": 0.5})
        self.assertEqual(report["config"]["points"], [[0.0, 0.0, 0.5, 0.0]])
        self.assertNotIn("error", report)

    def test_error_report(self):
        config = RunConfig(command="validate")
        error = {"type": "SpecError", "message": "bad", "exit_code": 1, "details": {}}
        report = build_report(config, RunResult("validate", 1, error=error))
        self.assertEqual(report["status"], "error")
        self.assertEqual(report["error"], error)
        self.assertNotIn("result", report)


if __name__ == '__main__':
    unittest.main()
