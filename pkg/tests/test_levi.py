import unittest

import numpy as np

from ellipsoid_squeezer.domains import GeneralEllipsoid, HorosphereBall, sample_boundary
from ellipsoid_squeezer.exceptions import OffBoundaryError, VanishingGradientError
from ellipsoid_squeezer.levi import (
    INDEFINITE,
    STRONG,
    WEAK,
    TREND_FACTORS,
    classify,
    defining_gradient,
    defining_hessian,
    levi_report,
    restricted_levi_eigenvalues,
    restricted_levi_matrix,
    tangent_basis,
    wb_check,
)

from tests.fixtures import (
    ball_poly,
    fast_numerics,
    fd_complex_hessian,
    fd_gradient,
    intro_poly,
    mixed_poly,
    quartic_poly,
    radial_poly,
    two_variable_poly,
)


class TestClassify(unittest.TestCase):

    def test_thresholds(self):
        self.assertEqual(classify(1.0, 1e-8), STRONG)
        self.assertEqual(classify(0.0, 1e-8), WEAK)
        self.assertEqual(classify(-1e-9, 1e-8), WEAK)
        self.assertEqual(classify(-1e-3, 1e-8), INDEFINITE)


class TestDerivatives(unittest.TestCase):

    def test_gradient_and_hessian_match_finite_differences(self):
        rng = np.random.default_rng(12)
        for domain in (GeneralEllipsoid(mixed_poly(), 0.7), HorosphereBall(quartic_poly(), 0.5, 2.0)):
            z = 0.5 * (rng.standard_normal(domain.n) + 1j * rng.standard_normal(domain.n))
            rho = lambda w: float(domain.defining_value(w))

            # Verify symbolic derivatives of rho against central differences
            np.testing.assert_allclose(defining_gradient(domain, z), fd_gradient(rho, z), rtol=1e-5, atol=1e-7)
            np.testing.assert_allclose(defining_hessian(domain, z), fd_complex_hessian(rho, z), atol=1e-5)

    def test_tangent_basis(self):
        g = np.array([0.3 + 0.1j, -0.2j, 0.9])
        B = tangent_basis(g)

        # Orthonormal columns orthogonal to g
        self.assertEqual(B.shape, (3, 2))
        np.testing.assert_allclose(B.conj().T @ B, np.eye(2), atol=1e-14)
        np.testing.assert_allclose(g.conj() @ B, 0, atol=1e-14)


class TestLeviReport(unittest.TestCase):

    def setUp(self):
        self.config = fast_numerics()

    def test_ball_is_strongly_pseudoconvex(self):
        domain = GeneralEllipsoid(ball_poly())
        report = levi_report(domain, [np.sqrt(0.5), np.sqrt(0.5) * 1j], config=self.config)

        # The restricted Levi form of |z|^2 - 1 is the identity
        self.assertEqual(report.classification, STRONG)
        self.assertAlmostEqual(report.min_eigenvalue, 1.0, places=12)

    def test_quartic_degenerates_on_the_circle(self):
        domain = GeneralEllipsoid(quartic_poly())
        report = levi_report(domain, [0, 1], config=self.config)
        self.assertEqual(report.classification, WEAK)
        self.assertAlmostEqual(report.min_eigenvalue, 0.0, places=14)

        # Away from z1 = 0 the form is positive
        z1 = 0.5 ** 0.25
        away = levi_report(domain, [z1, np.sqrt(0.5)], config=self.config)
        self.assertEqual(away.classification, STRONG)

    def test_sum_of_powers_degenerates_on_coordinate_planes(self):
        # z1 = 0 with z2 != 0 is a weakly pseudoconvex point of |z1|^4 + |z2|^6 + |z3|^2 < 1
        domain = GeneralEllipsoid(two_variable_poly())
        report = levi_report(domain, [0, 0.5 ** (1.0 / 6.0), np.sqrt(0.5)], config=self.config)
        self.assertEqual(report.classification, WEAK)
        self.assertGreater(report.restricted_eigenvalues[-1], 0.1)

    def test_matches_finite_difference_oracle(self):
        for poly in (quartic_poly(), two_variable_poly(), mixed_poly(), intro_poly()):
            domain = GeneralEllipsoid(poly)
            q = sample_boundary(domain, 1, 17)[0]
            rho = lambda w: float(domain.defining_value(w))
            B = tangent_basis(fd_gradient(rho, q))
            oracle = np.linalg.eigvalsh(B.conj().T @ fd_complex_hessian(rho, q) @ B)
            report = levi_report(domain, q, config=self.config)
            np.testing.assert_allclose(report.restricted_eigenvalues, oracle, atol=1e-4)

    def test_basis_independence(self):
        domain = GeneralEllipsoid(mixed_poly())
        q = sample_boundary(domain, 1, 2)[0]
        B = tangent_basis(defining_gradient(domain, q))
        rng = np.random.default_rng(0)
        U, _ = np.linalg.qr(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))

        # A unitary change of tangent basis leaves the spectrum unchanged
        first = np.linalg.eigvalsh(restricted_levi_matrix(domain, q, B))
        second = np.linalg.eigvalsh(restricted_levi_matrix(domain, q, B @ U))
        np.testing.assert_allclose(first, second, atol=1e-12)

    def test_phase_rotation_of_last_coordinate(self):
        for poly in (quartic_poly(), mixed_poly(), intro_poly()):
            domain = GeneralEllipsoid(poly)
            points = sample_boundary(domain, 8, 12)
            base = restricted_levi_eigenvalues(domain, points)
            for theta in (0.7, np.pi, -2.1):
                rotated = points.copy()
                rotated[:, -1] *= np.exp(1j * theta)

                # z_n -> e^(i theta) z_n is an automorphism fixing P
                np.testing.assert_allclose(restricted_levi_eigenvalues(domain, rotated), base, atol=1e-10)
                report = levi_report(domain, rotated[0], config=self.config)
                np.testing.assert_allclose(report.restricted_eigenvalues, base[0], atol=1e-10)

    def test_batched_eigenvalues(self):
        domain = GeneralEllipsoid(two_variable_poly())
        points = sample_boundary(domain, 10, 6)
        batched = restricted_levi_eigenvalues(domain, points)
        single = np.array([levi_report(domain, p, config=self.config).restricted_eigenvalues for p in points])
        np.testing.assert_allclose(batched, single, atol=1e-12)

    def test_off_boundary(self):
        domain = GeneralEllipsoid(ball_poly())
        with self.assertRaises(OffBoundaryError) as ctx:
            levi_report(domain, [0, 0.5], config=self.config)
        self.assertEqual(ctx.exception.exit_code, 2)

    def test_vanishing_gradient(self):
        # |g| = 1 at the origin, below the raised tolerance
        domain = HorosphereBall(ball_poly(), 1.0)
        with self.assertRaises(VanishingGradientError):
            levi_report(domain, [0, 0], config=fast_numerics(gradient_tol=10.0))

    def test_report_serialization(self):
        data = levi_report(GeneralEllipsoid(ball_poly()), [1, 0], config=self.config).to_dict()
        self.assertEqual(data["point"], [1.0, 0.0, 0.0, 0.0])
        self.assertEqual(len(data["restricted_eigenvalues"]), 1)
        self.assertLess(data["hermitian_residual"], 1e-14)


class TestWBCheck(unittest.TestCase):

    def setUp(self):
        self.config = fast_numerics()

    def test_ball(self):
        report = wb_check(GeneralEllipsoid(ball_poly()), 0.1, 200, seed=0, config=self.config)

        # Verify pass and the constant eigenvalue
        self.assertTrue(report.passed)
        self.assertAlmostEqual(report.min_eigenvalue, 1.0, places=10)
        self.assertEqual(len(report.trend), len(TREND_FACTORS))

    def test_quartic_trend_decreases(self):
        report = wb_check(GeneralEllipsoid(quartic_poly()), 0.03, 500, seed=1, config=self.config)
        values = [entry["min_eig"] for entry in report.trend]

        # Positive away from z' = 0', shrinking toward it
        self.assertTrue(report.passed)
        self.assertTrue(all(v > 0 for v in values))
        self.assertGreater(values[0], values[-1])

    def test_radial_and_unbalanced_examples(self):
        for poly in (radial_poly(), intro_poly()):
            report = wb_check(GeneralEllipsoid(poly), 0.05, 300, seed=3, config=self.config)
            self.assertTrue(report.passed, report.to_dict())
            self.assertGreater(report.samples, 0)

    def test_intro_example_across_exclusion_radii(self):
        domain = GeneralEllipsoid(intro_poly())
        for radius in (0.3, 0.1, 0.03):
            report = wb_check(domain, radius, 10000, seed=0, config=self.config)
            trend = [entry["min_eig"] for entry in report.trend]

            # Positive away from z' = 0', degenerating toward it
            self.assertTrue(report.passed, report.to_dict())
            self.assertGreater(report.min_eigenvalue, 0.0)
            self.assertEqual(report.samples, 10000)
            self.assertLess(trend[-1], trend[0])

    def test_threshold_failure(self):
        report = wb_check(GeneralEllipsoid(ball_poly()), 0.1, 50, tol=10.0, config=self.config)
        self.assertFalse(report.passed)
        self.assertFalse(report.to_dict()["pass"])

    def test_exclusion_too_large(self):
        with self.assertLogs("ellipsoid_squeezer.levi", level="WARNING"):
            report = wb_check(GeneralEllipsoid(quartic_poly()), 5.0, 50, config=self.config)

        # No boundary point reaches sigma(z') = 5, so the check passes vacuously
        self.assertTrue(report.passed)
        self.assertEqual(report.samples, 0)
        self.assertIsNone(report.to_dict()["argmin_point"])

    def test_deterministic(self):
        domain = GeneralEllipsoid(mixed_poly())
        first = wb_check(domain, 0.1, 100, seed=4, config=self.config).to_dict()
        second = wb_check(domain, 0.1, 100, seed=4, config=self.config).to_dict()
        self.assertEqual(first, second)


if __name__ == '__main__':
    unittest.main()
