import unittest

import numpy as np

from ellipsoid_squeezer.domains import (
    SiegelModel,
    boundary_distance,
    circumscribed_radius,
    sample_boundary,
    sample_exterior,
    sample_interior,
)
from ellipsoid_squeezer.exceptions import DomainError

from tests.fixtures import ball_poly, fast_numerics, mixed_poly, quartic_poly


class TestSiegelModel(unittest.TestCase):

    def test_defining_value(self):
        domain = SiegelModel(quartic_poly(), r=0.5)

        # rho = P(z')/r - 2 Re z_n
        self.assertAlmostEqual(float(domain.defining_value([1.0, 1.0])), 0.0)
        self.assertAlmostEqual(float(domain.defining_value([1.0, 2.0 + 5j])), -2.0)
        self.assertFalse(domain.bounded)
        self.assertEqual(domain.describe(), {"model": "siegel", "r": 0.5})

    def test_invalid_scale(self):
        with self.assertRaises(DomainError):
            SiegelModel(ball_poly(), r=-1.0)

    def test_sampling(self):
        for poly in (ball_poly(), quartic_poly(), mixed_poly()):
            domain = SiegelModel(poly, r=0.75)
            boundary = sample_boundary(domain, 100, 1)
            scale = 1.0 + np.abs(boundary[:, -1].real)

            # Verify the three sample families
            self.assertTrue(np.all(np.abs(domain.defining_value(boundary)) <= 1e-12 * scale))
            self.assertTrue(np.all(domain.defining_value(sample_interior(domain, 100, 1)) < 0))
            self.assertTrue(np.all(domain.defining_value(sample_exterior(domain, 100, 1)) > 0))

    def test_metrics_rejected(self):
        domain = SiegelModel(ball_poly())
        with self.assertRaises(DomainError):
            circumscribed_radius(domain, [0, 1], fast_numerics())
        with self.assertRaises(DomainError):
            boundary_distance(domain, [0, 1], fast_numerics())


if __name__ == '__main__':
    unittest.main()
