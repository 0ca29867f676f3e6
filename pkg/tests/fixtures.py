import json
import os
import shutil
import tempfile

import numpy as np

from ellipsoid_squeezer.config import NumericsConfig
from ellipsoid_squeezer.utils import to_complex, to_real
from ellipsoid_squeezer.wpoly import polynomial_from_terms


def fast_numerics(**overrides):
    """Smaller restart budgets so the suite runs quickly; tolerances unchanged."""
    values = dict(
        sphere_restarts=8,
        sphere_candidates=512,
        distance_random_directions=16,
        distance_refine_starts=4,
        radius_samples=512,
        radius_refine_starts=4,
        diameter_samples=128,
        diameter_refine_starts=3,
        gamma_samples=4,
        trend_samples=64,
    )
    values.update(overrides)
    return NumericsConfig(**values)


BALL_TERMS = [((1,), (1,), 1.0)]
QUARTIC_TERMS = [((2,), (2,), 1.0)]
TWO_VARIABLE_TERMS = [((2, 0), (2, 0), 1.0), ((0, 3), (0, 3), 1.0)]
MIXED_TERMS = [
    ((2, 0), (2, 0), 1.0),
    ((0, 2), (0, 2), 1.0),
    ((2, 0), (0, 2), 0.25),
    ((0, 2), (2, 0), 0.25),
]
INTRO_TERMS = [((4,), (4,), 1.0), ((7,), (1,), 0.25), ((1,), (7,), 0.25)]
RADIAL_TERMS = [((2, 0), (2, 0), 1.0), ((1, 1), (1, 1), 2.0), ((0, 2), (0, 2), 1.0)]


def ball_poly():
    """P = |z1|^2, m = (1): D_P is the unit ball in C^2."""
    return polynomial_from_terms((1,), BALL_TERMS)


def quartic_poly():
    """P = |z1|^4, m = (2)."""
    return polynomial_from_terms((2,), QUARTIC_TERMS)


def two_variable_poly():
    """P = |z1|^4 + |z2|^6, m = (2, 3)."""
    return polynomial_from_terms((2, 3), TWO_VARIABLE_TERMS)


def mixed_poly():
    """P = |z1|^4 + |z2|^4 + Re(z1^2 conj(z2)^2)/2, m = (2, 2)."""
    return polynomial_from_terms((2, 2), MIXED_TERMS)


def intro_poly():
    """P = |z1|^8 + |z1|^2 Re(z1^6)/2, m = (4): unbalanced."""
    return polynomial_from_terms((4,), INTRO_TERMS)


def radial_poly():
    """P = (|z1|^2 + |z2|^2)^2, m = (2, 2): strongly pseudoconvex away from z' = 0'."""
    return polynomial_from_terms((2, 2), RADIAL_TERMS)


def spec_dict(m, terms, **domain):
    data = {
        "n": len(m) + 1,
        "m": list(m),
        "terms": [
            {"K": list(K), "L": list(L), "re": complex(a).real, "im": complex(a).imag}
            for K, L, a in terms
        ],
    }
    data.update(domain)
    return data


def create_spec_dir(specs=None):
    """
    Creates a temporary directory with the standard fixture spec files.
    """
    temp_dir = tempfile.mkdtemp()
    specs = specs or {
        "ball.json": spec_dict((1,), BALL_TERMS),
        "quartic.json": spec_dict((2,), QUARTIC_TERMS),
        "intro.json": spec_dict((4,), INTRO_TERMS),
        "mixed.json": spec_dict((2, 2), MIXED_TERMS),
    }
    for name, data in specs.items():
        with open(os.path.join(temp_dir, name), "w") as f:
            json.dump(data, f)
    return temp_dir


def cleanup_spec_dir(path):
    """
    Cleans up a temporary spec directory
    """
    shutil.rmtree(path)


def fd_gradient(f, z, h=1e-6):
    """Wirtinger gradient df/dz_j = (df/dx_j - i df/dy_j)/2 of a real function by central differences."""
    x = to_real(z)
    k = len(x) // 2
    g = np.zeros(len(x))
    for i in range(len(x)):
        e = np.zeros(len(x))
        e[i] = h
        g[i] = (f(to_complex(x + e)) - f(to_complex(x - e))) / (2 * h)
    return 0.5 * (g[:k] - 1j * g[k:])


def fd_complex_hessian(f, z, h=1e-4):
    """
    d^2 f / dz_j d conj(z_k) of a real function by central differences:
    ((f_xjxk + f_yjyk) + i (f_xjyk - f_yjxk)) / 4.
    """
    x = to_real(z)
    dim = len(x)
    k = dim // 2
    D = np.zeros((dim, dim))
    for a in range(dim):
        for b in range(dim):
            ea = np.zeros(dim)
            eb = np.zeros(dim)
            ea[a] = h
            eb[b] = h
            D[a, b] = (f(to_complex(x + ea + eb)) - f(to_complex(x + ea - eb))
                       - f(to_complex(x - ea + eb)) + f(to_complex(x - ea - eb))) / (4 * h * h)
    xx, yy, xy, yx = D[:k, :k], D[k:, k:], D[:k, k:], D[k:, :k]
    return 0.25 * ((xx + yy) + 1j * (xy - yx))


def quartic_profile(count=400001):
    """Moduli (a, b) = (|w1|, |w2|) covering the boundary |w2|^2 + |w1|^4 = 1 of the quartic fixture."""
    a = np.linspace(0.0, 1.0, count)
    b = np.linspace(0.0, 1.0, count)
    moduli_a = np.concatenate([a, (1.0 - b ** 2) ** 0.25])
    moduli_b = np.concatenate([np.sqrt(1.0 - a ** 4), b])
    return moduli_a, moduli_b


def quartic_nearest_oracle(z):
    """Brute-force r(z, D_P) for P = |z1|^4 on the Reinhardt profile (phases aligned)."""
    a, b = quartic_profile()
    return float(np.sqrt(np.min((a - abs(z[0])) ** 2 + (b - abs(z[1])) ** 2)))


def quartic_farthest_oracle(z):
    """Brute-force R(z, D_P) for P = |z1|^4 (opposite phases)."""
    a, b = quartic_profile()
    return float(np.sqrt(np.max((a + abs(z[0])) ** 2 + (b + abs(z[1])) ** 2)))
