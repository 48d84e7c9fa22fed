import numpy as np

from innerlab.inner import FiniteBlaschke

TAU = 2.0 * np.pi


def random_blaschke(rng, degree, origin_zero=False, rmax=0.9):
    """Seeded finite Blaschke product with simple zeros."""
    n_free = degree - (1 if origin_zero else 0)
    radii = rng.uniform(0.05, rmax, n_free)
    angles = rng.uniform(0, TAU, n_free)
    zeros = [(r * np.exp(1j * t), 1) for r, t in zip(radii, angles)]
    if origin_zero:
        zeros.append((0j, 1))
    rot = np.exp(1j * rng.uniform(0, TAU))
    return FiniteBlaschke(zeros, rot)
