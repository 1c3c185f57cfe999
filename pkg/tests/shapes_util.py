"""Shape builders shared by the test modules."""

import math

import numpy as np

from obstacle_eigen.geometry import Obstacle


def sawtooth(n: int, length: float = 2.0) -> Obstacle:
    """n-tooth zigzag over [0, 1] x {0} with total length ``length``.

    Each tooth is two equal segments; as n grows the chain converges to the
    unit segment in Hausdorff distance while its length stays fixed.
    """
    seg = length / (2 * n)
    half = 1.0 / (2 * n)
    if seg < half:
        raise ValueError("length too short for a unit-span zigzag")
    height = math.sqrt(seg**2 - half**2)
    xs = np.arange(2 * n + 1) * half
    ys = np.where(np.arange(2 * n + 1) % 2 == 1, height, 0.0)
    return Obstacle.chain(np.column_stack([xs, ys]))


def random_star_polygon(rng, n: int = 7, center=(0.0, 0.0), rmin: float = 0.3, rmax: float = 0.8) -> Obstacle:
    """Random simple polygon, star-shaped with respect to ``center``."""
    theta = np.sort(rng.uniform(0, 2 * np.pi, n))
    while np.min(np.diff(np.r_[theta, theta[0] + 2 * np.pi])) < 0.2:
        theta = np.sort(rng.uniform(0, 2 * np.pi, n))
    r = rng.uniform(rmin, rmax, n)
    pts = np.asarray(center) + np.column_stack([r * np.cos(theta), r * np.sin(theta)])
    return Obstacle.polygon(pts)
