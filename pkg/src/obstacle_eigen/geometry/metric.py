"""Hausdorff distance, segment-union approximation, convex hulls and
perimeter bounds over convex sets inside a domain."""

from __future__ import annotations

import warnings

import numpy as np
import shapely
from scipy.spatial import ConvexHull, cKDTree

from .obstacle import Obstacle
from .shapes import Domain, Polygon, is_convex_ring, ring_length


def _one_sided(a: Obstacle, b: Obstacle, step: float) -> float:
    return float(b.distance(a.sample_points(step)).max())


def hausdorff_distance(a: Obstacle, b: Obstacle, step: float = 1e-2) -> float:
    """Symmetric Hausdorff distance.

    Each set is densified with spacing ``step`` and the exact distance of the
    samples to the other set is taken, so the result is exact for vertex sets
    and otherwise low by at most ``step``.
    """
    if a is None or b is None:
        raise ValueError("hausdorff distance of an empty set")
    if not step > 0:
        raise ValueError("step must be positive")
    return max(_one_sided(a, b, step), _one_sided(b, a, step))


def _greedy_net(points: np.ndarray, r: float) -> np.ndarray:
    """Subset of ``points`` with pairwise gaps >= r covering every point within r."""
    tree = cKDTree(points)
    taken = np.zeros(len(points), dtype=bool)
    covered = np.zeros(len(points), dtype=bool)
    for i in range(len(points)):
        if covered[i]:
            continue
        taken[i] = True
        covered[tree.query_ball_point(points[i], r)] = True
    return points[taken]


def segment_approximation(obstacle: Obstacle, n: int) -> Obstacle:
    """Finite union of segments within Hausdorff distance 2/n of ``obstacle``.

    Centres of an r-net of the obstacle (r = 1/n) are joined whenever their
    r-discs meet.  Because the discs cover a connected set, the result is a
    connected chain.
    """
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    r = 1.0 / n
    pts = obstacle.sample_points(r / 8)
    centers = _greedy_net(pts, r)
    if len(centers) == 1:
        return Obstacle.point(centers[0])
    pairs = cKDTree(centers).query_pairs(2 * r, output_type="ndarray")
    return Obstacle.graph(centers, pairs)


def convex_hull(obstacle: Obstacle) -> Obstacle:
    """Convex hull of an obstacle as a region (or a segment/point when degenerate)."""
    v = np.unique(np.concatenate(obstacle.rings()), axis=0) if obstacle.kind == "region" else np.unique(obstacle.vertices, axis=0)
    if len(v) == 1:
        return Obstacle.point(v[0])
    try:
        hull = ConvexHull(v)
    except Exception:  # collinear input, scipy raises QhullError
        d = v - v.mean(axis=0)
        axis = np.linalg.svd(d, full_matrices=False)[2][0]
        t = d @ axis
        return Obstacle.segment(v[np.argmin(t)], v[np.argmax(t)])
    return Obstacle.polygon(v[hull.vertices])


def _inside_closed(domain: Domain, v: np.ndarray, geom, tol: float) -> bool:
    outer = domain.outer
    if isinstance(outer, Polygon):
        if not outer.to_shapely().buffer(tol).contains(geom):
            return False
    elif np.any(outer.level(v) < -tol):
        return False
    return not any(h.to_shapely().buffer(-tol).intersects(geom) for h in domain.holes)


def convex_perimeter_bound(domain: Domain, candidate_polygons=(), tol: float = 1e-9) -> float:
    """Largest perimeter of a closed convex set in the closed domain, bounded below.

    For a convex domain the answer is the perimeter of the domain itself.
    Otherwise it is the best candidate; candidates that are not convex or not
    inside the closed domain are skipped with a warning.  A two-point
    candidate is a chord and counts with twice its length.
    """
    best = domain.outer.perimeter if domain.is_convex() else 0.0
    for i, cand in enumerate(candidate_polygons):
        v = np.asarray(cand.vertices if isinstance(cand, Obstacle) else cand, dtype=float).reshape(-1, 2)
        if len(v) < 2:
            warnings.warn(f"candidate {i} has fewer than two vertices, skipped")
            continue
        if not is_convex_ring(v):
            warnings.warn(f"candidate {i} is not convex, skipped")
            continue
        geom = shapely.LineString(v) if len(v) == 2 else shapely.Polygon(v)
        if not _inside_closed(domain, v, geom, tol):
            warnings.warn(f"candidate {i} is not inside the closed domain, skipped")
            continue
        best = max(best, ring_length(v))
    return best
