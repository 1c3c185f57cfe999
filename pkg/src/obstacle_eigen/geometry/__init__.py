"""Domains, obstacles, distance fields and Minkowski-content estimates."""

from .distance import ScalarField, grid_for_box, segment_distance
from .io import (domain_from_dict, domain_to_dict, obstacle_from_dict,
                 obstacle_to_dict)
from .metric import (convex_hull, convex_perimeter_bound, hausdorff_distance,
                     segment_approximation)
from .minkowski import (MinkowskiEstimate, default_eps_schedule, dilation_area,
                        distance_field, outer_minkowski_content, sublevel_area)
from .obstacle import Obstacle
from .shapes import Circle, Domain, FourierShape, Polygon, boundary_curvature

__all__ = [
    "Circle", "Domain", "FourierShape", "MinkowskiEstimate", "Obstacle", "Polygon",
    "ScalarField", "boundary_curvature", "convex_hull", "convex_perimeter_bound",
    "default_eps_schedule", "dilation_area", "distance_field", "domain_from_dict",
    "domain_to_dict", "grid_for_box", "hausdorff_distance", "obstacle_from_dict",
    "obstacle_to_dict", "outer_minkowski_content", "segment_approximation",
    "segment_distance", "sublevel_area",
]
