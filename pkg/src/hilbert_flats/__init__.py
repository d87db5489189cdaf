"""Hilbert geometry of properly convex projective domains: metrics, automorphisms,
invariant simplices and the flat torus construction for commuting families."""

from .action import (GroupSpec, OrbitSample, build_group, build_product_example,
                     displacement, face_dynamics_check, hull_inflation_check,
                     is_automorphism, m_r_sample, min_set_sample, orbit,
                     translation_length)
from .domain import (ConvexDomain, ConvexSubset, Face, convex_hull, open_face,
                     properly_embedded)
from .errors import HilbertFlatsError
from .flat import (FlatReport, common_fixed_points, flat_torus_report, min_hull,
                   minimal_simplex_search, rank_certificate)
from .metric import (MetricConfig, center_of_mass, distance_to_subset,
                     geodesic_point, hausdorff_distance, hilbert_distance,
                     neighborhood_contains)
from .projective import (EndomorphismClass, ProjectiveMap, ProjectivePoint,
                         cross_ratio, eigenvalue_moduli, projective_limit)
from .scene import Scene, parse_scene
from .simplex import (SimplexFlat, build_standard_simplex, dist_rd,
                      phi_coordinates, simplex_distance)

__version__ = "0.1.0"

__all__ = [
    "GroupSpec", "OrbitSample", "build_group", "build_product_example", "displacement",
    "face_dynamics_check", "hull_inflation_check", "is_automorphism", "m_r_sample",
    "min_set_sample", "orbit", "translation_length",
    "ConvexDomain", "ConvexSubset", "Face", "convex_hull", "open_face", "properly_embedded",
    "HilbertFlatsError",
    "FlatReport", "common_fixed_points", "flat_torus_report", "min_hull",
    "minimal_simplex_search", "rank_certificate",
    "MetricConfig", "center_of_mass", "distance_to_subset", "geodesic_point",
    "hausdorff_distance", "hilbert_distance", "neighborhood_contains",
    "EndomorphismClass", "ProjectiveMap", "ProjectivePoint", "cross_ratio",
    "eigenvalue_moduli", "projective_limit",
    "Scene", "parse_scene",
    "SimplexFlat", "build_standard_simplex", "dist_rd", "phi_coordinates", "simplex_distance",
]
