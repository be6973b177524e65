"""Root systems, Weyl groups, thickenings, polyhedral Finsler geometry on
model flats and flag dynamics in SL(n, R)."""
from .errors import ToolkitError
from .finsler import (HoroPointFlat, check_metric_positivity, compactified_coords,
                      compactified_limit, cone_membership, diamond_membership,
                      finsler_distance_flat, horofunction_flat)
from .polytope import build_unit_ball, dual_ball, verify_cube_structure
from .rootsys import FinslerFunctional, build_root_system, fundamental_vertices, reflect
from .symspace import (Flag, SymPoint, cartan_projection, finsler_distance_sym, flag_limit,
                       limit_set_sample, psl3_domain_membership, regularity_stats,
                       relative_position_flags)
from .thickening import (Thickening, complement, enumerate_balanced, metric_thickening,
                         validate_thickening)
from .weyl import FaceType, WeylGroup, enumerate_weyl

__version__ = "0.1.0"

__all__ = [
    "ToolkitError", "HoroPointFlat", "check_metric_positivity", "compactified_coords",
    "compactified_limit", "cone_membership", "diamond_membership", "finsler_distance_flat",
    "horofunction_flat", "build_unit_ball", "dual_ball", "verify_cube_structure",
    "FinslerFunctional", "build_root_system", "fundamental_vertices", "reflect", "Flag",
    "SymPoint", "cartan_projection", "finsler_distance_sym", "flag_limit", "limit_set_sample",
    "psl3_domain_membership", "regularity_stats", "relative_position_flags", "Thickening",
    "complement", "enumerate_balanced", "metric_thickening", "validate_thickening", "FaceType",
    "WeylGroup", "enumerate_weyl",
]
