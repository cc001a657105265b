"""Numerical checks: weak* discrepancies, set distances, heuristic advisors."""

from .advisor import exceptional_orbit_heuristic, julia_raster, precondition_advisor
from .caruso import beta_scan, caruso_intersection_check, caruso_rasters, scan_csv
from .report import Check, ConvergenceReport
from .sets import (
    backward_invariance_check,
    directed_hausdorff,
    fixed_point_cloud,
    hausdorff_distance,
    orbit_to_julia_distance,
)
from .weak import (
    TestFunctionFamily,
    cesaro_convergence_check,
    integrate,
    invariance_residual,
    pairwise_discrepancies,
    weak_star_discrepancy,
)

__all__ = [
    "Check",
    "ConvergenceReport",
    "TestFunctionFamily",
    "backward_invariance_check",
    "beta_scan",
    "caruso_intersection_check",
    "caruso_rasters",
    "cesaro_convergence_check",
    "directed_hausdorff",
    "exceptional_orbit_heuristic",
    "fixed_point_cloud",
    "hausdorff_distance",
    "integrate",
    "invariance_residual",
    "julia_raster",
    "orbit_to_julia_distance",
    "pairwise_discrepancies",
    "precondition_advisor",
    "scan_csv",
    "weak_star_discrepancy",
]
