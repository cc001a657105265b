"""Julia sets of finitely generated Moebius semigroups by backward iteration."""

from .full_backward import BudgetExceeded, FullRunConfig, WeightedPointSet, full_backward_measure, pullback_step
from .moebius import MapClass, MoebiusMap, apply, classify, compose, fixed_points, inverse
from .random_backward import ChainConfig, RandomOrbit, empirical_measure, random_backward_orbit, run_ensemble
from .raster import RasterSet, RenderConfig, rasterize, write_image
from .semigroup import GeneratorSet, ProbabilityVector, caruso, inverse_semigroup, load_definition, named_example
from .sphere import INF, chordal_distance

__all__ = [
    "INF",
    "BudgetExceeded",
    "ChainConfig",
    "FullRunConfig",
    "GeneratorSet",
    "MapClass",
    "MoebiusMap",
    "ProbabilityVector",
    "RandomOrbit",
    "RasterSet",
    "RenderConfig",
    "WeightedPointSet",
    "apply",
    "caruso",
    "chordal_distance",
    "classify",
    "compose",
    "empirical_measure",
    "fixed_points",
    "full_backward_measure",
    "inverse",
    "inverse_semigroup",
    "load_definition",
    "named_example",
    "pullback_step",
    "random_backward_orbit",
    "rasterize",
    "run_ensemble",
    "write_image",
]

__version__ = "0.1.0"
