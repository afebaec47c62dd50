"""Multi-start constrained search for large-growth matrices."""

from .pyramid import (
    PyramidCandidate,
    pyramid_from_matrix,
    pyramid_residual,
    pyramid_size,
    random_cp_start,
    var_index,
)
from .optimizer import (
    OptimizerOptions,
    SearchConfig,
    multistart_search,
    optimize_growth,
)

__all__ = [
    "PyramidCandidate",
    "pyramid_from_matrix",
    "pyramid_residual",
    "pyramid_size",
    "random_cp_start",
    "var_index",
    "OptimizerOptions",
    "SearchConfig",
    "multistart_search",
    "optimize_growth",
]
