"""Exact and floating-point tools for Gaussian-elimination growth factors.

Everything certified bottoms out in exact rational arithmetic: elimination
traces, pivoting predicates, repair of near-pivoted matrices, growth
certificates, and the best-known ledger. Float work (the multistart search,
the rounded-arithmetic simulator) always hands back to the exact layer
before any number is reported.
"""

from .bounds import (
    BoundReport,
    LowerBoundTable,
    PolynomialGrowth,
    WilkinsonGrowth,
    bound_report,
    doubling_limsup,
    extrapolate_linear_constant,
    foster_rook_bound,
    mantissa_requirement,
    max_n_for_mantissa,
    parse_growth_model,
    q_pochhammer,
    rook_exponent,
    table4,
    wilkinson_bound,
)
from .constructions import (
    ComplexGrowthResult,
    EmbeddingPlan,
    binary_embed,
    border,
    cp_kron_h1,
    embedded_trailing_block,
    embedding_error,
    kron,
    rp_kron,
    sylvester_hadamard,
    tornheim_complex3,
    wilkinson_pp_matrix,
)
from .elimination import (
    EliminationTrace,
    PivotStrategy,
    eliminate,
    eliminate_block,
    is_pivoted,
    permute_for_strategy,
    pivot_slack,
    reconstruct,
)
from .errors import PivotGrowthError
from .floatsim import (
    FloatComparison,
    FloatFormat,
    FloatTrace,
    float_eliminate,
    float_vs_exact_report,
    round_to,
    shadow_deviation_bound,
    shadow_matrix,
)
from .rational import RationalMatrix, format_fraction, to_fraction
from .repair import (
    GrowthCertificate,
    cp_repair,
    perturbation_margin,
    repair_degradation_bound,
    rook_repair,
)
from .search import SearchConfig, multistart_search, optimize_growth
from .store import (
    Ledger,
    VerificationReport,
    read_certificate,
    report_table,
    verify_certificate,
    write_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "ComplexGrowthResult",
    "EliminationTrace",
    "EmbeddingPlan",
    "FloatComparison",
    "FloatFormat",
    "FloatTrace",
    "GrowthCertificate",
    "Ledger",
    "LowerBoundTable",
    "PivotGrowthError",
    "PivotStrategy",
    "PolynomialGrowth",
    "RationalMatrix",
    "SearchConfig",
    "VerificationReport",
    "WilkinsonGrowth",
    "binary_embed",
    "border",
    "bound_report",
    "cp_kron_h1",
    "cp_repair",
    "doubling_limsup",
    "eliminate",
    "eliminate_block",
    "embedded_trailing_block",
    "embedding_error",
    "extrapolate_linear_constant",
    "float_eliminate",
    "float_vs_exact_report",
    "format_fraction",
    "foster_rook_bound",
    "is_pivoted",
    "kron",
    "mantissa_requirement",
    "max_n_for_mantissa",
    "multistart_search",
    "optimize_growth",
    "parse_growth_model",
    "permute_for_strategy",
    "perturbation_margin",
    "pivot_slack",
    "q_pochhammer",
    "read_certificate",
    "reconstruct",
    "repair_degradation_bound",
    "report_table",
    "rook_exponent",
    "rook_repair",
    "rp_kron",
    "round_to",
    "shadow_deviation_bound",
    "shadow_matrix",
    "sylvester_hadamard",
    "table4",
    "to_fraction",
    "tornheim_complex3",
    "verify_certificate",
    "wilkinson_bound",
    "wilkinson_pp_matrix",
    "write_certificate",
]
