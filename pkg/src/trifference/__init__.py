"""Trifferent codes: constructions, exact search, derived graphs, and bounds."""

from .bounds import (
    BoundReport,
    bound_report,
    deficit,
    deficit_upper,
    elias_bound,
    elias_bound_log2,
    kurz_bound,
    rate,
    rho_b,
    tb_upper,
    transfer_bound,
    transfer_bound_log2,
    zarankiewicz_bound,
    zarankiewicz_edge_bound,
)
from .constructions import (
    affine_plane,
    one_bounded,
    recursive_construction,
    triple_construction,
)
from .core import (
    Code,
    Codeword,
    NotTrifferentError,
    TriffParseError,
    VerificationResult,
    add_codewords,
    count_A_r,
    format_triff,
    is_trifferent_triple,
    parse_triff,
    project,
    prune,
    read_triff,
    shift,
    shift_density_sample,
    verify_trifferent,
    write_triff,
)
from .graphs import (
    DerivedGraph,
    build_graph_r2,
    build_graph_r3,
    contains_kst,
    graph_summary,
    random_bipartition_check,
)
from .search import (
    SearchCertificate,
    max_r_bounded,
    max_trifferent,
    oracle_max,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "Code",
    "Codeword",
    "DerivedGraph",
    "NotTrifferentError",
    "SearchCertificate",
    "TriffParseError",
    "VerificationResult",
    "add_codewords",
    "affine_plane",
    "bound_report",
    "build_graph_r2",
    "build_graph_r3",
    "contains_kst",
    "count_A_r",
    "deficit",
    "deficit_upper",
    "elias_bound",
    "elias_bound_log2",
    "format_triff",
    "graph_summary",
    "is_trifferent_triple",
    "kurz_bound",
    "max_r_bounded",
    "max_trifferent",
    "one_bounded",
    "oracle_max",
    "parse_triff",
    "project",
    "prune",
    "random_bipartition_check",
    "rate",
    "read_triff",
    "recursive_construction",
    "rho_b",
    "shift",
    "shift_density_sample",
    "tb_upper",
    "transfer_bound",
    "transfer_bound_log2",
    "triple_construction",
    "verify_trifferent",
    "write_triff",
    "zarankiewicz_bound",
    "zarankiewicz_edge_bound",
    "__version__",
]
