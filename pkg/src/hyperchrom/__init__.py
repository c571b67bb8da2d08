"""hyperchrom: edge colouring of bounded-codegree hypergraphs.

Exact small-scale machinery around the chromatic index of hypergraphs whose
pairwise codegree is bounded by t: generators for the extremal families
(projective planes, near-pencils, t-folds), certified edge orderings and
partitions, matching-based and pipeline colouring procedures, exact
oracles, and classification of the instances attaining e(H) = t*max|N[v]|.

All numeric comparisons behind certificates use exact rationals; square and
fourth roots enter only through rational enclosures.
"""

from .characterize import (
    Classification,
    NotApplicable,
    NotExtremal,
    TFoldNearPencil,
    TFoldProjectivePlane,
    classify_extremal,
    debruijn_erdos_check,
    intersecting_bound,
    motzkin_check,
)
from .extremal import (
    ComplementMatching,
    ExtremalReport,
    UsefulFamily,
    colour_extremal,
    colour_from_matching,
    find_useful_family,
    is_t_useful,
    maximal_complement_matching,
    useful_cover_colour,
)
from .generators import (
    GeneratorParams,
    from_cliques,
    near_pencil,
    projective_plane,
    random_bounded_codegree,
    t_fold,
)
from .hypercore import (
    ColouringFailure,
    DegreeStats,
    Graph,
    Hypergraph,
    Neighbourhoods,
    Predicates,
    ValidationReport,
    canonical_form,
    degree_stats,
    dual,
    is_isomorphic,
    line_graph,
    neighbourhoods,
    predicates,
    restrict_and_induce,
    subhypergraph,
    uniform_lists,
    validate_colouring,
    volume,
)
from .oracle import (
    BudgetExceeded,
    ListColourResult,
    OracleBudget,
    enumerate_hypergraphs,
    exact_chromatic_index,
    exact_list_colourable,
    kernel_name,
    maximum_complement_matching,
)
from .ordering import (
    EdgeOrdering,
    PartitionCertificate,
    ReorderOutcome,
    forward_degrees,
    greedy_list_colour,
    partition_extremal,
    partition_stability,
    reorder,
    size_monotone_ordering,
)
from .pipeline import (
    PipelineParams,
    PipelineRun,
    ReservedColours,
    SizeSplit,
    StageRecord,
    colour_main,
    colour_small,
    colour_sparse_block,
    colour_stability,
    reserve_colours,
    split_by_size,
)

__version__ = "0.1.0"

__all__ = [
    "Hypergraph",
    "Graph",
    "DegreeStats",
    "Predicates",
    "Neighbourhoods",
    "ValidationReport",
    "ColouringFailure",
    "degree_stats",
    "volume",
    "dual",
    "line_graph",
    "predicates",
    "neighbourhoods",
    "validate_colouring",
    "restrict_and_induce",
    "subhypergraph",
    "uniform_lists",
    "canonical_form",
    "is_isomorphic",
    "GeneratorParams",
    "projective_plane",
    "near_pencil",
    "t_fold",
    "from_cliques",
    "random_bounded_codegree",
    "EdgeOrdering",
    "ReorderOutcome",
    "PartitionCertificate",
    "forward_degrees",
    "size_monotone_ordering",
    "reorder",
    "partition_stability",
    "partition_extremal",
    "greedy_list_colour",
    "ComplementMatching",
    "UsefulFamily",
    "ExtremalReport",
    "is_t_useful",
    "maximal_complement_matching",
    "colour_from_matching",
    "useful_cover_colour",
    "find_useful_family",
    "colour_extremal",
    "OracleBudget",
    "BudgetExceeded",
    "ListColourResult",
    "kernel_name",
    "exact_chromatic_index",
    "exact_list_colourable",
    "maximum_complement_matching",
    "enumerate_hypergraphs",
    "SizeSplit",
    "ReservedColours",
    "PipelineParams",
    "StageRecord",
    "PipelineRun",
    "split_by_size",
    "reserve_colours",
    "colour_small",
    "colour_sparse_block",
    "colour_stability",
    "colour_main",
    "TFoldProjectivePlane",
    "TFoldNearPencil",
    "NotExtremal",
    "NotApplicable",
    "Classification",
    "motzkin_check",
    "intersecting_bound",
    "classify_extremal",
    "debruijn_erdos_check",
    "__version__",
]
