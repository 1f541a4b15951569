"""Rank-metric intersecting codes: fields, codes, geometry, properties, search."""

from .codes import RankCode, codeword_matrix, rank_of, support
from .constructions import (
    club_code,
    default_gabidulin,
    extend_to_intersecting,
    gabidulin,
    named_code,
    simplex,
    system_code,
)
from .fields import ExtField, make_extension_field
from .geometry import (
    QSystem,
    SpannabilityWitness,
    hyperplane_weight_partition_solution,
    is_2_spannable,
    is_scattered,
    is_scattered_wrt_hyperplanes,
    point_weight_spectrum,
    q_system_of,
    rank_weight_duality_check,
    weight_of,
)
from .linalg import FqSubspace
from .properties import (
    FeasibilityVerdict,
    PropertyReport,
    descendants,
    evaluate_properties,
    feasibility,
    is_21_separating,
    is_21_separating_set,
    is_2_rank_frameproof,
    is_hamming_intersecting,
    is_minimal,
    is_mrd,
    is_rank_intersecting,
    mrd_label,
    singleton_bound,
)
from .search import (
    SearchConfig,
    SearchReport,
    canonical_system,
    extended_candidate,
    run_search,
    search_space_size,
    spannability_witness,
)

__version__ = "0.1.0"
