"""Exact enumeration and unimodular classification of empty Delta-modular simplices."""

from .corner_ilp import (
    CornerSolution,
    GroupTable,
    corner_minimum,
    corner_minimum_bruteforce,
    corner_minimum_excluding_vertex,
    count_minimum_attainers,
    group_table,
    reduce_residue,
)
from .enumeration import (
    FAMILY_EMPTY,
    FAMILY_LATTICE,
    CandidateRecord,
    EmptyRange,
    LatticeCandidate,
    c0_candidates,
    divisor_tuples,
    enumerate_H,
    enumerate_c,
    enumerate_families,
    enumerate_h,
)
from .equivalence import (
    EquivalenceResult,
    EquivalentSet,
    check_equivalence,
    dedup_families,
    equivalent_normalized_set,
    reduced_permutations,
)
from .errors import (
    DeltaSimplexError,
    InvalidSystemError,
    InvariantViolation,
    NotASimplexError,
    PreconditionError,
    RadiusError,
    RankError,
    ScaleExceededError,
    ShapeError,
    SingularityError,
)
from .exact_linalg import (
    adjugate,
    delta_value,
    det,
    hnf,
    identity,
    is_unimodular,
    matrix,
    max_minors,
    solve_rational,
    unimodular_inverse,
    vector,
)
from .normal_form import (
    NormalizedSystem,
    canonical_key,
    key_tuple,
    normalize,
    normalized_from_dict,
    normalized_to_dict,
    opposite_vertex,
    parse_canonical_key,
    primitivize,
    reduce_rhs,
    validate_normalized,
)
from .simplex_model import (
    AffineUnimodularMap,
    InequalitySystem,
    SimplexMeta,
    apply_map,
    compose,
    count_integer_points_bruteforce,
    identity_map,
    inverse,
    system_from_dict,
    system_to_dict,
    validate_simplex,
)
from .atlas_cli import enumerate_atlas, eq1_bound, read_atlas, record_from_dict, record_to_dict, write_atlas

__version__ = "0.1.0"
