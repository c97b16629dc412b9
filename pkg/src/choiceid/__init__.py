"""Exact identifiability analysis for latent-type models of aggregate choice."""

from __future__ import annotations

from .errors import (
    ChoiceIdError,
    DimensionError,
    EnumerationRefused,
    InconsistentSystemError,
    IntractableError,
    ValidationError,
)
from .matching import (
    Matching,
    SquarePatternStats,
    enumerate_matchings,
    hall_deficient_set,
    max_matching,
    permanent,
    square_stats,
    verdict_general,
)
from .model import (
    ChoiceTensor,
    ConcreteMatrix,
    MultiOccasionModel,
    ObservedShares,
    PossibilityPattern,
    TypeDistribution,
    TypeStateModel,
    aggregate_shares,
    assemble_matrix,
    build_tensor,
    validate,
)
from .nullspace import (
    SplitVector,
    nullspace,
    nullspace_intersection,
    typical_split_test,
    verdict_nullspace,
)
from .recovery import (
    SolutionSet,
    montecarlo_rank,
    random_instance,
    solve_distribution,
    solve_state_weights,
)
from .tensor import (
    MatchabilityIndex,
    distinguishability_probe,
    kruskal_rank_sampled,
    matchability_index,
    typestate_kruskal_index,
    verdict_three_occasion,
    verdict_typestate_three_occasion,
)
from .typestate import (
    DetPolynomial,
    StateMatching,
    det_polynomial,
    enumerate_state_matchings,
    reassignment_check,
    separating_states,
    verdict_typestate_generic,
    verdict_typestate_global,
)
from .verdict import Klass, Verdict

__version__ = "0.1.0"

__all__ = [
    "ChoiceIdError",
    "ChoiceTensor",
    "ConcreteMatrix",
    "DetPolynomial",
    "DimensionError",
    "EnumerationRefused",
    "InconsistentSystemError",
    "IntractableError",
    "Klass",
    "MatchabilityIndex",
    "Matching",
    "MultiOccasionModel",
    "ObservedShares",
    "PossibilityPattern",
    "SolutionSet",
    "SplitVector",
    "SquarePatternStats",
    "StateMatching",
    "TypeDistribution",
    "TypeStateModel",
    "ValidationError",
    "Verdict",
    "aggregate_shares",
    "assemble_matrix",
    "build_tensor",
    "det_polynomial",
    "distinguishability_probe",
    "enumerate_matchings",
    "enumerate_state_matchings",
    "hall_deficient_set",
    "kruskal_rank_sampled",
    "matchability_index",
    "max_matching",
    "montecarlo_rank",
    "nullspace",
    "nullspace_intersection",
    "permanent",
    "random_instance",
    "reassignment_check",
    "separating_states",
    "solve_distribution",
    "solve_state_weights",
    "square_stats",
    "typestate_kruskal_index",
    "typical_split_test",
    "validate",
    "verdict_general",
    "verdict_nullspace",
    "verdict_three_occasion",
    "verdict_typestate_generic",
    "verdict_typestate_global",
    "verdict_typestate_three_occasion",
]
