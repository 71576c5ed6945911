"""Nash and efficient-Nash solvers for min-aggregated games on finite
meet-semilattices, with exact rational arithmetic throughout."""

from .errors import (
    BudgetExceededError,
    InvariantViolationError,
    NotQuasiLeontiefError,
    SolverError,
    UnknownElementError,
    ValidationError,
)
from .game import (
    DEFAULT_BUDGET,
    EfficientResponses,
    GameSpec,
    GlobalQLPayoffs,
    IndividualQLPayoffs,
    IterationResult,
    NashCertificate,
    PlayerEfficiency,
    PlayerNashStatus,
    characterize_nash,
    decoupled_nash,
    decoupled_projections,
    efficiency_report,
    efficient_best_responses,
    efficient_for_player,
    efficient_nash_enumerate,
    is_efficient_nash,
    is_nash,
    iterate_efficient_responses,
    maximal_nash,
    nash_enumerate,
    normalize_nash,
    opponents_value,
    own_strategy_irrelevance,
    section,
)
from .leontief import (
    MinAggregate,
    QLCertificate,
    TabulatedFunction,
    min_aggregate,
    to_rational,
)
from .semilattice import (
    AxiomReport,
    AxiomViolation,
    FiniteInfSemilattice,
    InfConvexityReport,
    ProductSemilattice,
    check_meet_table,
    is_comprehensive,
    is_inf_convex,
    maximal_elements,
    product,
    replace_coordinate,
)
from .specfile import (
    GridSpec,
    LoadedGame,
    PiecewiseLinear,
    ValidationOutcome,
    discretize,
    parse_spec,
    parse_spec_dict,
    refine_spec,
    validate_spec,
    write_spec,
)

__version__ = "0.1.0"

__all__ = [
    "AxiomReport",
    "AxiomViolation",
    "BudgetExceededError",
    "DEFAULT_BUDGET",
    "EfficientResponses",
    "FiniteInfSemilattice",
    "GameSpec",
    "GlobalQLPayoffs",
    "GridSpec",
    "IndividualQLPayoffs",
    "InfConvexityReport",
    "InvariantViolationError",
    "IterationResult",
    "LoadedGame",
    "MinAggregate",
    "NashCertificate",
    "NotQuasiLeontiefError",
    "PiecewiseLinear",
    "PlayerEfficiency",
    "PlayerNashStatus",
    "ProductSemilattice",
    "QLCertificate",
    "SolverError",
    "TabulatedFunction",
    "UnknownElementError",
    "ValidationError",
    "ValidationOutcome",
    "characterize_nash",
    "check_meet_table",
    "decoupled_nash",
    "decoupled_projections",
    "discretize",
    "efficiency_report",
    "efficient_best_responses",
    "efficient_for_player",
    "efficient_nash_enumerate",
    "is_comprehensive",
    "is_efficient_nash",
    "is_inf_convex",
    "is_nash",
    "iterate_efficient_responses",
    "maximal_elements",
    "maximal_nash",
    "min_aggregate",
    "nash_enumerate",
    "normalize_nash",
    "opponents_value",
    "own_strategy_irrelevance",
    "parse_spec",
    "parse_spec_dict",
    "product",
    "refine_spec",
    "replace_coordinate",
    "section",
    "to_rational",
    "validate_spec",
    "write_spec",
]
