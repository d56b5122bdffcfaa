"""Release planning around value dependencies.

Selects the subset of software requirements with the highest penalty-adjusted
economic value under budget, precedence/conflict, and per-value lower-bound
constraints. Value dependencies between requirements are modeled as signed
fuzzy graphs, one per value type; their max-min walk closures yield the
influence matrices that drive the penalties.
"""

from .catalog import DEFAULT_VALUE_NAMES, default_value_types
from .document import (
    DocumentError,
    ParseError,
    ValidationFailure,
    machine_json,
    parse_project,
    serialize_project,
)
from .estimators import InfluenceTransformer, ReleasePlanner
from .graph import (
    NEGATIVE,
    POSITIVE,
    ExplicitDependency,
    InfluenceMatrix,
    PathError,
    SignedClosure,
    TypedValueGraph,
    influence_matrix,
    oracle_closure,
    path_quality,
    path_strength,
    signed_closure,
)
from .lp import IlpModel, LinearRow, build_ilp_model, export_lp
from .model import (
    CONFLICTS,
    REQUIRES,
    PrecedencePair,
    Project,
    Requirement,
    ValueType,
    Violation,
    check_project,
    validate_project,
)
from .planner import (
    INFEASIBLE,
    OPTIMAL,
    TIMEOUT_NO_INCUMBENT,
    TIMEOUT_WITH_INCUMBENT,
    ConstraintViolation,
    ReleasePlan,
    SolveReport,
    check_feasibility,
    evaluate_plan,
    oracle_solve,
    penalty,
    project_influences,
    solve_exact,
)

__version__ = "0.1.0"

__all__ = [
    "CONFLICTS",
    "DEFAULT_VALUE_NAMES",
    "DocumentError",
    "ExplicitDependency",
    "IlpModel",
    "INFEASIBLE",
    "InfluenceMatrix",
    "InfluenceTransformer",
    "LinearRow",
    "NEGATIVE",
    "OPTIMAL",
    "ParseError",
    "PathError",
    "POSITIVE",
    "PrecedencePair",
    "Project",
    "ReleasePlan",
    "ReleasePlanner",
    "Requirement",
    "REQUIRES",
    "SignedClosure",
    "SolveReport",
    "TIMEOUT_NO_INCUMBENT",
    "TIMEOUT_WITH_INCUMBENT",
    "TypedValueGraph",
    "ValidationFailure",
    "ValueType",
    "Violation",
    "ConstraintViolation",
    "build_ilp_model",
    "check_feasibility",
    "check_project",
    "default_value_types",
    "evaluate_plan",
    "export_lp",
    "influence_matrix",
    "machine_json",
    "oracle_closure",
    "oracle_solve",
    "parse_project",
    "path_quality",
    "path_strength",
    "penalty",
    "project_influences",
    "serialize_project",
    "signed_closure",
    "solve_exact",
    "validate_project",
    "__version__",
]
