"""Positivity intervals of symmetric pencils ``A + λB`` and QPs with one quadratic equality constraint."""

from .config import DEFAULT_TOL, OracleConfig, ToleranceConfig
from .krein import (
    KreinSpace,
    ProductKreinSpace,
    RegularizationProblem,
    SubspaceClassification,
    admissible_interval,
    build_L,
    classify_range_of_L,
    krein_adjoint,
    normal_operator,
)
from .pencil import (
    Endpoint,
    EndpointAnalysis,
    IntervalKind,
    Pencil,
    PositivityInterval,
    congruence_reduction,
    endpoint_analysis,
    interior_nullspace,
    min_eig_at,
    neutral_positivity_certificate,
    positivity_interval,
    seminorm,
    simultaneous_diagonalization,
)
from .qp1eqc import Certificate, QP1EQCProblem, QPSolution, solve, solve_regularized

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "Certificate",
    "Endpoint",
    "EndpointAnalysis",
    "IntervalKind",
    "KreinSpace",
    "OracleConfig",
    "Pencil",
    "PositivityInterval",
    "ProductKreinSpace",
    "QP1EQCProblem",
    "QPSolution",
    "RegularizationProblem",
    "SubspaceClassification",
    "ToleranceConfig",
    "admissible_interval",
    "build_L",
    "classify_range_of_L",
    "congruence_reduction",
    "endpoint_analysis",
    "interior_nullspace",
    "krein_adjoint",
    "min_eig_at",
    "neutral_positivity_certificate",
    "normal_operator",
    "positivity_interval",
    "seminorm",
    "simultaneous_diagonalization",
    "solve",
    "solve_regularized",
]
