"""Proximity-constrained C-means coverage of discrete points of interest.

Mobile agents with a limited sensing radius cover a finite set of fixed
points.  Assignment splits each point's unit of membership over the agents
that sense it; refinement relocates every agent to its membership-weighted
centroid projected onto the intersection of sensing balls, certified
optimal through explicit multipliers.  The two phases alternate until no
agent moves.
"""

from .baseline import run_cmeans
from .distsim import (
    CommGraph,
    Message,
    SensingGraph,
    build_graphs,
    run_distributed,
)
from .errors import (
    CertificateFailure,
    ConvergenceFailure,
    CoverageError,
    DimensionMismatch,
    EmptyAdmissibleSet,
    GenerationFailure,
    IdleAgent,
    InsufficientDistinctPoIs,
    InsufficientInformation,
    InvalidThreshold,
    OracleScaleExceeded,
    ScenarioFormatError,
    UncoveredPoI,
    ZeroMass,
)
from .geometry import (
    Ball,
    BallIntersection,
    ProjectionResult,
    is_in_intersection,
    project_ball,
    project_intersection,
)
from .membership import (
    DistanceTable,
    MembershipMatrix,
    assign_memberships,
    compute_distances,
    truncation_report,
)
from .oracle import brute_memberships, brute_position
from .refinement import (
    KktCertificate,
    kkt_report,
    refine_position,
    verify_kkt,
    weighted_centroid,
)
from .scenario_io import (
    GeneratorSpec,
    generate_scenario,
    load_scenario,
    save_scenario,
)
from .solver import (
    FixpointReport,
    IterationRecord,
    Scenario,
    SolverConfig,
    Trace,
    audit_constraints,
    audit_descent,
    diagnose_fixpoint,
    objective,
    run,
    validate_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BallIntersection",
    "CertificateFailure",
    "CommGraph",
    "ConvergenceFailure",
    "CoverageError",
    "DimensionMismatch",
    "DistanceTable",
    "EmptyAdmissibleSet",
    "FixpointReport",
    "GenerationFailure",
    "GeneratorSpec",
    "IdleAgent",
    "InsufficientDistinctPoIs",
    "InsufficientInformation",
    "InvalidThreshold",
    "IterationRecord",
    "KktCertificate",
    "MembershipMatrix",
    "Message",
    "OracleScaleExceeded",
    "ProjectionResult",
    "Scenario",
    "ScenarioFormatError",
    "SensingGraph",
    "SolverConfig",
    "Trace",
    "UncoveredPoI",
    "ZeroMass",
    "assign_memberships",
    "audit_constraints",
    "audit_descent",
    "brute_memberships",
    "brute_position",
    "build_graphs",
    "compute_distances",
    "diagnose_fixpoint",
    "generate_scenario",
    "is_in_intersection",
    "kkt_report",
    "load_scenario",
    "objective",
    "project_ball",
    "project_intersection",
    "refine_position",
    "run",
    "run_cmeans",
    "run_distributed",
    "save_scenario",
    "truncation_report",
    "validate_scenario",
    "verify_kkt",
    "weighted_centroid",
]
