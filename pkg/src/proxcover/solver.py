"""Alternating assignment/refinement loop with objective tracking.

Each iteration recomputes the optimal memberships for the current positions
(assignment) and then relocates every agent to its projected weighted
centroid (refinement).  Both phases globally solve their sub-problem, so the
objective never increases across a half-phase; the loop stops once no agent
moves farther than epsilon, or at the iteration cap (reported, not an
error).
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    CoverageError,
    DimensionMismatch,
    IdleAgent,
    InsufficientDistinctPoIs,
    InvalidThreshold,
    UncoveredPoI,
)
from .membership import MembershipMatrix, assign_memberships, compute_distances
from .refinement import KktCertificate, refine_position

MONOTONE_SLACK = 1e-9      # permitted half-phase objective increase
FIXPOINT_TOL = 1e-10


@dataclass(frozen=True)
class Scenario:
    """PoI positions and initial agent positions, shapes (n, d) and (r, d)."""

    pois: np.ndarray
    agents: np.ndarray

    def __post_init__(self):
        pois = np.asarray(self.pois, dtype=float)
        agents = np.asarray(self.agents, dtype=float)
        for name, arr in (("pois", pois), ("agents", agents)):
            if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] not in (2, 3):
                raise DimensionMismatch(f"{name} must be a non-empty (k, d) array, d in (2, 3)")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite coordinates")
        if pois.shape[1] != agents.shape[1]:
            raise DimensionMismatch("pois and agents live in different dimensions")
        object.__setattr__(self, "pois", pois)
        object.__setattr__(self, "agents", agents)

    @property
    def n_pois(self) -> int:
        return self.pois.shape[0]

    @property
    def n_agents(self) -> int:
        return self.agents.shape[0]

    @property
    def dimension(self) -> int:
        return self.pois.shape[1]


@dataclass(frozen=True)
class SolverConfig:
    """Run parameters.

    theta defaults to 2*rho, the smallest communication threshold that lets
    co-sensing agents exchange distances.
    """

    rho: float
    theta: float | None = None
    m: int = 2
    epsilon: float = 1e-6
    max_iters: int = 500
    seed: int = 0

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        theta = 2.0 * self.rho if self.theta is None else float(self.theta)
        if theta < 2.0 * self.rho:
            raise InvalidThreshold(
                f"theta={theta} is below 2*rho={2.0 * self.rho}"
            )
        object.__setattr__(self, "theta", theta)
        if isinstance(self.m, bool) or not isinstance(self.m, (int, np.integer)) or self.m < 2:
            raise ValueError(f"fuzzifier m must be an integer >= 2, got {self.m!r}")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


@dataclass
class IterationRecord:
    """State after one full assignment + refinement iteration.

    ``memberships`` were computed at the pre-move positions;
    ``objective_after_assign`` is the objective there, ``objective`` the
    value after the agents moved.
    """

    iteration: int
    agent_positions: np.ndarray
    memberships: MembershipMatrix
    objective: float
    objective_after_assign: float
    max_displacement: float


@dataclass
class Trace:
    scenario: Scenario
    config: SolverConfig
    iterations: list[IterationRecord]
    converged: bool
    message_log: list | None = None

    @property
    def final_positions(self) -> np.ndarray:
        if not self.iterations:
            return self.scenario.agents
        return self.iterations[-1].agent_positions

    def objective_curve(self) -> list[float]:
        return [rec.objective for rec in self.iterations]

    def half_phase_objectives(self) -> list[float]:
        """Objective values in execution order, two per iteration."""
        out = []
        for rec in self.iterations:
            out.append(rec.objective_after_assign)
            out.append(rec.objective)
        return out


def objective(pois, agents, U: MembershipMatrix, m: int | None = None) -> float:
    """Coverage cost: sum over all pairs of u^m * distance^2."""
    if m is None:
        m = U.m
    dist = compute_distances(pois, agents)
    return objective_from_distances(dist, U, m)


def objective_from_distances(dist: np.ndarray, U: MembershipMatrix,
                             m: int | None = None) -> float:
    if m is None:
        m = U.m
    return float((U.entries ** m * (dist * dist)).sum())


def validate_scenario(scenario: Scenario, config: SolverConfig) -> list[CoverageError]:
    """Initial-configuration checks; an empty list means the instance is runnable.

    Flags PoIs out of every agent's range, agents with no PoI in range, and
    PoI sets with too few distinct positions (duplicates, or fewer distinct
    points than agents).
    """
    violations: list[CoverageError] = []
    dist = compute_distances(scenario.pois, scenario.agents)
    for i in np.flatnonzero(dist.min(axis=1) > config.rho):
        violations.append(UncoveredPoI(int(i)))
    for j in np.flatnonzero(dist.min(axis=0) > config.rho):
        violations.append(IdleAgent(int(j)))
    distinct = np.unique(scenario.pois, axis=0).shape[0]
    if distinct < scenario.n_pois or distinct < scenario.n_agents:
        violations.append(InsufficientDistinctPoIs())
    return violations


MembershipStep = Callable[[np.ndarray, np.ndarray, int], MembershipMatrix]
RefineHook = Callable[[int, int, np.ndarray, KktCertificate], None]


def _centralized_step(pois: np.ndarray, positions: np.ndarray, iteration: int,
                      *, rho: float, m: int) -> MembershipMatrix:
    return assign_memberships(compute_distances(pois, positions), rho, m)


def run_loop(scenario: Scenario, config: SolverConfig,
             membership_step: MembershipStep,
             on_refine: RefineHook | None = None,
             message_log: list | None = None) -> Trace:
    """Shared alternation driver for the centralized and distributed runners."""
    pois = scenario.pois
    x = scenario.agents.copy()
    records: list[IterationRecord] = []
    converged = False
    for k in range(config.max_iters):
        try:
            U = membership_step(pois, x, k)
            dist = compute_distances(pois, x)
            j_assign = objective_from_distances(dist, U, config.m)
            new_x = np.empty_like(x)
            for j in range(scenario.n_agents):
                z, cert = refine_position(pois, U.column(j), config.m,
                                          config.rho, current=x[j])
                new_x[j] = z
                if on_refine is not None:
                    on_refine(k, j, z, cert)
        except CoverageError as err:
            err.iteration = k
            raise
        displacement = float(np.max(np.linalg.norm(new_x - x, axis=1)))
        j_refine = objective(pois, new_x, U, config.m)
        records.append(IterationRecord(
            iteration=k,
            agent_positions=new_x.copy(),
            memberships=U,
            objective=j_refine,
            objective_after_assign=j_assign,
            max_displacement=displacement,
        ))
        x = new_x
        if displacement < config.epsilon:
            converged = True
            break
    return Trace(scenario=scenario, config=config, iterations=records,
                 converged=converged, message_log=message_log)


def run(scenario: Scenario, config: SolverConfig,
        on_refine: RefineHook | None = None) -> Trace:
    """Centralized solve of the coverage problem.

    Precondition: validate_scenario(scenario, config) is empty.  Coverage
    errors raised mid-run carry the iteration index.
    """

    def step(pois, positions, iteration):
        return _centralized_step(pois, positions, iteration,
                                 rho=config.rho, m=config.m)

    return run_loop(scenario, config, step, on_refine=on_refine)


@dataclass
class FixpointReport:
    fixpoint: bool
    max_membership_delta: float
    max_position_delta: float
    tolerance: float = FIXPOINT_TOL


def diagnose_fixpoint(trace: Trace) -> FixpointReport:
    """Check whether re-running either phase would change the final state."""
    if not trace.iterations:
        raise ValueError("trace has no iterations")
    config = trace.config
    pois = trace.scenario.pois
    x = trace.final_positions
    U_last = trace.iterations[-1].memberships
    U_again = assign_memberships(compute_distances(pois, x), config.rho, config.m)
    du = float(np.max(np.abs(U_again.entries - U_last.entries)))
    dx = 0.0
    for j in range(x.shape[0]):
        z, _ = refine_position(pois, U_again.column(j), config.m, config.rho,
                               current=x[j])
        dx = max(dx, float(np.linalg.norm(z - x[j])))
    ok = du <= FIXPOINT_TOL and dx <= FIXPOINT_TOL
    return FixpointReport(fixpoint=ok, max_membership_delta=du, max_position_delta=dx)


def audit_constraints(trace: Trace, row_tol: float = 1e-9) -> list[str]:
    """Problem-constraint violations across every recorded iteration.

    Checks, per iteration: rows sum to one, entries within [0, 1], no
    all-zero column, zero membership beyond the sensing radius at the
    positions the memberships were computed for, and supported PoIs still in
    range after the move.
    """
    problems: list[str] = []
    pois = trace.scenario.pois
    rho = trace.config.rho
    prev = trace.scenario.agents
    for rec in trace.iterations:
        U = rec.memberships.entries
        tag = f"iter {rec.iteration}"
        row_err = float(np.max(np.abs(U.sum(axis=1) - 1.0)))
        if row_err > row_tol:
            problems.append(f"{tag}: row sums off by {row_err:.3e}")
        if float(U.min()) < 0.0 or float(U.max()) > 1.0:
            problems.append(f"{tag}: entries outside [0, 1]")
        if not (U > 0).any(axis=0).all():
            problems.append(f"{tag}: an agent column is all zero")
        dist_pre = compute_distances(pois, prev)
        if np.any(U[dist_pre > rho] != 0.0):
            problems.append(f"{tag}: positive membership beyond the sensing radius")
        dist_post = compute_distances(pois, rec.agent_positions)
        if np.any(dist_post[U > 0] > rho):
            worst = float(np.max(dist_post[U > 0] - rho))
            problems.append(f"{tag}: supported PoI out of range after move by {worst:.3e}")
        prev = rec.agent_positions
    return problems


def audit_descent(trace: Trace, slack: float = MONOTONE_SLACK) -> list[str]:
    """Half-phase objective increases beyond the permitted slack."""
    problems = []
    values = trace.half_phase_objectives()
    for a, b in zip(values, values[1:]):
        if b > a + slack:
            problems.append(f"objective rose from {a!r} to {b!r}")
    return problems


def baseline_config(m: int = 2, epsilon: float = 1e-6, max_iters: int = 500,
                    seed: int = 0) -> SolverConfig:
    """Config with the sensing constraints disabled (infinite radius)."""
    return SolverConfig(rho=math.inf, theta=math.inf, m=m, epsilon=epsilon,
                        max_iters=max_iters, seed=seed)
