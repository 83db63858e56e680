"""Synchronous-round distributed execution of the coverage algorithm.

Each round every agent measures its own distances to the PoIs in sensing
range, broadcasts them to its communication neighbors, and rebuilds the
membership row of every sensed PoI from the gathered reports.  With the
communication threshold at least twice the sensing radius, any two agents
sensing a common PoI are neighbors, so each agent provably receives every
distance its computation needs; the harness asserts this every round.

Refinement is local and reuses the centralized code, so the produced trace
is bit-for-bit identical to the centralized solver on the same scenario.
The global stopping test is evaluated by the simulation harness, not by an
in-network protocol.
"""

from dataclasses import dataclass

import numpy as np

from .errors import IdleAgent, InsufficientInformation, InvalidThreshold, UncoveredPoI
from .membership import MembershipMatrix, compute_distances, pair_distance, row_memberships
from .solver import Scenario, SolverConfig, Trace, run_loop


@dataclass(frozen=True)
class SensingGraph:
    """Bipartite PoI-agent adjacency: edge iff the distance is within rho."""

    adjacency: np.ndarray  # (n, r) bool
    rho: float


@dataclass(frozen=True)
class CommGraph:
    """Agent-agent adjacency: edge iff the distance is within theta."""

    adjacency: np.ndarray  # (r, r) bool
    theta: float


@dataclass(frozen=True)
class Message:
    """One broadcast: the sender's sensed PoIs and measured distances."""

    sender: int
    round: int
    payload: tuple[tuple[int, float], ...]


@dataclass(frozen=True)
class MessageLogEntry:
    round: int
    sender: int
    receiver: int
    payload_size: int


def build_graphs(pois, agents, rho: float, theta: float) -> tuple[SensingGraph, CommGraph]:
    """Sensing and communication graphs for the given positions.

    Raises InvalidThreshold when theta < 2*rho; with the threshold honored,
    agents sensing a common PoI are always within communication range.
    """
    if theta < 2.0 * rho:
        raise InvalidThreshold(f"theta={theta} is below 2*rho={2.0 * rho}")
    dist = compute_distances(pois, agents)
    sensing = dist <= rho
    agents = np.asarray(agents, dtype=float)
    gaps = np.linalg.norm(agents[:, None, :] - agents[None, :, :], axis=-1)
    comm = gaps <= theta
    co_sensing = sensing.T @ sensing > 0
    assert not np.any(co_sensing & ~comm), \
        "co-sensing agents ended up outside communication range"
    return SensingGraph(sensing, rho), CommGraph(comm, theta)


def _exchange_round(pois: np.ndarray, positions: np.ndarray, round_idx: int,
                    config: SolverConfig,
                    log: list[MessageLogEntry]) -> MembershipMatrix:
    """One assignment round realized through local sensing plus broadcasts."""
    n = pois.shape[0]
    r = positions.shape[0]
    sensing_graph, comm_graph = build_graphs(pois, positions, config.rho, config.theta)
    for i in range(n):
        if not sensing_graph.adjacency[i].any():
            raise UncoveredPoI(i)

    own_payloads = []
    for j in range(r):
        payload = tuple(
            (i, d) for i in range(n)
            if (d := pair_distance(pois[i], positions[j])) <= config.rho
        )
        own_payloads.append(payload)

    inboxes: list[list[Message]] = [[] for _ in range(r)]
    for j in range(r):
        message = Message(sender=j, round=round_idx, payload=own_payloads[j])
        for h in range(r):
            if h != j and comm_graph.adjacency[j, h]:
                inboxes[h].append(message)
                log.append(MessageLogEntry(round_idx, j, h, len(message.payload)))

    entries = np.zeros((n, r))
    for j in range(r):
        known: dict[int, dict[int, float]] = {}
        for i, d in own_payloads[j]:
            known.setdefault(i, {})[j] = d
        for message in inboxes[j]:
            for i, d in message.payload:
                known.setdefault(i, {})[message.sender] = d
        for i, _ in own_payloads[j]:
            needed = np.flatnonzero(sensing_graph.adjacency[i])
            reports = known[i]
            missing = [int(h) for h in needed if int(h) not in reports]
            if missing:
                raise InsufficientInformation(
                    f"agent {j} lacks distances from agents {missing} for PoI {i}"
                )
            contributors = sorted(reports)
            row = row_memberships([reports[h] for h in contributors], config.m)
            entries[i, j] = row[contributors.index(j)]

    idle = np.flatnonzero(~(entries > 0).any(axis=0))
    if idle.size:
        raise IdleAgent(int(idle[0]))
    return MembershipMatrix(entries, config.m)


def run_distributed(scenario: Scenario, config: SolverConfig) -> Trace:
    """Distributed solve; the trace matches the centralized run bit for bit.

    The returned trace carries the per-round message log.
    """
    log: list[MessageLogEntry] = []

    def step(pois, positions, iteration):
        return _exchange_round(pois, positions, iteration, config, log)

    return run_loop(scenario, config, step, message_log=log)
