"""Assignment phase: optimal PoI-to-agent association weights for fixed positions.

For each PoI the unit of membership mass is split over the agents that sense
it.  Coincident agents (distance below ``TOL_ZERO``) take the whole row,
split uniformly; otherwise the weight of agent j falls off with the inverse
ratio of squared distances, truncated to zero outside the sensing radius.

The per-row arithmetic lives in :func:`row_memberships` on plain floats with
a fixed summation order, so that a distributed computation assembling the
same distance values reproduces the centralized result bit for bit.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, IdleAgent, UncoveredPoI

TOL_ZERO = 1e-12  # coincidence detection, below geometric resolution at unit scale

# A DistanceTable is a plain (n, r) float array of pairwise PoI-agent distances.
DistanceTable = np.ndarray


def _as_points(arr, name: str) -> np.ndarray:
    out = np.asarray(arr, dtype=float)
    if out.ndim != 2 or out.shape[0] == 0 or out.shape[1] not in (2, 3):
        raise DimensionMismatch(f"{name} must be a non-empty (k, d) array with d in (2, 3)")
    if not np.all(np.isfinite(out)):
        raise ValueError(f"{name} contains non-finite coordinates")
    return out


def pair_distance(p, x) -> float:
    """Euclidean distance between two points.

    Uses the same elementwise operations as :func:`compute_distances` so a
    single pair evaluates to the identical float.
    """
    diff = np.asarray(p, dtype=float) - np.asarray(x, dtype=float)
    return float(np.sqrt((diff * diff).sum(axis=-1)))


def compute_distances(pois, agents) -> DistanceTable:
    """Pairwise PoI-agent distance table, entry (i, j) = ||p_i - x_j||."""
    pois = _as_points(pois, "pois")
    agents = _as_points(agents, "agents")
    if pois.shape[1] != agents.shape[1]:
        raise DimensionMismatch(
            f"pois are {pois.shape[1]}-d but agents are {agents.shape[1]}-d"
        )
    diff = pois[:, None, :] - agents[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


@dataclass(frozen=True)
class MembershipMatrix:
    """Association weights u[i, j] in [0, 1] together with the fuzzifier used.

    Rows sum to one; a column of all zeros is inadmissible; entries are zero
    for every pair out of sensing range.
    """

    entries: np.ndarray
    m: int

    @property
    def n_pois(self) -> int:
        return self.entries.shape[0]

    @property
    def n_agents(self) -> int:
        return self.entries.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self.entries[:, j]


def _check_fuzzifier(m) -> int:
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 2:
        raise ValueError(f"fuzzifier must be an integer >= 2, got {m!r}")
    return int(m)


def row_memberships(deltas: Sequence[float], m: int) -> list[float]:
    """Membership weights for one PoI over the agents that sense it.

    ``deltas`` holds the distances to the sensing agents only, in agent-index
    order.  Summation order is fixed; both the centralized and the
    message-passing paths call this exact routine.
    """
    coincident = [t for t, d in enumerate(deltas) if d < TOL_ZERO]
    if coincident:
        share = 1.0 / len(coincident)
        return [share if t in coincident else 0.0 for t in range(len(deltas))]
    exponent = 2.0 / (m - 1)
    out = []
    for dj in deltas:
        total = 0.0
        for dh in deltas:
            total += (dj / dh) ** exponent
        out.append(1.0 / total)
    return out


def assign_memberships(dist: DistanceTable, rho: float, m: int = 2) -> MembershipMatrix:
    """Optimal memberships for fixed positions.

    Raises UncoveredPoI if some PoI has no agent within rho, and IdleAgent if
    some agent ends up with an all-zero column (possible when its only sensed
    PoIs are taken entirely by coincident agents).
    """
    m = _check_fuzzifier(m)
    dist = np.asarray(dist, dtype=float)
    if dist.ndim != 2:
        raise DimensionMismatch("distance table must be 2-dimensional")
    n, r = dist.shape
    entries = np.zeros((n, r))
    for i in range(n):
        sensing = np.flatnonzero(dist[i] <= rho)
        if sensing.size == 0:
            raise UncoveredPoI(i)
        row = row_memberships([float(dist[i, j]) for j in sensing], m)
        entries[i, sensing] = row
    idle = np.flatnonzero(~(entries > 0).any(axis=0))
    if idle.size:
        raise IdleAgent(int(idle[0]))
    return MembershipMatrix(entries, m)


def truncation_report(U: MembershipMatrix, dist: DistanceTable, rho: float) -> list[tuple[int, int]]:
    """All (PoI, agent) pairs whose association is truncated to exactly zero."""
    dist = np.asarray(dist, dtype=float)
    if dist.shape != U.entries.shape:
        raise DimensionMismatch(
            f"distance table shape {dist.shape} != membership shape {U.entries.shape}"
        )
    rows, cols = np.nonzero(dist > rho)
    return list(zip(rows.tolist(), cols.tolist()))
