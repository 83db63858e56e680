"""Brute-force reference solvers for small instances.

Both oracles combine a dense grid search with a derivative-free
Nelder-Mead polish and share no code with the analytic solvers; they exist
to validate the closed-form assignment and the projected-centroid
refinement on instances small enough to enumerate.
"""

import numpy as np
from scipy.optimize import minimize

from .errors import EmptyAdmissibleSet, OracleScaleExceeded, UncoveredPoI

_PENALTY = 1e9


def _row_objective(u: np.ndarray, deltas: np.ndarray, m: int) -> float:
    return float((u ** m * deltas * deltas).sum())


def brute_memberships(dist_row, rho: float, m: int = 2,
                      grid_step: float = 1e-3) -> np.ndarray:
    """Minimize one PoI's assignment cost over the support-restricted simplex.

    Dense grid over the memberships of the sensing agents, then a
    Nelder-Mead polish with a hard penalty outside the simplex.  Limited to
    three agents.
    """
    deltas = np.asarray(dist_row, dtype=float)
    r = deltas.shape[0]
    if r > 3:
        raise OracleScaleExceeded(f"membership oracle supports r <= 3, got {r}")
    support = np.flatnonzero(deltas <= rho)
    if support.size == 0:
        raise UncoveredPoI(0)
    d_sup = deltas[support]
    k = support.size

    def embed(u_sup: np.ndarray) -> np.ndarray:
        full = np.zeros(r)
        full[support] = u_sup
        return full

    if k == 1:
        return embed(np.array([1.0]))

    # Grid over the k-1 free coordinates; the last coordinate closes the simplex.
    ticks = np.arange(0.0, 1.0 + grid_step / 2, grid_step)
    if k == 2:
        frees = ticks[:, None]
    else:
        a, b = np.meshgrid(ticks, ticks, indexing="ij")
        frees = np.column_stack([a.ravel(), b.ravel()])
        frees = frees[frees.sum(axis=1) <= 1.0 + 1e-12]
    last = 1.0 - frees.sum(axis=1)
    candidates = np.column_stack([frees, last])
    costs = (candidates ** m * (d_sup * d_sup)).sum(axis=1)
    best = candidates[int(np.argmin(costs))]

    def penalized(free: np.ndarray) -> float:
        u_sup = np.append(free, 1.0 - free.sum())
        if np.any(u_sup < 0.0):
            return _PENALTY + float(np.abs(u_sup[u_sup < 0.0]).sum())
        return _row_objective(u_sup, d_sup, m)

    result = minimize(penalized, best[:-1], method="Nelder-Mead",
                      options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
    polished = np.append(result.x, 1.0 - result.x.sum())
    if penalized(result.x) <= float(np.min(costs)):
        return embed(polished)
    return embed(best)


def brute_position(pois, memberships, m: int, rho: float,
                   grid_step: float = 1e-3) -> np.ndarray:
    """Minimize one agent's relocation cost over its admissible region, d=2.

    The admissible region sits inside [max_i p - rho, min_i p + rho] on each
    axis; a dense grid over that box keeps only feasible points, and the
    best one seeds a Nelder-Mead polish that rejects infeasible moves.
    """
    pois = np.asarray(pois, dtype=float)
    u = np.asarray(memberships, dtype=float)
    if pois.shape[1] != 2:
        raise OracleScaleExceeded("position oracle supports d=2 only")
    support = np.flatnonzero(u > 0)
    sup_pois = pois[support]
    w = u[support] ** m

    lo = sup_pois.max(axis=0) - rho
    hi = sup_pois.min(axis=0) + rho
    if np.any(lo > hi):
        raise EmptyAdmissibleSet("support balls share no axis-aligned extent")

    xs = np.arange(lo[0], hi[0] + grid_step / 2, grid_step)
    ys = np.arange(lo[1], hi[1] + grid_step / 2, grid_step)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    points = np.column_stack([gx.ravel(), gy.ravel()])
    gaps = np.linalg.norm(points[:, None, :] - sup_pois[None, :, :], axis=-1)
    feasible = points[(gaps <= rho).all(axis=1)]
    if feasible.shape[0] == 0:
        raise EmptyAdmissibleSet("no grid point lies in every support ball")

    sq = ((feasible[:, None, :] - sup_pois[None, :, :]) ** 2).sum(axis=-1)
    costs = (w * sq).sum(axis=1)
    best_idx = int(np.argmin(costs))
    best = feasible[best_idx]
    best_cost = float(costs[best_idx])

    incumbent = {"point": best.copy(), "cost": best_cost}

    def penalized(z: np.ndarray) -> float:
        d = np.linalg.norm(z - sup_pois, axis=1)
        overshoot = float(np.max(d - rho))
        if overshoot > 0.0:
            return _PENALTY + overshoot
        cost = float((w * d * d).sum())
        if cost < incumbent["cost"]:
            incumbent["point"] = z.copy()
            incumbent["cost"] = cost
        return cost

    minimize(penalized, best, method="Nelder-Mead",
             options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 2000})
    return incumbent["point"]
