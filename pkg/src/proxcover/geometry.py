"""Euclidean primitives: closed balls and metric projections.

Points are plain float ndarrays of length d in {2, 3}.  The one non-trivial
operation is the metric projection onto a non-empty intersection of
equal-radius balls, computed with Dykstra's alternating-projection scheme.
"""

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import nnls

from .errors import ConvergenceFailure, DimensionMismatch

TOL_FEAS = 1e-8        # feasibility slack on ball membership
TOL_ACTIVE = 1e-6      # boundary-activity detection
DYKSTRA_TOL = 1e-12    # successive-iterate displacement threshold
DYKSTRA_MAX_SWEEPS = 10_000


def as_point(coords) -> np.ndarray:
    """Coerce to a finite float vector of dimension 2 or 3."""
    p = np.asarray(coords, dtype=float)
    if p.ndim != 1 or p.shape[0] not in (2, 3):
        raise DimensionMismatch(f"expected a point in R^2 or R^3, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError(f"point has non-finite coordinates: {p}")
    return p


@dataclass(frozen=True)
class Ball:
    """Closed ball of positive radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"ball radius must be positive and finite, got {self.radius}")

    def contains(self, v, tol: float = 0.0) -> bool:
        return float(np.linalg.norm(as_point(v) - self.center)) <= self.radius + tol


class BallIntersection:
    """Non-empty intersection of equal-radius balls.

    Non-emptiness is certified by a witness point supplied at construction;
    the witness must lie in every ball.  Heterogeneous radii are rejected.
    """

    def __init__(self, balls: Sequence[Ball], witness):
        balls = tuple(balls)
        if not balls:
            raise ValueError("intersection requires at least one ball")
        radius = balls[0].radius
        dim = balls[0].center.shape[0]
        for b in balls[1:]:
            if b.radius != radius:
                raise ValueError("all balls must share the same radius")
            if b.center.shape[0] != dim:
                raise DimensionMismatch("ball centers have mixed dimensions")
        witness = as_point(witness)
        if witness.shape[0] != dim:
            raise DimensionMismatch("witness dimension does not match the balls")
        centers = np.array([b.center for b in balls])
        dists = np.linalg.norm(witness - centers, axis=1)
        if np.any(dists > radius):
            worst = int(np.argmax(dists))
            raise ValueError(
                f"witness is outside ball {worst} "
                f"(distance {dists[worst]:.6g} > radius {radius:.6g})"
            )
        self.balls = balls
        self.centers = centers
        self.radius = radius
        self.witness = witness

    def __len__(self):
        return len(self.balls)


class ProjectionResult(NamedTuple):
    point: np.ndarray
    active: list[int]


def project_ball(ball: Ball, v) -> np.ndarray:
    """Metric projection onto a closed ball.

    Returns alpha*v + (1-alpha)*center with alpha = radius/dist for exterior
    points and alpha = 1 (the point itself) otherwise.
    """
    v = as_point(v)
    dist = float(np.linalg.norm(v - ball.center))
    if dist <= ball.radius:
        return v.copy()
    alpha = ball.radius / dist
    return alpha * v + (1.0 - alpha) * ball.center


def is_in_intersection(region: BallIntersection, v, tol: float) -> bool:
    """True iff v lies within tol of every ball of the region."""
    v = as_point(v)
    dists = np.linalg.norm(v - region.centers, axis=1)
    return bool(np.all(dists <= region.radius + tol))


def _dykstra(centers: np.ndarray, radius: float, v: np.ndarray,
             max_sweeps: int, tol: float) -> tuple[np.ndarray, bool]:
    """Dykstra's scheme over a list of equal-radius balls.

    Cyclic corrected projections; the iterate tends to the metric projection
    of v onto the intersection.  Stops when a full sweep moves the iterate
    less than tol; returns the iterate and whether that threshold was met.
    """
    k = centers.shape[0]
    x = v.copy()
    corrections = np.zeros_like(centers)
    for _ in range(max_sweeps):
        x_prev = x.copy()
        for l in range(k):
            y = x + corrections[l]
            offset = y - centers[l]
            dist = float(np.linalg.norm(offset))
            if dist > radius:
                x = centers[l] + (radius / dist) * offset
            else:
                x = y
            corrections[l] = y - x
        if float(np.linalg.norm(x - x_prev)) < tol:
            return x, True
    return x, False


def _ball_point(center: np.ndarray, radius: float, v: np.ndarray) -> np.ndarray:
    """Closest point of one ball's closure to v (v itself when inside)."""
    offset = v - center
    dist = float(np.linalg.norm(offset))
    if dist <= radius:
        return v.copy()
    return center + (radius / dist) * offset


def _pair_points_2d(a: np.ndarray, b: np.ndarray, radius: float) -> list[np.ndarray]:
    """Intersection points of two equal-radius circles."""
    gap = float(np.linalg.norm(b - a))
    if gap == 0.0 or gap > 2.0 * radius:
        return []
    half_sq = radius * radius - (gap / 2.0) ** 2
    if half_sq < 0.0:
        return []
    h = np.sqrt(half_sq)
    mid = (a + b) / 2.0
    axis = (b - a) / gap
    perp = np.array([-axis[1], axis[0]])
    return [mid + h * perp, mid - h * perp]


def _pair_point_3d(a: np.ndarray, b: np.ndarray, radius: float,
                   v: np.ndarray) -> list[np.ndarray]:
    """Closest point to v on the circle where two equal-radius spheres meet."""
    gap = float(np.linalg.norm(b - a))
    if gap == 0.0 or gap > 2.0 * radius:
        return []
    half_sq = radius * radius - (gap / 2.0) ** 2
    if half_sq < 0.0:
        return []
    h = np.sqrt(half_sq)
    mid = (a + b) / 2.0
    axis = (b - a) / gap
    radial = (v - mid) - np.dot(v - mid, axis) * axis
    norm = float(np.linalg.norm(radial))
    if norm < 1e-15:
        # v on the axis: every circle point is equidistant, pick one.
        probe = np.array([1.0, 0.0, 0.0])
        if abs(np.dot(probe, axis)) > 0.9:
            probe = np.array([0.0, 1.0, 0.0])
        radial = probe - np.dot(probe, axis) * axis
        norm = float(np.linalg.norm(radial))
    return [mid + (h / norm) * radial]


def _triple_points_3d(a: np.ndarray, b: np.ndarray, c: np.ndarray,
                      radius: float) -> list[np.ndarray]:
    """Common points of three equal-radius spheres."""
    # Differencing the sphere equations leaves two planes; their line is
    # intersected with the first sphere.
    rows = np.array([2.0 * (b - a), 2.0 * (c - a)])
    rhs = np.array([float(b @ b - a @ a), float(c @ c - a @ a)])
    try:
        base, *_ = np.linalg.lstsq(rows, rhs, rcond=None)
    except np.linalg.LinAlgError:
        return []
    if float(np.linalg.norm(rows @ base - rhs)) > 1e-9:
        return []
    direction = np.cross(rows[0], rows[1])
    norm = float(np.linalg.norm(direction))
    if norm < 1e-12:
        return []
    direction = direction / norm
    offset = base - a
    proj = float(np.dot(offset, direction))
    disc = radius * radius - float(offset @ offset) + proj * proj
    if disc < 0.0:
        return []
    root = np.sqrt(disc)
    return [base + (-proj + root) * direction, base + (-proj - root) * direction]


_CANDIDATE_SLACK = 1e-10   # feasibility tolerance for candidate points
_CONE_RESIDUAL_TOL = 1e-9  # certification of the normal-cone inclusion


def _best_feasible(candidates: list[np.ndarray] | list, centers: np.ndarray,
                   radius: float, v: np.ndarray,
                   best: np.ndarray | None, best_dist: float):
    if not candidates:
        return best, best_dist
    stack = np.asarray(candidates)
    margins = np.linalg.norm(stack[:, None, :] - centers[None, :, :], axis=-1) - radius
    feasible = margins.max(axis=1) <= _CANDIDATE_SLACK
    if not feasible.any():
        return best, best_dist
    stack = stack[feasible]
    dists = np.linalg.norm(stack - v, axis=1)
    k = int(np.argmin(dists))
    if float(dists[k]) < best_dist:
        return stack[k], float(dists[k])
    return best, best_dist


def _certify_projection(centers: np.ndarray, radius: float, v: np.ndarray,
                        z: np.ndarray) -> bool:
    """Sufficient optimality test: v - z lies in the active normal cone."""
    gap = v - z
    if float(np.linalg.norm(gap)) <= _CONE_RESIDUAL_TOL:
        return True
    z_dists = np.linalg.norm(z - centers, axis=1)
    active = np.flatnonzero(np.abs(z_dists - radius) <= TOL_ACTIVE)
    if active.size == 0:
        return False
    normals = (z - centers[active]).T
    _, residual = nnls(normals, gap)
    return float(residual) <= _CONE_RESIDUAL_TOL * max(1.0, float(np.linalg.norm(gap)))


def _exact_projection(centers: np.ndarray, radius: float, v: np.ndarray,
                      seed: np.ndarray, witness: np.ndarray) -> np.ndarray:
    """Exact projection of an exterior point by candidate enumeration.

    Any ball active at the projection satisfies |dist(v, center) - radius|
    <= dist(v, region); feasible points bound that distance from above, so
    known feasible points (the region witness, the alternating-projection
    iterate when feasible, then each accepted candidate) progressively
    shrink the eligible set.  The projection itself lies on the boundaries
    of at most d balls and every such point over the eligible set is
    available in closed form, so the closest feasible candidate is the
    projection.
    """
    d = centers.shape[1]
    v_dists = np.linalg.norm(v - centers, axis=1)
    best, best_dist = _best_feasible([seed, witness], centers, radius, v,
                                     None, np.inf)

    def eligible(bound: float) -> np.ndarray:
        return np.flatnonzero(np.abs(v_dists - radius) <= bound + 1e-12)

    idx = eligible(best_dist)
    singles = [_ball_point(centers[i], radius, v) for i in idx]
    best, best_dist = _best_feasible(singles, centers, radius, v, best, best_dist)

    idx = eligible(best_dist)
    pairs: list[np.ndarray] = []
    for s, i in enumerate(idx):
        for j in idx[s + 1:]:
            if d == 2:
                pairs.extend(_pair_points_2d(centers[i], centers[j], radius))
            else:
                pairs.extend(_pair_point_3d(centers[i], centers[j], radius, v))
    best, best_dist = _best_feasible(pairs, centers, radius, v, best, best_dist)

    if d == 3:
        idx = eligible(best_dist)
        triples: list[np.ndarray] = []
        for s, i in enumerate(idx):
            for t, j in enumerate(idx[s + 1:], start=s + 1):
                for k in idx[t + 1:]:
                    triples.extend(
                        _triple_points_3d(centers[i], centers[j], centers[k], radius))
        best, best_dist = _best_feasible(triples, centers, radius, v, best, best_dist)

    if best is None:
        raise ConvergenceFailure("no feasible candidate found for the projection")
    return best


def project_intersection(region: BallIntersection, v, *,
                         max_sweeps: int = DYKSTRA_MAX_SWEEPS,
                         tol: float = DYKSTRA_TOL) -> ProjectionResult:
    """Metric projection onto the region, plus the boundary-active ball indices.

    Points already inside the region are returned unchanged with an empty
    active set.  Otherwise Dykstra's scheme runs on the violated balls only
    (balls that turn out violated at the candidate projection are added and
    the scheme restarts; a constraint that never binds cannot change the
    projection).  Where ball boundaries cross at a shallow angle the
    per-sweep displacement collapses orders of magnitude before the iterate
    reaches the projection, so the iterate is not trusted as-is: it seeds an
    exact closed-form candidate enumeration, and the winner must pass a
    normal-cone optimality check.  ConvergenceFailure signals a result that
    could not be certified (a numerical pathology, not infeasibility).
    """
    v = as_point(v)
    if v.shape[0] != region.centers.shape[1]:
        raise DimensionMismatch("point dimension does not match the region")
    radius = region.radius
    centers = region.centers
    dists = np.linalg.norm(v - centers, axis=1)
    if np.all(dists <= radius):
        return ProjectionResult(v.copy(), [])

    working = set(np.flatnonzero(dists > radius).tolist())
    while True:
        idx = sorted(working)
        z, settled = _dykstra(centers[idx], radius, v, max_sweeps, tol)
        if not settled:
            break
        z_dists = np.linalg.norm(z - centers, axis=1)
        violated = set(np.flatnonzero(z_dists > radius + TOL_FEAS).tolist())
        if violated <= working:
            break
        working |= violated
    z = _exact_projection(centers, radius, v, z, region.witness)
    if not _certify_projection(centers, radius, v, z):
        raise ConvergenceFailure(
            "projection candidate failed the normal-cone optimality check"
        )
    z_dists = np.linalg.norm(z - centers, axis=1)
    active = np.flatnonzero(np.abs(z_dists - radius) <= TOL_ACTIVE).tolist()
    return ProjectionResult(z, active)
