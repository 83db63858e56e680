"""Refinement phase: per-agent optimal relocation for fixed memberships.

The new position is the membership-weighted centroid projected onto the
intersection of sensing balls around the positively-associated PoIs.  Each
relocation ships with a certificate of global optimality: multipliers are
recovered from the convex-combination structure of the projection (a small
least-squares solve on the boundary-active balls followed by a rank-one
Sherman-Morrison update) and checked against stationarity, sign,
feasibility and complementary slackness tolerances.
"""

from dataclasses import dataclass

import numpy as np

from . import geometry
from .errors import CertificateFailure, EmptyAdmissibleSet, ZeroMass
from .geometry import Ball, BallIntersection, TOL_FEAS, project_intersection

LAMBDA_TOL = 1e-12           # multiplier nonnegativity slack
STATIONARITY_TOL = 1e-8
COMPLEMENTARITY_TOL = 1e-8
SINGLETON_TOL = 1e-9         # pairwise center distance within this of 2*rho
DESCENT_SLACK = 1e-10        # allowed objective increase of a refinement step

_SNAP_MAX_PASSES = 64


@dataclass(frozen=True)
class KktCertificate:
    """Multipliers and residuals witnessing optimality of a relocation.

    ``lambdas`` has one entry per PoI, zero off the active set.  When the
    admissible region degenerates to a single point the optimality theorem
    does not apply; the certificate is then flagged ``slater_degenerate``
    and carries zero multipliers.
    """

    lambdas: np.ndarray
    stationarity_residual: float
    max_feasibility_violation: float
    max_complementarity_violation: float
    u_hat: float
    active: tuple[int, ...] = ()
    mu: np.ndarray | None = None
    mu_bar: float | None = None
    slater_degenerate: bool = False


def weighted_centroid(pois, memberships, m: int = 2) -> np.ndarray:
    """Membership-weighted mean position, weights u^m."""
    pois = np.asarray(pois, dtype=float)
    u = np.asarray(memberships, dtype=float)
    w = u ** m
    total = float(w.sum())
    if total == 0.0:
        raise ZeroMass("all memberships are zero")
    return (w[:, None] * pois).sum(axis=0) / total


def _snap_into_balls(z: np.ndarray, centers: np.ndarray, rho: float) -> np.ndarray:
    """Pull z the last few ulps inside every ball.

    The iterative projection leaves residuals around 1e-12; the next
    assignment tests sensing with an exact <= rho comparison, so support
    PoIs must end exactly in range or coverage could silently drop.  Each
    pass projects onto the violated balls with a marginally shrunken
    radius; displacement stays far below every certificate tolerance.
    """
    shrink = 1e-15
    for _ in range(_SNAP_MAX_PASSES):
        dists = np.linalg.norm(z - centers, axis=1)
        violated = np.flatnonzero(dists > rho)
        if violated.size == 0:
            return z
        target = rho * (1.0 - shrink)
        for l in violated:
            offset = z - centers[l]
            d = float(np.linalg.norm(offset))
            if d > target:
                z = centers[l] + (target / d) * offset
        shrink = min(shrink * 2.0, 1e-11)
    return z


def _is_singleton_region(sup_pois: np.ndarray, current: np.ndarray, rho: float) -> bool:
    """Detect a pinched admissible region (two support balls tangent).

    Any tangent pair must sit near the sensing boundary of the current
    position, so only those few PoIs need a pairwise scan.
    """
    if sup_pois.shape[0] < 2:
        return False
    near = sup_pois[np.linalg.norm(sup_pois - current, axis=1) >= rho - geometry.TOL_ACTIVE]
    if near.shape[0] < 2:
        return False
    gaps = np.linalg.norm(near[:, None, :] - near[None, :, :], axis=-1)
    return bool(np.max(gaps) >= 2.0 * rho - SINGLETON_TOL)


def _certificate(pois, u, m, rho, z, lambdas, *, u_hat, active=(), mu=None,
                 mu_bar=None, degenerate=False) -> KktCertificate:
    support = np.flatnonzero(u > 0)
    sup_dists = np.linalg.norm(z - pois[support], axis=1)
    feas = max(0.0, float(np.max(sup_dists) - rho)) if np.isfinite(rho) else 0.0
    weights = u[support] ** m + lambdas[support]
    stat_vec = (weights[:, None] * (pois[support] - z)).sum(axis=0)
    stationarity = float(np.linalg.norm(stat_vec))
    if np.isfinite(rho):
        slack = sup_dists * sup_dists - rho * rho
        comp_terms = np.where(lambdas[support] == 0.0, 0.0, lambdas[support] * slack)
        complementarity = float(np.max(np.abs(comp_terms))) if comp_terms.size else 0.0
    else:
        complementarity = 0.0
    return KktCertificate(
        lambdas=lambdas,
        stationarity_residual=stationarity,
        max_feasibility_violation=feas,
        max_complementarity_violation=complementarity,
        u_hat=u_hat,
        active=tuple(int(a) for a in active),
        mu=mu,
        mu_bar=mu_bar,
        slater_degenerate=degenerate,
    )


def refine_position(pois, memberships, m: int, rho: float,
                    current) -> tuple[np.ndarray, KktCertificate]:
    """Globally optimal relocation of one agent for its fixed membership column.

    ``current`` is the agent's present position; it certifies that the
    admissible region (intersection of rho-balls around the supported PoIs)
    is non-empty.  Returns the new position and its optimality certificate.
    An infinite rho bypasses the constraints entirely (plain centroid).

    Raises EmptyAdmissibleSet when ``current`` itself is out of range of a
    supported PoI (a caller bug) and CertificateFailure when the recovered
    multipliers violate the optimality conditions beyond tolerance.
    """
    pois = np.asarray(pois, dtype=float)
    u = np.asarray(memberships, dtype=float)
    n = pois.shape[0]
    xhat = weighted_centroid(pois, u, m)
    u_hat = float((u ** m).sum())
    zeros = np.zeros(n)

    if not np.isfinite(rho):
        return xhat, _certificate(pois, u, m, rho, xhat, zeros, u_hat=u_hat)

    support = np.flatnonzero(u > 0)
    sup_pois = pois[support]
    current = geometry.as_point(current)
    if np.any(np.linalg.norm(current - sup_pois, axis=1) > rho):
        raise EmptyAdmissibleSet(
            "current position is out of range of a supported PoI"
        )

    if np.all(np.linalg.norm(xhat - sup_pois, axis=1) <= rho):
        # Centroid already admissible: unconstrained optimum, all multipliers vanish.
        return xhat, _certificate(pois, u, m, rho, xhat, zeros, u_hat=u_hat)

    if _is_singleton_region(sup_pois, current, rho):
        # Tangent support balls pin the agent where it stands.
        z = current.copy()
        cert = _certificate(pois, u, m, rho, z, zeros, u_hat=u_hat, degenerate=True)
        return z, cert

    region = BallIntersection([Ball(p, rho) for p in sup_pois], witness=current)
    z, active_local = project_intersection(region, xhat)
    z = _snap_into_balls(z, sup_pois, rho)

    if not active_local:
        raise CertificateFailure(
            "projection of an exterior centroid returned no active ball"
        )
    act = np.asarray(active_local, dtype=int)
    basis = (sup_pois[act] - xhat).T                      # (d, a)
    mu, *_ = np.linalg.lstsq(basis, z - xhat, rcond=None)
    mu_bar = 1.0 - float(mu.sum())
    if np.any(mu < -LAMBDA_TOL) or mu_bar <= 0.0:
        raise CertificateFailure(
            f"convex-combination recovery failed: mu={mu}, mu_bar={mu_bar}"
        )
    ones = np.ones(act.size)
    lam_active = u_hat * (np.eye(act.size) + np.outer(mu, ones) / mu_bar) @ mu
    lambdas = zeros.copy()
    lambdas[support[act]] = lam_active

    cert = _certificate(pois, u, m, rho, z, lambdas, u_hat=u_hat,
                        active=support[act], mu=mu, mu_bar=mu_bar)
    _enforce(cert)
    return z, cert


def _enforce(cert: KktCertificate) -> None:
    if cert.stationarity_residual >= STATIONARITY_TOL:
        raise CertificateFailure(
            f"stationarity residual {cert.stationarity_residual:.3e} exceeds tolerance"
        )
    if float(np.min(cert.lambdas)) < -LAMBDA_TOL:
        raise CertificateFailure(
            f"negative multiplier {float(np.min(cert.lambdas)):.3e}"
        )
    if cert.max_complementarity_violation >= COMPLEMENTARITY_TOL:
        raise CertificateFailure(
            f"complementarity violation {cert.max_complementarity_violation:.3e}"
        )
    if cert.max_feasibility_violation > TOL_FEAS:
        raise CertificateFailure(
            f"feasibility violation {cert.max_feasibility_violation:.3e}"
        )


def kkt_report(pois, memberships, m: int, rho: float, x_star,
               cert: KktCertificate) -> dict:
    """Recomputed optimality conditions for a proposed relocation.

    Returns each condition's measured value and whether it passes; the
    overall verdict is the conjunction.
    """
    pois = np.asarray(pois, dtype=float)
    u = np.asarray(memberships, dtype=float)
    x_star = np.asarray(x_star, dtype=float)
    lam = np.asarray(cert.lambdas, dtype=float)
    dists = np.linalg.norm(pois - x_star, axis=1)

    support = np.flatnonzero(u > 0)
    feas = float(np.max(dists[support] - rho)) if (support.size and np.isfinite(rho)) else 0.0

    lam_min = float(np.min(lam)) if lam.size else 0.0

    if np.isfinite(rho):
        slack = dists * dists - rho * rho
        comp_terms = np.where(lam == 0.0, 0.0, lam * slack)
        comp = float(np.max(np.abs(comp_terms))) if comp_terms.size else 0.0
    else:
        comp = 0.0

    in_range = dists <= rho
    weights = u[in_range] ** m + lam[in_range]
    stat_vec = (weights[:, None] * (pois[in_range] - x_star)).sum(axis=0)
    stationarity = float(np.linalg.norm(stat_vec))

    checks = {
        "feasibility": (feas, feas <= TOL_FEAS),
        "multiplier_sign": (lam_min, lam_min >= -LAMBDA_TOL),
        "complementarity": (comp, comp < COMPLEMENTARITY_TOL),
        "stationarity": (stationarity, stationarity < STATIONARITY_TOL),
    }
    return {
        "values": {k: v for k, (v, _) in checks.items()},
        "passed": {k: ok for k, (_, ok) in checks.items()},
        "ok": all(ok for _, ok in checks.values()),
    }


def verify_kkt(pois, memberships, m: int, rho: float, x_star,
               cert: KktCertificate) -> bool:
    """True iff x_star and the certificate satisfy every optimality condition."""
    return kkt_report(pois, memberships, m, rho, x_star, cert)["ok"]
