"""Unconstrained fuzzy C-means baseline.

Runs the exact constrained pipeline with an infinite sensing radius, so
every agent senses every PoI and the centroid update needs no projection.
Keeping one code path makes comparisons against the constrained runs fair:
for any finite rho at least as large as the instance diameter the two
solvers traverse identical iterates.
"""

from .solver import Scenario, Trace, baseline_config, run


def run_cmeans(scenario: Scenario, m: int = 2, epsilon: float = 1e-6,
               max_iters: int = 500, seed: int = 0) -> Trace:
    """Classical C-means alternation with the shared stopping rule."""
    return run(scenario, baseline_config(m=m, epsilon=epsilon,
                                         max_iters=max_iters, seed=seed))
