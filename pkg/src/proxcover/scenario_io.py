"""Scenario files: JSON with coordinates as decimal strings.

A file holds either explicit coordinates or a generator block, never both.
Coordinates are serialized as shortest round-trip decimal strings so a file
parses to identical floats on any platform.

Generated scenarios draw PoIs uniformly over the region; initial agents go
on an even grid, the standard spread deployment that gives small sensing
radii a realistic chance of covering every PoI.  Draws are retried with a
fresh sub-seed until validation passes, up to a retry cap.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import GenerationFailure, ScenarioFormatError
from .solver import Scenario, SolverConfig, validate_scenario

DEFAULT_REGION = ((0.0, 1.0), (0.0, 1.0))
GENERATION_RETRY_CAP = 1000


@dataclass(frozen=True)
class GeneratorSpec:
    """Random-instance recipe: n PoIs and r agents uniform over a box."""

    n: int
    r: int
    seed: int
    region: tuple[tuple[float, float], ...] = DEFAULT_REGION

    def __post_init__(self):
        if self.n < 1 or self.r < 1:
            raise ScenarioFormatError("generator needs n >= 1 and r >= 1")
        if len(self.region) not in (2, 3):
            raise ScenarioFormatError("generator region must be 2- or 3-dimensional")
        for lo, hi in self.region:
            if not lo < hi:
                raise ScenarioFormatError(f"degenerate region axis [{lo}, {hi}]")

    @property
    def dimension(self) -> int:
        return len(self.region)


def _coords_to_strings(arr: np.ndarray) -> list[list[str]]:
    return [[repr(float(v)) for v in row] for row in arr]


def _coords_from_strings(rows, name: str) -> np.ndarray:
    try:
        return np.array([[float(v) for v in row] for row in rows], dtype=float)
    except (TypeError, ValueError) as err:
        raise ScenarioFormatError(f"unparseable {name} coordinates: {err}") from err


def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "dimension": scenario.dimension,
        "pois": _coords_to_strings(scenario.pois),
        "agents": _coords_to_strings(scenario.agents),
    }


def scenario_from_dict(data: dict) -> Scenario | GeneratorSpec:
    if not isinstance(data, dict) or "dimension" not in data:
        raise ScenarioFormatError("scenario file must be an object with a 'dimension' field")
    d = data["dimension"]
    if d not in (2, 3):
        raise ScenarioFormatError(f"dimension must be 2 or 3, got {d!r}")
    has_coords = "pois" in data or "agents" in data
    has_generator = "generate" in data
    if has_coords == has_generator:
        raise ScenarioFormatError(
            "scenario file needs either explicit coordinates or a generator block"
        )
    if has_generator:
        g = data["generate"]
        region = g.get("region")
        if region is None:
            region = tuple((0.0, 1.0) for _ in range(d))
        else:
            region = tuple(
                (float(lo), float(hi)) for lo, hi in region
            )
        if len(region) != d:
            raise ScenarioFormatError("generator region does not match the dimension")
        try:
            return GeneratorSpec(n=int(g["n"]), r=int(g["r"]),
                                 seed=int(g.get("seed", 0)), region=region)
        except KeyError as err:
            raise ScenarioFormatError(f"generator block missing field {err}") from err
    pois = _coords_from_strings(data["pois"], "PoI")
    agents = _coords_from_strings(data["agents"], "agent")
    if pois.ndim != 2 or pois.shape[1] != d or agents.ndim != 2 or agents.shape[1] != d:
        raise ScenarioFormatError("coordinate rows do not match the declared dimension")
    return Scenario(pois=pois, agents=agents)


def load_scenario(path) -> Scenario | GeneratorSpec:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ScenarioFormatError(f"invalid JSON in {path}: {err}") from err
    return scenario_from_dict(data)


def save_scenario(path, scenario: Scenario) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(scenario), indent=2) + "\n")


def grid_deployment(r: int, region) -> np.ndarray:
    """Initial agent positions: centers of the first r cells of an even grid."""
    region = tuple(region)
    d = len(region)
    per_axis = 1
    while per_axis ** d < r:
        per_axis += 1
    axes = []
    for lo, hi in region:
        step = (hi - lo) / per_axis
        axes.append(lo + step * (np.arange(per_axis) + 0.5))
    mesh = np.meshgrid(*axes, indexing="ij")
    cells = np.column_stack([m.ravel() for m in mesh])
    return cells[:r]


def generate_scenario(spec: GeneratorSpec, rho: float, theta: float | None = None,
                      retry_cap: int = GENERATION_RETRY_CAP) -> Scenario:
    """Draw scenarios until one validates under the given radius."""
    lows = np.array([lo for lo, _ in spec.region])
    highs = np.array([hi for _, hi in spec.region])
    agents = grid_deployment(spec.r, spec.region)
    probe = SolverConfig(rho=rho, theta=theta)
    for attempt in range(retry_cap):
        rng = np.random.default_rng([spec.seed, attempt])
        pois = rng.uniform(lows, highs, size=(spec.n, spec.dimension))
        scenario = Scenario(pois=pois, agents=agents)
        if not validate_scenario(scenario, probe):
            return scenario
    raise GenerationFailure(
        f"no valid draw for n={spec.n}, r={spec.r}, rho={rho} in {retry_cap} attempts"
    )
