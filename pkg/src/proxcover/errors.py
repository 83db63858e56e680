"""Exception types shared across the package.

Some of these double as *violation values*: ``validate_scenario`` returns
instances instead of raising them, so the classes implement structural
equality (same class, same args).
"""


class CoverageError(Exception):
    """Base class for all domain errors.

    ``iteration`` is attached by the solver loop when an error surfaces
    mid-run, so callers can tell at which iteration a configuration broke.
    """

    iteration: int | None = None

    def __eq__(self, other):
        return type(self) is type(other) and self.args == other.args

    def __hash__(self):
        return hash((type(self).__name__, self.args))

    def __repr__(self):
        args = ", ".join(repr(a) for a in self.args)
        return f"{type(self).__name__}({args})"


class DimensionMismatch(CoverageError):
    """Point collections do not share a common dimension d in {2, 3}."""


class UncoveredPoI(CoverageError):
    """PoI ``index`` has no agent within sensing range."""

    def __init__(self, index: int):
        super().__init__(index)
        self.index = index


class IdleAgent(CoverageError):
    """Agent ``index`` would receive zero total membership."""

    def __init__(self, index: int):
        super().__init__(index)
        self.index = index


class InsufficientDistinctPoIs(CoverageError):
    """The PoI set has too few distinct positions for the agent count."""


class ZeroMass(CoverageError):
    """A weighted centroid was requested for an all-zero membership column."""


class EmptyAdmissibleSet(CoverageError):
    """The feasible relocation region is empty; signals a caller bug."""


class ConvergenceFailure(CoverageError):
    """An iterative projection scheme did not meet tolerance within its cap."""


class CertificateFailure(CoverageError):
    """Recovered multipliers violate the optimality conditions beyond tolerance."""


class InvalidThreshold(CoverageError):
    """Communication threshold below twice the sensing radius."""


class InsufficientInformation(CoverageError):
    """An agent lacks a distance its membership computation needs."""


class OracleScaleExceeded(CoverageError):
    """Brute-force oracle invoked on an instance too large for grid search."""


class ScenarioFormatError(CoverageError):
    """A scenario file does not match the expected schema."""


class GenerationFailure(CoverageError):
    """Scenario generation exhausted its retry budget without a valid draw."""
