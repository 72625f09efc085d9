"""Exception hierarchy shared across the package."""


class QFleetError(Exception):
    """Base class for every error raised by this package."""


class StructureMismatchError(QFleetError):
    """A plan's shape does not line up with the instance and scenario set."""


class BadProbabilityError(QFleetError, ValueError):
    """A probability argument falls outside [0, 1]."""


class BadBoundsError(QFleetError, ValueError):
    """Sampling bounds are empty, negative, or outside their legal range."""


class ValidationFailedError(QFleetError):
    """Instance/scenario validation reported violations."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("validation failed: " + "; ".join(self.violations))


class NotOptimalError(QFleetError):
    """A plan was requested from a solution that is not OPTIMAL."""


class ScenarioInfeasibleError(QFleetError):
    """Demand of a single scenario cannot be covered with the given reservation."""


class InfeasibleError(QFleetError):
    """Some positive-probability scenario has no feasible recourse."""


class TooLargeError(QFleetError):
    """Exhaustive enumeration was asked for an instance beyond its size limit."""


class AllInfeasibleError(QFleetError):
    """Every random first-stage draw turned out infeasible."""


class UnboundedModelError(QFleetError):
    """The LP relaxation of a model is unbounded below."""


class ParseError(QFleetError):
    """An input file could not be parsed.  Carries the byte offset if known."""

    def __init__(self, message, path=None, offset=None):
        self.path = path
        self.offset = offset
        super().__init__(message)
