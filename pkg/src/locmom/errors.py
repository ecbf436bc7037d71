"""Exception types shared across the package."""


class LocmomError(Exception):
    """Base class for all package-specific errors."""


class SimulationError(LocmomError):
    """Raised when an SDE simulation cannot proceed (e.g. negative diffusion)."""

    def __init__(self, message, index=None, state=None):
        super().__init__(message)
        self.index = index
        self.state = state


class EstimationError(LocmomError):
    """Raised for hard estimation failures (bad shapes, empty grids, ...)."""


class SolveRejectedError(EstimationError):
    """Raised when a global linear solve is too ill-conditioned to trust."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class BasisEvaluationError(LocmomError):
    """Raised when a fit-function returns a non-finite value."""


class IngestError(LocmomError):
    """Raised for malformed or unusable input data files."""


class ConfigError(LocmomError):
    """Raised for invalid run configurations; carries the offending field path."""

    def __init__(self, message, field=None):
        if field:
            message = f"{field}: {message}"
        super().__init__(message)
        self.field = field
