"""Exception hierarchy shared by every module of the engine."""


class EngineError(Exception):
    """Base class for all errors raised by rsengine."""


class DomainError(EngineError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """Evaluation requested at a pole."""


class JetOrderError(DomainError):
    """A Taylor jet is too short for the requested computation."""


class InsufficientDataError(EngineError):
    """Local data (Satake tables, stream length) does not reach far enough."""


class InsufficientXError(InsufficientDataError):
    """A truncated series cannot meet the requested accuracy."""


class QuadratureError(EngineError, RuntimeError):
    """Adaptive quadrature failed to converge within its budget."""

    def __init__(self, message, *, estimate=None, error=None, evaluations=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
        self.evaluations = evaluations
