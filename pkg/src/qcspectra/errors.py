"""Exception types shared across the package."""


class QCError(Exception):
    """Base class for all numerical and geometric failures raised here."""


class ZeroValue(QCError, ValueError):
    pass


class AmbiguousBranch(QCError):
    """Two logarithm branches are (nearly) equidistant: the path is under-sampled."""


class ClosureDefect(QCError):
    """A continued logarithm failed to close up around a circle."""


class ExponentOverflow(QCError, OverflowError):
    pass


class DomainError(QCError, ValueError):
    pass


class SingularPoint(DomainError):
    pass


class OriginSingularity(SingularPoint):
    pass


class NotExtendable(QCError, ValueError):
    """The quasiconformal extension degenerates (distortion constant equals 1)."""


class DegenerateJacobian(QCError):
    pass


class NoConvergence(QCError):
    pass


class SupportViolation(QCError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ReportedFailure(QCError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ConfigError(ValueError):
    """Raised for malformed or inconsistent run configurations."""
