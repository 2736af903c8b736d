"""Exception hierarchy shared by every sskit module."""


class SskitError(Exception):
    """Base class for errors raised by sskit."""


class DomainError(SskitError, ValueError):
    """An argument lies outside the domain of the operation."""


class SchemeError(DomainError):
    """A censoring scheme or progressive sample violates its invariants."""


class ConvergenceError(SskitError, ArithmeticError):
    """An iterative solver stopped without meeting its tolerance.

    The iterate history is kept on ``trajectory`` for diagnosis.
    """

    def __init__(self, message, trajectory=()):
        super().__init__(message)
        self.trajectory = list(trajectory)


class SingularityError(SskitError, ArithmeticError):
    """A matrix that must be positive definite is singular or indefinite."""


class BootstrapError(SskitError):
    """Too many bootstrap replicates failed to produce an estimate."""


class NumericalError(SskitError, ArithmeticError):
    """Quadrature or root finding failed to reach the requested accuracy."""


class IntegrityError(SskitError):
    """Shipped data does not match its pinned digest or reference table."""


class ConfigError(SskitError, ValueError):
    """A study configuration document is invalid.

    ``errors`` holds every violation as ``(path, message)`` pairs.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        lines = "; ".join(f"{p or '<root>'}: {m}" for p, m in self.errors)
        super().__init__(f"invalid study config: {lines}")
