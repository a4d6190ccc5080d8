"""Exception types shared across the package."""


class GumbelMaxError(Exception):
    """Base class for all package errors."""


class DomainError(GumbelMaxError, ValueError):
    """An argument lies outside the domain of the operation."""


class BudgetExceeded(GumbelMaxError):
    """Adaptive quadrature ran out of refinements before meeting its tolerance.

    The best available estimate and its error estimate are kept on the
    exception so callers can still inspect them.
    """

    def __init__(self, estimate, error, refinements):
        super().__init__(
            f"quadrature budget exhausted after {refinements} refinements "
            f"(estimate={estimate!r}, error={error!r})"
        )
        self.estimate = estimate
        self.error = error
        self.refinements = refinements


class NoBracket(GumbelMaxError, ValueError):
    """The root-finding interval does not bracket a sign change."""


class AlreadyNormalized(GumbelMaxError):
    """A sample set was normalized twice."""


class EmptySample(GumbelMaxError, ValueError):
    """A statistic was requested for a sample with no values."""


class SampleFileError(GumbelMaxError, ValueError):
    """A sample CSV file could not be parsed."""

    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line
