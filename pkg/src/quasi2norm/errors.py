"""Exception types shared across the package."""


class Quasi2NormError(Exception):
    pass


class DimensionMismatch(Quasi2NormError, ValueError):
    pass


class DomainError(Quasi2NormError, ValueError):
    pass


class ParameterRangeError(Quasi2NormError, ValueError):
    """A norm or sequence descriptor violates its construction invariants."""


class InconclusiveSampling(Quasi2NormError):
    """Every sample was degenerate, so no bound could be certified."""


class InvalidCertificate(Quasi2NormError):
    """A caller-supplied modulus failed spot verification."""


class IndexBudgetExceeded(Quasi2NormError):
    """Evaluating a limit would need a sequence index past the allowed cap."""
