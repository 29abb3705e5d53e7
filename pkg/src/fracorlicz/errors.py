"""Exception hierarchy shared by all modules."""


class OrliczError(Exception):
    """Base class for every error raised by fracorlicz."""


class SaturationError(OrliczError, OverflowError):
    """A value exceeds the representable range (saturation threshold)."""

    def __init__(self, message, threshold):
        super().__init__(f"{message} (saturation threshold {threshold:g})")
        self.threshold = threshold


class InverseBracketError(OrliczError):
    """The inverse could not be bracketed."""

    def __init__(self, message, bracket):
        super().__init__(f"{message}; last bracket {bracket}")
        self.bracket = bracket


class ConjugateInfiniteError(OrliczError):
    """The complementary function is +inf at the listed points."""

    def __init__(self, points):
        pts = ", ".join(f"{p:g}" for p in list(points)[:8])
        super().__init__(f"conjugate infinite at t = {pts}")
        self.points = list(points)


class DegenerateYoungError(OrliczError):
    pass


class IndeterminateError(OrliczError):
    pass


class IndexNotEstimableError(OrliczError):
    pass


class ConditionViolatedError(OrliczError):
    pass


class TailInconclusiveError(OrliczError):
    pass


class DomainError(OrliczError):
    pass


class NormalizationError(OrliczError):
    pass


class NonconvergentError(OrliczError):
    """Raised when no solver start converged; carries the best result."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class Alpha0RangeError(OrliczError):
    pass


class DegeneratePairingError(OrliczError):
    pass


class IntervalUnboundedError(OrliczError):
    pass


class ConfigError(OrliczError):
    """Invalid run configuration; ``path`` names the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
