"""Exception types raised by the library."""


class MLFError(Exception):
    """Base class for all library errors."""


class NonFinite(MLFError):
    """Evaluation overflowed on every available path."""


class DomainTooSmall(MLFError):
    """Asymptotic expansion requested too close to the origin."""


class BracketFailure(MLFError):
    """No sign change found while bracketing a root."""


class ContourThroughZero(MLFError):
    """A zero of the function lies on (or too near) a counting contour."""


class IllConditioned(MLFError):
    """A fit or expansion check could not reach the requested accuracy."""


class DivisionByZeroSeries(MLFError):
    """Power series reciprocal requested for a series with zero constant term."""
