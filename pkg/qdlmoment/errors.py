class QdlError(Exception):
    """Base class for every error raised by qdlmoment."""

    pass


class DomainError(QdlError, ValueError):
    """Raised when an argument lies outside the documented domain."""

    pass


class PoleError(DomainError):
    """Raised when a function is evaluated at one of its poles."""

    pass


class RegionError(DomainError):
    """Raised when (s, w) lies outside the region where a series converges."""

    pass


class EvenModulusError(DomainError):
    """Raised when an even modulus is passed where an odd one is required."""

    pass


class SquareModulusError(DomainError):
    """Raised when a square modulus reaches the Gauss-sum functional equation."""

    pass


class UndefinedSymbolError(DomainError):
    """Raised for the undefined Kronecker symbol (0/0)."""

    pass


class LimitError(QdlError, ValueError):
    """Raised when a modulus, scale or range exceeds the supported limits."""

    pass


class ConsistencyError(QdlError):
    """Raised when two independent evaluations of the same quantity disagree."""

    pass


class ExtrapolationError(QdlError):
    """Raised when successive Richardson estimates fail to settle."""

    pass


class ResultNotCachedError(QdlError, KeyError):
    """Raised when a cache key is not found."""

    pass
