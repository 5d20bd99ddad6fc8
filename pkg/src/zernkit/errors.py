"""Exception types raised by zernkit.

Each failure mode the library promises to detect gets its own class so
callers can discriminate without parsing messages.
"""


class ZernkitError(Exception):
    """Base class for all zernkit errors."""


class DomainError(ZernkitError):
    """A point lies outside the domain of the basis or map being evaluated."""


class NodeCountError(ZernkitError):
    """A node set has the wrong number of points for its order."""


class NodeParseError(ZernkitError):
    """A node file could not be parsed."""


class NodeContainmentError(ZernkitError):
    """A loaded node lies outside the closed unit disk beyond tolerance."""


class ConvergenceError(ZernkitError):
    """An iterative routine exhausted its iteration budget."""


class SingularMatrixError(ZernkitError):
    """A collocation matrix is singular to working precision.

    Carries the smallest singular value in ``sigma_min``.
    """

    def __init__(self, message, sigma_min=None):
        super().__init__(message)
        self.sigma_min = sigma_min


class NonFiniteError(ZernkitError):
    """A computation produced NaN or infinity where finite values are required."""


class RankDeficiencyError(ZernkitError):
    """A candidate Vandermonde matrix does not have full row rank."""


class ZeroDenominatorError(ZernkitError):
    """A relative error was requested against an identically zero reference."""


class ConfigError(ZernkitError):
    """Invalid or inconsistent run configuration."""
