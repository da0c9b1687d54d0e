"""Exception types raised across the package."""


class CusumLabError(Exception):
    """Base class for all package errors."""


class InvalidInputError(CusumLabError, ValueError):
    pass


class InsufficientDataError(CusumLabError, ValueError):
    pass


class DomainError(CusumLabError, ValueError):
    pass


class DegenerateConfigError(CusumLabError, ValueError):
    """Change index falls on 0 or n, leaving one segment empty."""


class BoundUndefinedError(CusumLabError, ValueError):
    pass


class DegenerateProbeError(CusumLabError, ValueError):
    pass


class FactorizationError(CusumLabError, ArithmeticError):
    """Cholesky factorization hit a non-positive pivot.

    ``pivot`` is the 1-based index of the failing leading minor.
    """

    def __init__(self, pivot: int, message: str | None = None):
        self.pivot = pivot
        super().__init__(message or f"matrix is not positive definite: pivot {pivot} failed")


class ConfigError(CusumLabError, ValueError):
    pass
