"""Exception hierarchy shared by every module."""


class UltrafieldError(Exception):
    """Base class for all package errors."""


class DomainError(UltrafieldError, ValueError):
    """An operation was applied outside its mathematical domain."""


class UnsupportedSymbolic(UltrafieldError, TypeError):
    """Arithmetic on generator symbols beyond the supported fragment."""


class PrecisionLoss(UltrafieldError, ArithmeticError):
    """The requested answer is not determined at the available precision."""


class DivisionByZero(UltrafieldError, ZeroDivisionError):
    pass


class MalformedMatrix(UltrafieldError, ValueError):
    pass


class NotUltrametric(UltrafieldError, ValueError):
    """Distances violate the strong triangle inequality.

    ``triple`` holds the offending labels ``(x, y, z)`` with
    ``g(x, y) < min(g(x, z), g(z, y))``.
    """

    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class IsometryFailure(UltrafieldError, AssertionError):
    """Internal isometry check failed; always indicates a bug."""


class NonIntegralExponent(UltrafieldError, ValueError):
    pass


class LimitCaseRequired(UltrafieldError):
    """The infimum distance to the embedded set is not attained."""


class AlphabetOverflow(UltrafieldError, ValueError):
    pass


class InconsistentPrefix(UltrafieldError, ValueError):
    pass


class SchemaError(UltrafieldError, ValueError):
    """Input JSON does not match the expected shape; ``path`` is a JSON pointer."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '/'}: {message}")
        self.path = path
