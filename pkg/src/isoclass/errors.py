"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class IsoclassError(Exception):
    """Base class for all package errors."""


class ConfigError(IsoclassError):
    """Invalid configuration (bad flag, missing file, bad policy)."""


class BudgetError(IsoclassError):
    """A configured work budget tripped."""


# group-core
class OrderCapExceeded(BudgetError):
    pass


class NotASubgroup(IsoclassError):
    pass


# group-catalog
class BadParameters(IsoclassError):
    pass


class RelationCheckFailed(IsoclassError):
    pass


class ParseError(ConfigError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OrderMismatch(ConfigError):
    pass


class OrderNotCovered(IsoclassError):
    pass


class CatalogGap(OrderNotCovered):
    """A pipeline needs an order the loaded catalog does not cover."""


# genvec
class LengthMismatch(IsoclassError):
    pass


class WorkBudgetExceeded(BudgetError):
    pass


class IdentityElement(IsoclassError):
    pass


class NotCoprime(IsoclassError):
    pass


class GroupMismatch(IsoclassError):
    pass


# hurwitz
class BadMoveForFamily(IsoclassError):
    pass


class OrbitBudgetExceeded(BudgetError):
    pass


class NotIndexTwo(IsoclassError):
    pass


# geometry
class NonIntegralGenus(IsoclassError):
    pass


class NonIntegralChi(IsoclassError):
    pass


class BadPair(IsoclassError):
    pass


class InconsistentInvariants(IsoclassError):
    pass


class NonIntegralK2(IsoclassError):
    pass


class K2OutOfRange(IsoclassError):
    pass


class DegenerateSignature(IsoclassError):
    pass


class NonInvolutionStabilizer(IsoclassError):
    pass
