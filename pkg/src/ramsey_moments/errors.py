"""Exception types shared across the package."""


class RamseyMomentsError(Exception):
    """Base class for all package errors."""


class DomainError(RamseyMomentsError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class RegimeError(DomainError):
    """A fit or approximation was requested outside the regime where it applies."""


class UnsupportedOrderError(DomainError):
    """A closed form was requested for a moment order it does not cover."""


class OrderRangeError(RamseyMomentsError, IndexError):
    """A table lookup used an order outside the precomputed range."""


class ResourceLimitError(RamseyMomentsError, RuntimeError):
    """A computation would exceed a configured resource cap."""
