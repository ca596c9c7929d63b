"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class InsufficientRankError(DomainError):
    """A GF(2) system does not have enough independent rows to pin a solution."""
