"""Shared exception types."""


class EntropyLabError(Exception):
    """Base class for all package errors."""


class ValidationError(EntropyLabError):
    """Malformed specs, broken invariants, or bad arguments."""


class GroupError(ValidationError):
    """Group-level misuse: mixed-group operands, malformed elements."""


class ResourceLimitError(EntropyLabError):
    """An exact computation would exceed the configured size budget."""


class BudgetExceededError(EntropyLabError):
    """An enumeration ran past its configured combinatorial budget."""
