"""Shared exception types."""


class EnumerationBudgetError(ValueError):
    """A requested field enumeration exceeds the configured element budget."""


class PrecisionError(ValueError):
    """Stored coefficient or series precision is too low for the request."""


class TowerSpecError(ValueError):
    """A tower description violates the spec-file schema or its invariants."""
