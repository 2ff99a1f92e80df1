"""Shared exception types."""


class CapacityError(RuntimeError):
    """Raised when a requested computation exceeds a documented size cap."""
