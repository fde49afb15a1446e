"""Shared exception types."""


class ResourceLimitError(RuntimeError):
    """A configured resource budget (search bound, memory, period cap) was exceeded."""


class StabilizationError(RuntimeError):
    """An adaptive numerical scheme failed to stabilize within its configured ceiling."""
