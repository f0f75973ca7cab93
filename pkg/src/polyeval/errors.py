"""Shared exception base class."""


class PolyevalError(Exception):
    """Base class for all errors raised by this package."""
