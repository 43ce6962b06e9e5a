"""Exception hierarchy shared by every module in the package."""

from __future__ import annotations


class PlethysmError(Exception):
    """Base class for all errors raised by :mod:`plethysm`."""


class InvalidInputError(PlethysmError, ValueError):
    """An argument violates a documented precondition."""


class InvalidComparisonError(InvalidInputError):
    """Two partitions of different sizes were compared in dominance order."""


class ResourceLimitError(PlethysmError):
    """A computation would exceed a configured size cap."""

    def __init__(self, what: str, size: int, limit: int) -> None:
        self.what = what
        self.size = size
        self.limit = limit
        super().__init__(f"{what}: size {size} exceeds configured limit {limit}")


class ParseError(InvalidInputError):
    """A shape, tableau or option string could not be parsed."""

    def __init__(self, text: str, position: int, reason: str) -> None:
        self.text = text
        self.position = position
        self.reason = reason
        super().__init__(f"{reason} at position {position} in {text!r}")
