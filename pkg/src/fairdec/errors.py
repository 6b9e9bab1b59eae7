"""Exception types shared across the library."""

from __future__ import annotations


class FairdecError(Exception):
    """Base class for failures specific to this library."""


class PreconditionError(FairdecError):
    """A named mathematical precondition does not hold for the given input.

    Raised when an algorithm's guarantee is conditional (for example a
    decomposer that needs an envy-free-in-expectation input) and the
    condition fails.  ``name`` is a stable machine-readable identifier
    such as ``"sd-ef"`` or ``"two-type"``; the CLI surfaces it verbatim.
    """

    def __init__(self, name: str, message: str) -> None:
        super().__init__(message)
        self.name = name


class ResourceLimitError(FairdecError):
    """The requested computation exceeds a hard enumeration cap."""


class ParseError(FairdecError):
    """Malformed input text; carries a 1-based location for diagnostics."""

    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
