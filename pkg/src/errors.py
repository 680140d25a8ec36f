"""Exception hierarchy for Eco Communities.

Each exception carries the CLI exit code of its category so that the
command-line layer can map failures without inspecting messages.
"""

from pathlib import Path
from typing import Optional


class EcoCommunityError(Exception):
    """Base class for all errors raised by the package."""

    exit_code: int = 1


class ValidationError(EcoCommunityError, ValueError):
    """Invalid input, configuration, or precondition."""

    exit_code = 2


class ParseError(ValidationError):
    """A malformed row in an input file."""

    def __init__(self, message: str, path: Optional[Path] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}"
            if line is not None:
                location += f":{line}"
            location += ": "
        super().__init__(f"{location}{message}")


class EmptyNetworkError(ValidationError):
    """A network (or a split of it) has no individuals or no tokens."""


class NumericalError(EcoCommunityError, ArithmeticError):
    """A numerical procedure could not produce a valid result."""

    exit_code = 3


class DomainError(NumericalError):
    """An input lies outside the domain of a function (e.g. log of zero)."""


class InsufficientSampleError(NumericalError):
    """Too few observations for a sample statistic."""


class StorageError(EcoCommunityError, OSError):
    """A file could not be read, written, or decoded."""

    exit_code = 4
