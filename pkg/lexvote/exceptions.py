"""
Error hierarchy for lexvote.

The CLI maps every LexvoteError to exit code 2 and OSError to exit code 1;
the HTTP surface maps LexvoteError to 422.
"""
from pathlib import Path


class LexvoteError(Exception):
    """Root of all lexvote errors."""


class ValidationError(LexvoteError, ValueError):
    """Input violates a documented precondition or invariant."""


class ParseError(ValidationError):
    """A record in an input file is malformed."""

    def __init__(self, message: str, path: str | Path | None = None, line: int | None = None):
        self.path = str(path) if path is not None else None
        self.line = line
        self.reason = message
        location = ""
        if self.path is not None:
            location = f"{self.path}:{line}: " if line is not None else f"{self.path}: "
        super().__init__(f"{location}{message}")


class ModelFormatError(ValidationError):
    """A serialized feature set, tree or model bundle has an unsupported format version."""


class DomainError(LexvoteError, ValueError):
    """A quantity is mathematically undefined for the given input."""
