"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific class that applies.
"""


class ResourceLimitError(RuntimeError):
    """A requested computation exceeds the configured memory/compute budget."""


class TableError(ValueError):
    """Base class for theta-constant table problems."""


class TableParseError(TableError):
    """A table row could not be parsed; carries file name and line number."""

    def __init__(self, message: str, *, source: str = "<stream>", line: int = 0):
        super().__init__(f"{source}:{line}: {message}")
        self.source = source
        self.line = line


class TableValidationError(TableError):
    """A parsed table violates a structural invariant (missing or bad entry)."""


class DomainError(ValueError):
    """An estimate was requested outside the range where it is valid."""


class CheckpointError(RuntimeError):
    """A verification checkpoint file is unusable; resuming is refused."""
