"""Exception taxonomy shared across the package.

The CLI maps these onto its exit codes: InputError covers misuse of an
operation (64 when raised from argument handling, 65 for data files),
BackendError covers solver-side failures (75), and IntegrityError covers
violated internal invariants (70).
"""


class CabsatError(Exception):
    """Base class for all package-specific errors."""


class InputError(CabsatError):
    """An operation was called with arguments it cannot serve."""


class ParseError(InputError):
    """An input file is malformed; message carries the offending line."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class BackendError(CabsatError):
    """The SAT backend crashed or violated the expected protocol."""


class IntegrityError(CabsatError):
    """A solver-independent invariant was violated; results are not trustworthy."""
