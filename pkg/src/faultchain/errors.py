"""Error taxonomy shared across the package.

The CLI maps these onto exit codes: InputError -> 2,
PreconditionError -> 3. Anything else is a bug.
"""


class FaultchainError(Exception):
    """Base class for all package errors."""


class InputError(FaultchainError):
    """Malformed user input: files, flags, sources, suites."""


class ParseError(InputError):
    """Source rejected by the mini-language front end."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, col {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class PreconditionError(FaultchainError):
    """Structurally valid input that the pipeline refuses to run on."""
