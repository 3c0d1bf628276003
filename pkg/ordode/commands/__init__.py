# Commands package
from enum import IntEnum


class ExitCode(IntEnum):
    """Process exit codes (stable contract)."""

    OK = 0
    HYPOTHESES_FAILED = 2
    NOT_CONVERGED = 3
    USAGE = 64  # parse/schema errors, unknown names
    DATA_ERROR = 65  # grid mismatch, malformed trajectory files
    IO_ERROR = 74
