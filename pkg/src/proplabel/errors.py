"""Shared exception types."""


class GraphParseError(ValueError):
    """Malformed edge-list input (carries a 1-based line number when known)."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StructureError(ValueError):
    """Input graph does not have the structure an operation requires."""


class PreconditionError(ValueError):
    """An operation's documented precondition is violated."""


class CapExceeded(RuntimeError):
    """A search or expansion would exceed its configured size cap; refused."""


class InvariantViolation(RuntimeError):
    """A step that is guaranteed to succeed failed.  This is a bug, not bad input."""


class InnerSolverFailure(RuntimeError):
    """A delegated inner labeller reported no labelling."""
