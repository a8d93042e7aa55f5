"""Exception hierarchy shared by the solver modules."""


class SolverError(Exception):
    """Base class for all errors raised by the package."""


class ParseError(SolverError, ValueError):
    """Malformed game document. Carries the 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ValidationError(SolverError, ValueError):
    """A game, query or polytope violates its invariants."""


class PreconditionError(SolverError, ValueError):
    """An operation was called outside its domain (e.g. a non-sink query)."""


class DimensionError(SolverError, ValueError):
    """Operands of a geometric operation live in different dimensions."""


class InfeasibleSystemError(SolverError):
    """A half-space system describes the empty set."""


class ResourceLimitError(SolverError):
    """A configured guardrail (generator, facet, set or enumeration cap) was hit."""

    partial = None


class SolverTimeout(SolverError):
    """The wall-clock budget of an iteration ran out.

    ``partial`` holds whatever the solver finished before the deadline
    (for the set iteration: its run statistics).
    """

    def __init__(self, message="time budget exhausted", partial=None):
        super().__init__(message)
        self.partial = partial
