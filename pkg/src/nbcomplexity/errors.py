"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An operation was called with arguments outside its contract."""


class GuardExceeded(RuntimeError):
    """An exhaustive computation was refused because the instance is too large.

    ``estimate`` carries a rough count of the work that overriding the guard
    would entail, when one is known.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class GraphParseError(ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class VertexRangeError(GraphParseError):
    pass
