"""Exception types shared across the package."""


class WidthproofError(Exception):
    """Base class for all library errors."""


class StructuralError(WidthproofError, ValueError):
    """A term does not respect the ranked alphabet (unknown symbol or arity mismatch)."""


class TermSyntaxError(StructuralError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class ValidationError(WidthproofError, ValueError):
    """An object violates a semantic invariant (invalid term, bad decomposition, ...)."""

    def __init__(self, message: str, path: tuple[int, ...] | None = None):
        if path is not None:
            message = f"{message} (node path {list(path)})"
        super().__init__(message)
        self.path = path


class PreconditionError(WidthproofError, ValueError):
    pass


class BudgetExceeded(WidthproofError):
    """A configured resource budget (pairs, bytes, graph size) was exhausted."""


class ConjectureSyntaxError(WidthproofError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position
