class DomainError(ValueError):
    """Input outside an operation's mathematical domain."""


class ResourceError(RuntimeError):
    """Request exceeds a configured table, enumeration, or time budget."""


class NumericDriftError(ArithmeticError):
    """A float reconstruction of an integer landed outside its guard band."""
