"""Exception types shared across the package."""


class ZerodimError(Exception):
    pass


class RingMismatchError(ZerodimError):
    """Operands live in different rings."""


class ParseError(ZerodimError):
    """Problem-file syntax error with position information."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}, col {col}: {message}"
        super().__init__(message)


class PreconditionError(ZerodimError):
    """An algorithm precondition does not hold for the given input."""


class InvariantError(ZerodimError):
    """An internal consistency check failed."""
