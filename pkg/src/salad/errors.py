class SaladError(Exception):
    """Base class for detector errors."""


class ConfigError(SaladError, ValueError):
    pass


class WindowTooShort(SaladError, ValueError):
    pass


class EmptyInput(SaladError, ValueError):
    pass


class NonFiniteLoss(SaladError, ArithmeticError):
    pass


class LengthMismatch(SaladError, ValueError):
    pass


class InsufficientHistory(SaladError, ValueError):
    pass


class OutOfOrderPoint(SaladError, ValueError):
    pass


class SeriesTooShort(SaladError, ValueError):
    pass


class InvalidWindow(SaladError, ValueError):
    pass


class OutOfRange(SaladError, ValueError):
    pass


class ParseError(SaladError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
