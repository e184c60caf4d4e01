"""Exception types raised by gravres."""


class GravresError(Exception):
    """Base class for all package errors."""


class InvalidInputError(GravresError, ValueError):
    """An argument violates a documented precondition."""


class NumericalError(GravresError, ArithmeticError):
    """A numerical routine failed, e.g. an eigensolver did not converge."""


class ConfigError(GravresError, ValueError):
    """A run configuration could not be parsed or validated.

    ``line`` is set for syntax errors, ``key`` for constraint violations.
    """

    def __init__(self, message: str, *, line: int | None = None, key: str | None = None):
        prefix = ""
        if line is not None:
            prefix = f"line {line}: "
        elif key is not None:
            prefix = f"{key}: "
        super().__init__(prefix + message)
        self.line = line
        self.key = key
