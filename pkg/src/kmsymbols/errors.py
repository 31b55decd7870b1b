"""Exception hierarchy shared by every layer of the package."""


class KMError(Exception):
    """Base class for domain errors (CLI exit status 1)."""

    kind = "DomainError"


class DivisionByZero(KMError, ZeroDivisionError):
    kind = "DivisionByZero"


class NotAPthPower(KMError, ValueError):
    kind = "NotAPthPower"


class ZeroInput(KMError, ValueError):
    kind = "ZeroInput"


class ExpressionSyntaxError(KMError, ValueError):
    """Malformed expression text; ``position`` is a 0-based character offset."""

    kind = "SyntaxError"

    def __init__(self, message, text="", position=0):
        super().__init__(f"{message} at position {position}")
        self.text = text
        self.position = position


class UnknownVariable(KMError, ValueError):
    kind = "UnknownVariable"


class ModeMismatch(KMError, TypeError):
    kind = "ModeMismatch"


class SpecMismatch(KMError, ValueError):
    kind = "SpecMismatch"


class SideConditionFailed(KMError, ValueError):
    kind = "SideConditionFailed"


class PreconditionFailed(KMError, ValueError):
    kind = "PreconditionFailed"


class NonPositiveFactor(PreconditionFailed):
    kind = "NonPositiveFactor"


class SchemaError(KMError, ValueError):
    """Document failed structural validation; ``path`` is a JSON pointer."""

    kind = "SchemaError"

    def __init__(self, message, path=""):
        super().__init__(f"{path or '/'}: {message}")
        self.path = path


class InternalError(KMError, AssertionError):
    kind = "InternalError"
