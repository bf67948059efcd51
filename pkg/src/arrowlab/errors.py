"""Exception types shared across the package."""


class ArrowlabError(Exception):
    """Base class for all package errors."""


class EmptyAlternativesError(ArrowlabError, ValueError):
    pass


class DimensionError(ArrowlabError, ValueError):
    """Operands live over different alternative sets, profile sizes or digit counts."""


class NoDigitsError(ArrowlabError, ValueError):
    """The collapsed cycle has no unique ternary digit tuple."""


class SizeError(ArrowlabError, ValueError):
    """A requested carrier is outside the supported or guarded size range."""


class ParseError(ArrowlabError, ValueError):
    def __init__(self, message, token=None, line=None):
        self.token = token
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if token is not None:
            where.append(f"token {token!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class StructureError(ArrowlabError, TypeError):
    """An operation needs lattice structure the given system does not carry."""


class UnknownKindError(ArrowlabError, ValueError):
    pass
