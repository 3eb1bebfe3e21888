"""Exception hierarchy shared by every eddeg module."""


class EddegError(Exception):
    """Base class for all errors raised by eddeg."""


class PolySyntaxError(EddegError, ValueError):
    """Malformed polynomial text; ``position`` is the 0-based column."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class UnknownVariable(EddegError, KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(name)

    def __str__(self) -> str:
        return f"unknown variable {self.name!r}"


class RingMismatch(EddegError, ValueError):
    pass


class ResourceLimit(EddegError, RuntimeError):
    """A Groebner computation exceeded a configured degree/size cap."""


class UnitIdeal(EddegError, ValueError):
    pass


class CodimensionOutOfRange(EddegError, ValueError):
    pass


class NonGeneric(EddegError, RuntimeError):
    """Independent trials disagreed; ``trials`` holds every raw count."""

    def __init__(self, message: str, trials=()):
        self.trials = list(trials)
        super().__init__(message)


class ZeroDenominator(EddegError, ZeroDivisionError):
    pass


class DegenerateChart(EddegError, ValueError):
    pass


class NotInteger(EddegError, ArithmeticError):
    pass


class NotTopDegree(EddegError, ValueError):
    pass


class NotIsolated(EddegError, RuntimeError):
    pass


class InternalError(EddegError, RuntimeError):
    pass
