"""Exception hierarchy. The CLI maps each class to an exit code."""


class HellyLabError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class SchemaError(HellyLabError, ValueError):
    """Malformed instance data (bad JSON, wrong types, indices out of range)."""

    exit_code = 2


class SizeLimitError(HellyLabError):
    """An exhaustive search or enumeration would exceed its configured cap."""

    exit_code = 3

    def __init__(self, what: str, size, limit):
        super().__init__(f"{what}: size {size} exceeds limit {limit}")
        self.what = what
        self.size = size
        self.limit = limit


class InfeasibleError(HellyLabError):
    """A cover instance has a target that no candidate hits, or an LP is infeasible."""

    exit_code = 4


class ShortfallError(HellyLabError):
    """Homogenization ran out of vertices before meeting the requested sizes."""

    exit_code = 5

    def __init__(self, message: str, report: dict, result=None):
        super().__init__(message)
        self.report = report
        self.result = result


class PreconditionError(HellyLabError, ValueError):
    """An operation's input violates a documented precondition; carries a witness."""

    exit_code = 2

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
