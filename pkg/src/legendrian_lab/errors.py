"""Error hierarchy shared by every module.

The CLI maps DomainError to exit code 3 and InvariantViolation to exit code 4.
"""


class LabError(Exception):
    pass


class DomainError(LabError):
    """Input outside the supported domain (bad syntax, disconnected closure, ...)."""


class ParseError(DomainError):
    pass


class DisconnectedClosureError(DomainError):
    pass


class UnsupportedFieldError(DomainError):
    pass


class DegenerateFormalTypeError(DomainError):
    pass


class InvariantViolation(LabError):
    """A theorem-level check failed: a bug or a convention mismatch."""


class DiskSearchError(InvariantViolation):
    pass


class FrameSolveError(InvariantViolation):
    pass
