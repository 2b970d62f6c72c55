"""Exception hierarchy.

Anything deriving from :class:`InputError` is the caller's fault (bad file,
bad label) and maps to CLI exit code 1. :class:`InvariantViolation` signals a
bug in this package and maps to exit code 2.
"""


class CyberMotifError(Exception):
    pass


class InputError(CyberMotifError):
    pass


class MalformedRecord(InputError):
    def __init__(self, message: str, locator: str | None = None):
        self.locator = locator
        if locator:
            message = f"{locator}: {message}"
        super().__init__(message)


class UnknownRole(InputError):
    pass


class InconsistentAnnotation(InputError):
    pass


class UnknownSession(InputError):
    pass


class EmptyMajority(CyberMotifError, ValueError):
    pass


class NotAMotif(CyberMotifError, ValueError):
    pass


class EmptyScope(CyberMotifError, ValueError):
    pass


class Unclassifiable(CyberMotifError, ValueError):
    pass


class InvariantViolation(CyberMotifError, RuntimeError):
    pass
