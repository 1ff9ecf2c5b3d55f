class SiltingError(Exception):
    """Base class for errors raised by this package."""


class InfiniteDimensionalError(SiltingError, ValueError):
    """Path growth did not stop below the length cap."""


class CapExceededError(SiltingError):
    """A brute-force step would exceed its configured size cap."""


class UndecidedError(SiltingError):
    """An isomorphism question could not be settled within the caps."""


class InvariantViolation(SiltingError, AssertionError):
    """A mathematical invariant checked at runtime failed."""


class PreconditionError(SiltingError, ValueError):
    """An operation was called outside its domain."""


class ProjectError(SiltingError, ValueError):
    """A project file failed validation; ``path`` names the offending entry."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
