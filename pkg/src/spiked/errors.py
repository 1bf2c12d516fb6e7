"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the range an operation supports."""


class NumericalFailure(RuntimeError):
    """A numerical procedure could not deliver its contract (no bracket, singular system, ...)."""
