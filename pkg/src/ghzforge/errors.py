"""Exception and warning types shared across the package."""


class GhzforgeError(Exception):
    """Base class for errors raised by this package."""


class ScenarioFormatError(GhzforgeError):
    """A scenario file is malformed, has unknown keys, or fails validation."""


class PreconditionError(GhzforgeError):
    """A numerical precondition was violated (e.g. the integrator step is too coarse)."""


class UnsolvableConditionError(GhzforgeError):
    """The requested phase-matching condition has no solution for the given integers."""


class ApproximationWarning(UserWarning):
    """A parameter regime strains one of the approximations baked into a builder."""
