"""Exception types shared across the library."""


class InvalidInputError(ValueError):
    """An argument violates an operation's preconditions."""


class OutOfRangeError(InvalidInputError):
    """A time falls outside the domain of a tabulated coupling profile."""


class NumericalFailureError(RuntimeError):
    """An adaptive numerical routine could not meet its accuracy target.

    Parameters
    ----------
    message : str
        Human-readable description of what failed.
    estimate : float or None
        Best available result at the point of failure, if any.
    error_bound : float or None
        Estimated error of ``estimate``, if known.
    """

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class ScenarioError(InvalidInputError):
    """A scenario document is malformed or semantically invalid.

    ``path`` names the offending key in dotted form, e.g. ``"field.thermal"``.
    """

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
