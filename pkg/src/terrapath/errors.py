"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a documented precondition or schema."""


class GridParseError(ValidationError):
    """An ASCII grid file is malformed.

    The message names the offending line or token so the file can be
    fixed by hand.
    """


class ScenarioError(ValidationError):
    """A scenario document is missing keys, has unknown keys, or holds
    values of the wrong type."""


class InfeasibleRouteError(RuntimeError):
    """No path exists between the requested endpoints.

    Carries the unreachable endpoint in ``detail`` when known.
    """

    def __init__(self, message: str, detail: str | None = None):
        super().__init__(message)
        self.detail = detail
