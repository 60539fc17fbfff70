class ScenarioError(ValueError):
    """Scenario file could not be parsed, or failed validation."""

    def __init__(self, message: str, violations: list[str] | None = None):
        super().__init__(message)
        self.violations = violations or []


class ConvergenceError(RuntimeError):
    """Halving the integration step moved a reported value past tolerance."""


class ValidityError(ValueError):
    """Inputs fall outside the range where a formula holds (e.g. k·r too large)."""


class SpringRangeError(ValueError):
    """Requested spring overlap exceeds what the spring geometry allows."""
