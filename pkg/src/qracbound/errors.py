"""Exception hierarchy."""


class QracError(Exception):
    """Base class for all errors raised by qracbound."""


class ValidationError(QracError, ValueError):
    """Input violates a documented precondition or invariant."""


class NumericError(QracError, ArithmeticError):
    """A numerical routine failed to converge."""


class DegenerateScalingError(ValidationError):
    """Boundary scaling is undefined because 1 - N*lambda vanishes."""

    def __init__(self, branch: str, value: float):
        self.branch = branch
        self.value = value
        super().__init__(
            f"degenerate boundary scaling on the lambda_{branch} branch: "
            f"|1 - N*lambda_{branch}| = {abs(value):.3e}"
        )


class DegenerateFactorizationError(ValidationError):
    """POVM factorization needs 0 < alpha0 < 1."""


class UnsupportedConstructionError(QracError, LookupError):
    """No analytic construction is known for the requested (n, m)."""


class StrategyFormatError(QracError):
    """A strategy document does not follow the JSON schema."""
