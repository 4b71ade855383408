"""Exception types shared by all modules."""


class InputError(ValueError):
    """Malformed input: dimension mismatch, unknown space kind, bad flag."""


class DegenerateInput(ValueError):
    """The zero vector (or zero operator) was passed where a nonzero one is required."""


class CapacityError(ValueError):
    """An exact enumeration would exceed the supported instance size."""


class OracleInconsistency(RuntimeError):
    """The finite-difference quotients violated convexity beyond numerical noise.

    Difference quotients of a convex function are monotone in the step, so a
    genuine violation signals a bug in the norm evaluation, not in the caller.
    """


class PreconditionViolation(ValueError):
    """A documented precondition of the operation does not hold for the input."""


class PlusMinusDisagreement(RuntimeError):
    """The plus-side and minus-side smoothness verdicts differ.

    The two verdicts are provably equal, so a disagreement is an
    implementation bug and must not be silently accepted.
    """


class EquivalenceViolation(RuntimeError):
    """A theorem-equivalence check found disagreeing sides.

    Carries the full report so the failing instance can be replayed.
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class ConvergenceError(RuntimeError):
    """An iterative solve failed to reach its target tolerance."""
