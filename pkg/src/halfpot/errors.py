"""Exception types shared across the package."""


class HalfpotError(Exception):
    """Base class for all package errors."""


class CoincidentPoints(HalfpotError):
    """Kernel evaluated on (or numerically at) its diagonal singularity."""


class NonIntegrable(HalfpotError):
    """An integral does not converge for the given data/kernel combination."""


class IntegrabilityViolation(NonIntegrable):
    """Push-forward integrability condition fails at a boundary face.

    Carries the offending face name and the real part of its index set.
    """

    def __init__(self, face, real_part, message=None):
        self.face = face
        self.real_part = real_part
        if message is None:
            message = (
                f"integrability violated at face {face!r}: "
                f"Re(index set) = {real_part} is not > 0"
            )
        super().__init__(message)


class ToleranceNotMet(HalfpotError):
    """Quadrature could not reach the requested tolerance.

    The best value and the achieved error estimate are attached so callers
    can decide whether to accept the result anyway.
    """

    def __init__(self, value, error, target, message=None):
        self.value = value
        self.error = error
        self.target = target
        if message is None:
            message = (
                f"quadrature error estimate {error:.3e} exceeds target "
                f"{target:.3e} (value {value!r})"
            )
        super().__init__(message)


class JumpFailure(HalfpotError):
    """A boundary-limit check failed; carries the worst point and defect."""

    def __init__(self, worst_point, defect, tolerance, report=None):
        self.worst_point = worst_point
        self.defect = defect
        self.tolerance = tolerance
        self.report = report
        super().__init__(
            f"jump relation defect {defect:.3e} exceeds tolerance "
            f"{tolerance:.3e} at y = {worst_point}"
        )


class IllConditionedFit(HalfpotError):
    """Least-squares design matrix too ill-conditioned to trust."""
