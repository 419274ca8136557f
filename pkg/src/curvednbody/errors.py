"""Exception types shared across the package."""


class CurvedNBodyError(Exception):
    """Base class for all package-specific errors."""


class DomainError(CurvedNBodyError):
    """An argument lies outside the mathematical domain of an operation."""


class ConstraintError(CurvedNBodyError):
    """Per-body constants violate the constraints of an orbit class."""


class SingularityError(CurvedNBodyError):
    """A configuration is singular (collision or antipodal pair)."""

    def __init__(self, kind, i, j, margin=0.0):
        self.kind = kind
        self.i = i
        self.j = j
        self.margin = margin
        super().__init__(f"{kind} singularity between bodies {i} and {j} "
                         f"(margin {margin:.3e})")


class ClassMismatchError(CurvedNBodyError):
    """Rotation class and curvature sign are incompatible."""


class SingularConfigurationError(CurvedNBodyError):
    """Input configuration contains a collision or antipodal pair."""


class InsufficientSamplesError(CurvedNBodyError):
    """Too few trajectory samples for the requested analysis."""


class IntegrationError(CurvedNBodyError):
    """Numerical integration failed."""


class StepSizeUnderflow(IntegrationError):
    """Adaptive step size fell below the configured minimum."""

    def __init__(self, t, h, h_min):
        self.t = t
        self.h = h
        super().__init__(f"step size {h:.3e} fell below h_min {h_min:.3e} at t={t:.6g}")


class SingularityApproach(IntegrationError):
    """Integration stopped because a pair approached a singularity.

    Carries the samples accumulated before the stop so callers can inspect
    the partial trajectory.
    """

    def __init__(self, i, j, t, margin, samples=None):
        self.i = i
        self.j = j
        self.t = t
        self.margin = margin
        self.samples = samples if samples is not None else []
        super().__init__(f"pair ({i},{j}) approached a singularity at t={t:.6g} "
                         f"(margin {margin:.3e})")
