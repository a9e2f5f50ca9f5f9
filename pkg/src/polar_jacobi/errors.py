"""Exception and warning types shared across the package."""


class PolarJacobiError(Exception):
    """Base class for every error raised by this package."""


class DegenerateParams(PolarJacobiError, ZeroDivisionError):
    """A recurrence or structure coefficient has a vanishing denominator.

    ``factor`` names the offending factor (e.g. ``"alpha+beta+2n+1"``),
    ``index`` is the recurrence index at which it vanished.
    """

    def __init__(self, factor, index, alpha, beta):
        self.factor = factor
        self.index = index
        self.alpha = alpha
        self.beta = beta
        super().__init__(
            f"degenerate parameters alpha={alpha!r}, beta={beta!r}: "
            f"factor {factor} vanishes at n={index}"
        )


class GammaPole(PolarJacobiError, ValueError):
    """Gamma was asked for a value at a nonpositive integer."""


class RegimeError(PolarJacobiError, ValueError):
    """Operation requires Re(alpha) > -1 and Re(beta) > -1."""


class CapacityExceeded(PolarJacobiError, IndexError):
    """A moment table is too short for the requested inner product."""


class PreconditionFailed(PolarJacobiError, ValueError):
    """A validator was called outside the hypotheses of the theorem it checks."""


class DegreeTooLarge(PolarJacobiError, ValueError):
    """Requested degree is above the supported cap."""


class DegreeZero(PolarJacobiError, ValueError):
    """Root finding was asked for a constant polynomial."""


class NoConvergence(PolarJacobiError, RuntimeError):
    """Root iteration did not converge; ``best`` holds the last iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class BranchAmbiguity(UserWarning):
    """Both square-root branches of phi have modulus 1 (z on [-1, 1])."""


class NearDegenerateWarning(UserWarning):
    """A denominator is nonzero but closer to zero than the warning threshold."""
