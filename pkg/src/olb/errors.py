"""Exception hierarchy.

Every error raised by the library derives from :class:`OLBError`.  Errors
that signal a failure of a numerical procedure (no bracket, no convergence,
an ambiguous branch) additionally derive from :class:`NumericalError`; the
command line maps those to exit code 3.
"""


class OLBError(Exception):
    """Base class for all library errors."""


class NumericalError(OLBError):
    """A numerical procedure failed to produce a trustworthy answer."""


class InvalidOval(OLBError):
    pass


class TableSpecError(OLBError, ValueError):
    """Malformed table-spec string."""


class PointInsideCurve(OLBError):
    pass


class OriginOutside(OLBError):
    pass


class AtOrigin(OLBError):
    pass


class ParallelTangents(OLBError):
    """The two tangent lines do not meet at a proper exterior apex."""


class NoCircle(NumericalError):
    pass


class BranchAmbiguity(NumericalError):
    pass


class NoRoot(NumericalError):
    pass


class OnAxis(OLBError):
    pass


class NonPositiveT(OLBError, ValueError):
    pass


class OffCurve(OLBError):
    pass


class TooFewPoints(OLBError):
    pass


class TooShort(OLBError):
    pass


class ExtrapolationUnstable(NumericalError):
    pass


class SingularF(NumericalError):
    pass


class NotPeriodic(OLBError):
    pass


class NoConvergence(NumericalError):
    pass


class DegenerateConfig(NumericalError):
    pass


class EmptyInput(OLBError, ValueError):
    pass


class OrbitError(OLBError):
    """Wraps the error raised at a given iterate of an orbit."""

    def __init__(self, index, cause):
        self.index = index
        self.cause = cause
        super().__init__(f"step {index}: {type(cause).__name__}: {cause}")
