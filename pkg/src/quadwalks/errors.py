"""Exception hierarchy shared by all quadwalks modules.

Each error class corresponds to one failure mode of the pipeline; the CLI
maps them to distinct exit codes.
"""


class QuadwalksError(Exception):
    """Base class for all quadwalks errors."""


class ParseError(QuadwalksError):
    """Malformed model, numerator, polynomial or report text."""


class DegenerateModel(QuadwalksError):
    """All steps fit in a closed half-plane through the origin."""


class NonzeroDrift(QuadwalksError):
    """Operation requires a zero-drift model."""


class NotSmallSteps(QuadwalksError):
    """Kernel/group machinery requires two-dimensional small steps."""


class GroupInfinite(QuadwalksError):
    """Group closure was not reached within the element budget."""


class NotOrbitSummable(QuadwalksError):
    """Orbit-sum certificate failed against the path-counting oracle."""


class PoleAtPoint(QuadwalksError):
    """Evaluation hit a zero denominator / negative power of zero."""


class DivisionByZero(QuadwalksError):
    """Exact division by a zero polynomial or field element."""


class NonUnitConstantTerm(QuadwalksError):
    """Series log/exp/inverse needs an invertible (unit) constant term."""


class NotPositiveDefinite(QuadwalksError):
    """Quadratic form at the saddle is not positive definite."""


class NumeratorSingularAtSaddle(QuadwalksError):
    """Orbit-sum numerator has a pole at the dominant saddle point."""


class PrecisionInsufficient(QuadwalksError):
    """Interval arithmetic could not separate a value from zero."""


class DegreeBoundViolated(QuadwalksError):
    """Interpolated polynomial failed verification on held-out points."""


class DecompositionInfeasible(QuadwalksError):
    """Coefficient function is not in the span of the given basis products."""


class NoSolutionWithinDegreeBound(QuadwalksError):
    """Polyharmonic ladder solve found no polynomial within the degree cap."""


class UnsupportedRootOrder(QuadwalksError):
    """Root of unity has no exact real-radical real/imaginary parts here."""


class InexactSqrt(QuadwalksError):
    """Square root does not stay inside the supported radical class."""


class EngineInconsistency(QuadwalksError):
    """Two independent routes to the same quantity disagreed."""
