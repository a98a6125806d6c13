"""Exception hierarchy shared by all modules."""


class RevGeomError(Exception):
    """Base class for all package-specific errors."""


class NonIntegrable(RevGeomError):
    """An integral against a measure with a non-integrable endpoint diverges."""


class NotConvex(RevGeomError):
    """Input data is inconsistent with a convex body of revolution."""


class SegmentInBoundary(RevGeomError):
    """Operation requires reference bodies without vertical boundary segments."""


class NotInDomain(RevGeomError):
    """Function fails the endpoint-limit conditions of the transform domain."""


class ExtrapolationFailed(RevGeomError):
    """A refinement sequence did not settle into a usable tail."""


class Infeasible(RevGeomError):
    """No convex body solves the reconstruction problem for the given data.

    Carries an optional ``clause`` attribute naming the violated solvability
    condition, e.g. ``"(iii)"``.
    """

    def __init__(self, message, clause=None):
        super().__init__(message)
        self.clause = clause


class NotNonnegative(Infeasible):
    """Input measure has a negative part."""


class NotCentered(Infeasible):
    """Input measure has a non-zero first moment."""


class EquatorMassWithZeroWaist(Infeasible):
    """Measure puts mass on the equator although the solved waist radius is zero."""
