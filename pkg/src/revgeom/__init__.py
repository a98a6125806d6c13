"""Computational calculus for zonal measures and convex bodies of revolution.

Measures on [-1, 1] with atoms and endpoint-singular densities, BV functions
pinned at the equator, mixed-area-measure pushforwards of bodies of
revolution, the profile-weighted integral transform family with its adjoint,
a constructive solver for the mixed Christoffel-Minkowski problem, cap-mass
estimates, pole density limits, and principal-value valuations.
"""

from .bodies import (CATALOG, FamilyData, RevolutionBody, ball, cone,
                     cone_segment, cylinder, disk, disk_mixed_pushforward,
                     mixed_area_pushforward, positivity_interval,
                     profile_from_support, smooth_density_oracle, spheroid,
                     support_from_profile, unit_balls, unit_disks)
from .bv0 import BV0Function
from .constants import kappa, omega
from .errors import (EquatorMassWithZeroWaist, ExtrapolationFailed,
                     Infeasible, NonIntegrable, NotCentered, NotConvex,
                     NotInDomain, NotNonnegative, RevGeomError,
                     SegmentInBoundary)
from .estimates import (CapCurve, cone_valuation_exact, density_limit,
                        firey_bound, firey_curve, support_check, valuation_pv)
from .measures import Cumulative, Piece, ZonalMeasure
from .solver import SolveReport, check_conditions, solve, solve_disk
from .transform import (adjoint_apply, adjoint_preimage, d_membership,
                        sph_projection, t_hat_adjoint, t_hat_apply,
                        t_hat_inverse, t_r_apply, t_r_inverse)

__version__ = "0.1.0"

__all__ = [
    "BV0Function", "CapCurve", "CATALOG", "Cumulative",
    "EquatorMassWithZeroWaist", "ExtrapolationFailed", "FamilyData",
    "Infeasible", "NonIntegrable", "NotCentered", "NotConvex", "NotInDomain",
    "NotNonnegative", "Piece", "RevGeomError", "RevolutionBody",
    "SegmentInBoundary", "SolveReport", "ZonalMeasure", "adjoint_apply",
    "adjoint_preimage", "ball", "check_conditions", "cone",
    "cone_segment", "cone_valuation_exact", "cylinder", "d_membership",
    "density_limit", "disk", "disk_mixed_pushforward", "firey_bound",
    "firey_curve", "kappa", "mixed_area_pushforward", "omega",
    "positivity_interval", "profile_from_support", "smooth_density_oracle",
    "solve", "solve_disk", "spheroid", "sph_projection", "support_check",
    "support_from_profile", "t_hat_adjoint", "t_hat_apply", "t_hat_inverse",
    "t_r_apply", "t_r_inverse", "unit_balls", "unit_disks", "valuation_pv",
]
