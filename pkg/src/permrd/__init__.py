"""Ball volumes, rate-distortion bounds and covering codes for permutations
under the Kendall tau and Chebyshev metrics."""

from .ball_volumes import (
    chebyshev_ball_exact,
    chebyshev_ball_lower,
    chebyshev_ball_upper_bregman,
    kendall_ball_exact,
    kendall_sphere_exact,
)
from .covering_codes import (
    CoveringCode,
    construction_code,
    covering_radius,
    greedy_cover,
    minimal_cover_exact,
)
from .errors import DomainError, ExactComputationInfeasible, OracleScaleError
from .perm_core import (
    IndexSet,
    InversionVector,
    Permutation,
    chebyshev_distance,
    compose,
    identity,
    inverse,
    kendall_distance,
)
from .rd_bounds import BoundSet, DistortionQuery

__version__ = "0.1.0"
