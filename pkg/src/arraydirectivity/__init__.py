"""Directivity of 3-D antenna arrays and placement of elements on the plane
normal to a desired direction.

The numerical kernels run from a compiled extension when it is available
and from numpy otherwise; ``arraydirectivity.BACKEND`` tells which.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .baselines import SteeredArray, dmin_sweep, uca_steered, uhpa_layout, ula_steered
from .directivity import (
    ISOTROPIC,
    OMNI,
    DirectivityReport,
    ElementPattern,
    array_factor,
    beta_fn,
    directivity_analytic,
    directivity_quadrature,
    radiation_intensity,
    sinc_kernel_derivative,
)
from .errors import (
    ArrayDirectivityError,
    BoundsViolation,
    DegenerateDirection,
    NoLocalMinimum,
    NonPositiveDenominator,
    QuadratureNotConverged,
    SafetyCapReached,
)
from .ga import GaConfig, GaRunReport, ga_marginal, ga_optimize, ga_stall, hyperparameter_select
from .geometry import (
    ArrayLayout,
    DirectionSpec,
    convex_hull_area,
    lift_to_plane,
    pairwise_differences,
    plane_constraint_z,
    rotation_matrix,
    unit_observation_vector,
)
from .objective import (
    ObjectiveValue,
    PlanarSolution,
    directivity_from_planar,
    f1_omni,
    f2_omni,
    objective_G,
    pair_kernel_F,
)
from .oupa import OupaResult, SevConfig, UpaSpec, oupa, sev, upa_layout

__all__ = [name for name in dir() if not name.startswith("_")]
