"""Billiards inside nondegenerate ellipsoids of R^{n+1}.

Numerical library for the billiard map and its caustics, the frequency
map of Liouville tori (with continuous extension to singular caustic
values), Cayley-style periodicity tests, winding-number lower bounds,
and bifurcation curves in parameter space.
"""

from .errors import ConfocalError
from .geometry import (
    Ellipsoid,
    PhasePoint,
    billiard_orbit,
    billiard_step,
    caustic_param,
    caustics_of_line,
    lambda_of_phase,
    phase_to_state,
    separatrix_r,
    sigma_of_lambda,
    state_to_phase,
)
from .quadrature import (
    CollapseConfig,
    QuadratureConfig,
    collapse_config,
    hyperelliptic_K,
    integral_table,
)
from .frequency import (
    Frequency,
    extended_frequency,
    frequency,
    jacobian,
    normalized_jacobian,
    rotation_number_2d,
    rotation_number_ext,
    varrho,
)
from .asymptotics import (
    CollapseKind,
    collapse_frequency,
    detect_kind,
    perturbation_solve,
)
from .periodic import (
    CayleyReport,
    WindingNumbers,
    cayley_test,
    invert_frequency,
    kappa_sigma,
    kappa_table,
    minimal_caustics_2d,
    refine_periodic,
    winding_from_orbit,
)
from .bifurcation import (
    anchors,
    criteria_fast,
    in_range,
    minimal_regions,
    range_boundary,
    trace_g,
)

__version__ = "0.1.0"

__all__ = [
    "ConfocalError",
    "Ellipsoid",
    "PhasePoint",
    "billiard_orbit",
    "billiard_step",
    "caustic_param",
    "caustics_of_line",
    "lambda_of_phase",
    "phase_to_state",
    "separatrix_r",
    "sigma_of_lambda",
    "state_to_phase",
    "CollapseConfig",
    "QuadratureConfig",
    "collapse_config",
    "hyperelliptic_K",
    "integral_table",
    "Frequency",
    "extended_frequency",
    "frequency",
    "jacobian",
    "normalized_jacobian",
    "rotation_number_2d",
    "rotation_number_ext",
    "varrho",
    "CollapseKind",
    "collapse_frequency",
    "detect_kind",
    "perturbation_solve",
    "CayleyReport",
    "WindingNumbers",
    "cayley_test",
    "invert_frequency",
    "kappa_sigma",
    "kappa_table",
    "minimal_caustics_2d",
    "refine_periodic",
    "winding_from_orbit",
    "anchors",
    "criteria_fast",
    "in_range",
    "minimal_regions",
    "range_boundary",
    "trace_g",
    "__version__",
]
