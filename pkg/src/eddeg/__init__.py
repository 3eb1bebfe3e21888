"""Euclidean distance degrees by critical-point counting and by Euler characteristics."""

from .critical import (
    EDCertificate,
    LinearFunctional,
    Protocol,
    VarietyPresentation,
    conormal_ideal,
    ed_critical_ideal,
    ed_degree,
    linear_critical_count,
    load_variety,
    parametric_critical_system,
    parse_variety,
)
from .errors import (
    EddegError,
    NonGeneric,
    PolySyntaxError,
    ResourceLimit,
    UnitIdeal,
)
from .euler import chi_Yn, ed_degree_via_euler, euler_row, milnor_number, model_fiber_chi
from .fields import ALT_PRIME, DEFAULT_PRIME, GF, QQ, make_field
from .groebner import (
    INFINITE,
    GroebnerBasis,
    Ideal,
    Limits,
    count_with_inequation,
    groebner_basis,
    ideal_dimension,
    normal_form,
    quotient_dimension,
    saturation_ideal,
    s_polynomial,
)
from .multiview import CameraRig, conjecture_value, ed_degree_multiview, hl_bound, multiview_map, random_camera_rig
from .poly import DEGREVLEX, LEX, MonomialOrder, PolyRing, Polynomial, block, parse_poly

__version__ = "0.1.0"
