"""Exact computations with birational maps of projective space."""

from .fields import GF, QQ, Field
from .grammar import ParseError, format_poly, format_tuple, parse_family, parse_poly, parse_tuple
from .maps import (
    CremonaMap,
    apply_to_point,
    certify_birational,
    compose,
    de_jonquieres,
    identity,
    inverse,
    linear_from_matrix,
    standard_quadratic,
    true_degree,
)
from .polyring import (
    HomogeneousPoly,
    add,
    divide_exact,
    gcd_tuple,
    jacobian_det,
    mul,
    partial_derivative,
    substitute,
)
from .wspace import (
    MapTuple,
    ReducedForm,
    distance,
    distance_sq,
    fiber_distance_sq,
    is_multiple_of_identity,
    normalize,
)

__all__ = [
    "CremonaMap",
    "Field",
    "GF",
    "HomogeneousPoly",
    "MapTuple",
    "ParseError",
    "QQ",
    "ReducedForm",
    "add",
    "apply_to_point",
    "certify_birational",
    "compose",
    "de_jonquieres",
    "distance",
    "distance_sq",
    "divide_exact",
    "fiber_distance_sq",
    "format_poly",
    "format_tuple",
    "gcd_tuple",
    "identity",
    "inverse",
    "is_multiple_of_identity",
    "jacobian_det",
    "linear_from_matrix",
    "mul",
    "normalize",
    "parse_family",
    "parse_poly",
    "parse_tuple",
    "partial_derivative",
    "standard_quadratic",
    "substitute",
    "true_degree",
]

__version__ = "0.1.0"
