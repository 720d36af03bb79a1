"""Explicit finite categories and their shape constructions."""

from .core import (
    DegreeFunction,
    FiniteCategory,
    Functor,
    NaturalTransformation,
    StructureError,
    ValidationReport,
    are_isomorphic,
    delta_category,
    discrete_category,
    find_isomorphism,
    full_subcategory,
    identity_functor,
    opposite_category,
    poset_category,
    product_category,
    pullback_category,
    terminal_category,
    validate_category,
)
from .fibrations import (
    FibrationReport,
    QFiberReport,
    check_opfibration,
    comma_under,
    fiber_category,
    inverse_structure,
    is_cartesian,
    is_cocartesian,
    matching_category,
    q_fiber_check,
    xi_functor,
)
from .schema import category_from_dict, category_to_dict
from .xi import (
    SizeCapExceeded,
    XiCategory,
    coherent_shape,
    comma_over,
    diagonal_functor,
    interior_shape,
    morphism_type,
    parse_xi,
    restriction_functor,
    tww_to_dd_tw,
    twisted_arrow,
    xi_category,
)
