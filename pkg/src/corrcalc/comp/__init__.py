"""Categories with compactifications: axioms, recognition lemmas, and
the compactification algorithms for morphisms and diagrams."""

from .axioms import (
    CorruptedPullbackOps,
    Square,
    check_axioms,
    derived_lemma_suite,
    finset_window,
    is_cartesian_square,
    is_weakly_cartesian,
    window_for,
)
from .classes import (
    CompactificationClasses,
    classes_from_dict,
    classes_to_dict,
    finset_classes,
    toy_category,
    toy_classes,
    toy_classes_alt,
)
from .compactify import (
    BaseFunctor,
    DiagramMorphism,
    ExteriorCompactification,
    Factorization,
    InteriorCompactification,
    Refinement,
    common_refinement,
    compactify_morphism,
    constant_functor,
    extend_compactification,
    exterior_compactify,
    induced_interior,
    interior_morphism,
)
