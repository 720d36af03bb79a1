"""Multicorrespondences, abstract fiber products, admissibility, and
compactified tree data."""

from .afp import (
    AbstractFiberProduct,
    afp_bytes,
    canonical_form,
    concat_afp,
    realize_afp,
    reduce_afp,
    single_vertex,
)
from .compactified import (
    CompactifiedTreeMorphism,
    TreeCorrespondenceData,
    compactified_hom,
    compose_compactified,
    localized_two_morphisms,
    refinement_roof,
    total_diagram,
    tw_factor_category,
)
from .corr import (
    AdmissibleDiagram,
    CorrTwoMorphism,
    MultiCorrespondence,
    chain_diagram_from_spans,
    check_admissible,
    compose_corr,
    compose_two_morphisms,
    identity_correspondence,
    plain_correspondence,
    product_diagram,
    realize_correspondence,
    sym_action,
    two_morphism,
)
