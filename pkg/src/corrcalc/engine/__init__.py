"""Evaluation of correspondences on families, coherent diagram data,
and the morphism-set checks of the compactified evaluation."""

from .coherent import (
    Filler,
    TreeInterior,
    canonical_defining_maps,
    canonical_values,
    solve_remaining_maps,
)
from .d1 import D1Base, D1BaseMorphism, D1Coherent, canonical_d1, hom_d1
from .d1check import D1Correspondence, d1_span_correspondence, evaluate_d1, hom_set_check_d1
from .evaluator import (
    composition_comparison,
    eval_compactified,
    eval_corr,
    eval_corr_nullary,
    eval_corr_on_maps,
)
from .homsets import HomWitness, build_coherent_point, hom_set_check_point
from .interior_suite import interior_suite, random_admissible_diagram
