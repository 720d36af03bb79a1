"""Trees as multicategories and their ladder multidiagrams."""

from .multicat import (
    FiniteMulticategory,
    ListMorphism,
    MultiMor,
    compose_lists,
    concat_list_morphisms,
    free_multicategory,
    is_list_identity,
    list_identity,
    list_morphisms,
    product_with_category,
)
from .trees import Tree, all_trees, concat_trees, delta_tree
from .ximulti import (
    ChainObject,
    LadderMultiMor,
    XiMultidiagram,
    generators_relations,
    tree_degree,
    unaryize,
    xi_multidiagram,
)
