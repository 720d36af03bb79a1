"""Morphism-set enumeration for compactified evaluations and coherent
diagram construction from point data (point-indexed trees)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from ..comp.classes import CompactificationClasses
from ..correspondences.compactified import (
    CompactifiedTreeMorphism,
    TreeCorrespondenceData,
    compactified_hom,
)
from ..fincat.core import StructureError
from ..report import Report
from ..twcalc.trees import Tree
from ..vectfam.family import (
    FamilyMap,
    VectFamily,
    compose_family_maps,
    identity_family_map,
    is_invertible,
    vertical_map,
)
from ..vectfam.functors import hom_space_dim, iota_shriek, multi_pushforward, pushforward_u
from .coherent import (
    Filler,
    TreeInterior,
    canonical_defining_maps,
    canonical_values,
    solve_remaining_maps,
)

CANDIDATE_CAP = 2 ** 16


@dataclass
class HomWitness:
    """The enumerated morphism set against the mapping space of the
    compactified evaluation."""

    m_count: int
    hom_count: int
    comparison_bijective: bool
    free_generators: tuple
    report: Report


def _enumerate_vertical_maps(E: VectFamily, F: VectFamily):
    field = E.field
    if not field.is_prime_field:
        raise StructureError("hom enumeration needs a finite field")
    total = hom_space_dim(E, F)
    if field.p ** total > CANDIDATE_CAP:
        raise StructureError("enumeration exceeds the candidate cap")
    for entries in iproduct(range(field.p), repeat=total):
        blocks = []
        off = 0
        for i in range(len(E.dims)):
            r, c = F.dims[i], E.dims[i]
            m = field.zeros(r, c)
            for a in range(r):
                for b in range(c):
                    m[a, b] = entries[off]
                    off += 1
            blocks.append(m)
        yield vertical_map(E, F, tuple(blocks))


def hom_set_check_point(data: TreeCorrespondenceData,
                        deg0: dict,
                        classes: CompactificationClasses,
                        ctm: CompactifiedTreeMorphism | None = None) -> HomWitness:
    """Count flag-satisfying fillers over a point-indexed tree and compare
    with the target mapping space.

    Canonical values are built from the degree-zero data; the free data
    are the type-1 generator maps, enumerated over the (finite) field;
    a filler survives when all remaining maps solve and every relation
    square commutes.  The comparison map reads off the type-1
    components; bijectivity onto the direct mapping space is asserted.
    """
    rep = Report("hom-sets")
    if ctm is None:
        ctm = compactified_hom(data, classes)
    interior = TreeInterior(ctm, classes)
    values, defining = canonical_values(interior, deg0)
    base_maps = canonical_defining_maps(interior, values, defining)
    free = [m for m in interior.gens[1] if m not in base_maps]
    if not free:
        raise StructureError("no free type-1 data (degenerate tree)")

    shell = Filler(interior, values, dict(base_maps))
    spaces = []
    for mid in free:
        src, tgt = shell.map_matrix_space(mid)
        spaces.append(list(_enumerate_vertical_maps(src, tgt)))

    survivors = []
    for combo in iproduct(*spaces):
        assignment = dict(zip(free, combo))
        try:
            full = solve_remaining_maps(interior, values, base_maps,
                                        assignment)
        except StructureError:
            continue
        filler = Filler(interior, values, full)
        if not filler.flag_report().ok:
            continue
        if not filler.squares_commute():
            continue
        sig = tuple(tuple(map(tuple, fm.field.entries(b)))
                    for fm in combo for b in fm.blocks)
        survivors.append(sig)

    # the independent side: mapping space of the direct evaluation
    hom_count = _junction_hom_product(ctm, classes, deg0)
    distinct = len(set(survivors))
    bijective = (distinct == len(survivors) == hom_count)
    rep.record(bijective, None if bijective else {
        "m": len(survivors), "hom": hom_count})
    return HomWitness(len(survivors), hom_count, bijective, tuple(free), rep)


def _junction_hom_product(ctm: CompactifiedTreeMorphism,
                          classes: CompactificationClasses,
                          deg0: dict) -> int:
    """Product over tree generators of the direct mapping-space sizes
    |Hom(evaluation of the generator span at the given inputs, given
    output)| (the part-2 factorization of the morphism set)."""
    tree = ctm.data.tree
    field = next(iter(deg0.values())).field
    total = 1
    for k, (gs, t) in enumerate(tree.generators):
        apex, legs, tleg = ctm.data.generator_spans[k]
        ins = [deg0[s] for s in gs]
        if ins:
            inner = multi_pushforward(legs, ins)
        else:
            from ..vectfam.family import unit_family
            inner = unit_family(field, apex)
        out = pushforward_u(tleg, inner)
        total *= field.p ** hom_space_dim(out, deg0[t])
    return total


def evaluation_hom_count(ctm: CompactifiedTreeMorphism,
                         classes: CompactificationClasses,
                         deg0: dict) -> int:
    """|Hom(ftilde_* iotatilde_! gtilde^*(inputs), output)| computed from
    the evaluation directly (independent of the filler enumeration)."""
    interior = TreeInterior(ctm, classes)
    tree = ctm.data.tree
    sources = tree.source_objects
    root = tree.root
    field = next(iter(deg0.values())).field
    # evaluate along the tree: iterate the compactified evaluation
    vals = {o: deg0[o] for o in sources}

    def eval_at(o):
        if o in vals:
            return vals[o]
        gen = tree.generator_into(o)
        if gen is None:
            raise StructureError(f"object {o!r} has no inputs")
        gs, t = gen
        ins = [eval_at(s) for s in gs]
        k = list(tree.generators).index(gen)
        apex, legs, tleg = ctm.data.generator_spans[k]
        inner = multi_pushforward(legs, ins) if ins else None
        if inner is None:
            from ..vectfam.family import unit_family
            inner = unit_family(field, apex)
        vals[o] = pushforward_u(tleg, inner)
        return vals[o]

    out = eval_at(root)
    return field.p ** hom_space_dim(out, deg0[root])


def build_coherent_point(data: TreeCorrespondenceData, deg0: dict,
                         transition: dict,
                         classes: CompactificationClasses) -> Filler:
    """A coherent filler from point data and transition maps.

    ``transition[mid]`` supplies the type-1 generator maps; everything
    else is built canonically and solved, and the flags plus relation
    squares are verified.
    """
    ctm = compactified_hom(data, classes)
    interior = TreeInterior(ctm, classes)
    values, defining = canonical_values(interior, deg0)
    maps = canonical_defining_maps(interior, values, defining)
    full = solve_remaining_maps(interior, values, maps, dict(transition))
    filler = Filler(interior, values, full)
    frep = filler.flag_report()
    if not frep.ok:
        raise StructureError(f"flags failed: {frep.failures[:3]}")
    if not filler.squares_commute():
        raise StructureError("relation squares failed to commute")
    return filler
