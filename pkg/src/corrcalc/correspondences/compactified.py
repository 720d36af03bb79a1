"""Compactified correspondence data over trees.

The twisted shape of a multidiagram is consumed through its unary
splitting: objects are the multimorphisms, morphisms witness "is a
factor of".  Over that inverse category the total diagram of a tree of
correspondences is realized by limits of glued span diagrams, and its
exterior compactifications are chosen compatibly with tree
concatenation by extending from final (out-closed) subdiagrams.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..comp.classes import CompactificationClasses
from ..comp.compactify import (
    BaseFunctor,
    DiagramMorphism,
    ExteriorCompactification,
    Factorization,
    common_refinement,
    constant_functor,
    exterior_compactify,
)
from ..fincat.core import FiniteCategory, StructureError
from ..fincat.fibrations import inverse_structure
from ..twcalc.multicat import FiniteMulticategory, list_morphisms
from ..twcalc.trees import Tree, concat_trees
from .corr import MultiCorrespondence


def factor_label(al: str, be: str, vl: str, pos: int, u) -> str:
    return f"{al}>{be}@{vl}@{pos}@{'|'.join(u.blocks)}"


def tw_factor_category(M: FiniteMulticategory, name: str = ""):
    """The unary splitting of the twisted shape of a multidiagram.

    Objects are the multimorphisms of M.  A morphism alpha -> beta is a
    factorization witness (v, pos, u): a multimorphism v into alpha's
    target carrying beta's target at source slot pos, and a morphism of
    lists developing alpha's sources onto v's sources with beta's
    plugged in at pos.  Parallel morphisms with different witnesses are
    genuinely distinct (factorizations through different cuts).

    Returns (category, witness table).
    """
    objs = list(M.mors)
    mors = []
    wit = {}
    for al in objs:
        a = M.mor(al)
        for vl in M.into(a.target):
            v = M.mor(vl)
            for pos, s in enumerate(v.sources):
                for bel in objs:
                    b = M.mor(bel)
                    if b.target != s:
                        continue
                    replaced = (v.sources[:pos] + tuple(b.sources)
                                + v.sources[pos + 1:])
                    for u in list_morphisms(M, a.sources, replaced):
                        lb = factor_label(al, bel, vl, pos, u)
                        if lb not in wit:
                            wit[lb] = (al, bel, vl, pos, u)
                            mors.append((lb, al, bel))
    ident = {}
    for al in objs:
        a = M.mor(al)
        idv = M.id_of(a.target)
        u = ListIdentity_for(M, a.sources)
        lb = factor_label(al, al, idv, 0, u)
        if lb not in wit:
            wit[lb] = (al, al, idv, 0, u)
            mors.append((lb, al, al))
        ident[al] = lb

    comp = {}
    for lb1, al, bel in mors:
        _, _, vl, pos, u = wit[lb1]
        for lb2, s2, d2 in mors:
            if s2 != bel:
                continue
            _, _, vl2, pos2, u2 = wit[lb2]
            clb = _compose_witness(M, wit[lb1], wit[lb2])
            if clb not in wit:
                raise StructureError(
                    f"witness composition left the morphism set: {clb!r}")
            comp[(lb1, lb2)] = clb
    cat = FiniteCategory(objs, mors, ident, comp,
                         name=name or f"tw({M.name})°")
    return cat, wit


def ListIdentity_for(M, sources):
    from ..twcalc.multicat import list_identity
    return list_identity(M, tuple(sources))


def _compose_witness(M: FiniteMulticategory, w1, w2) -> str:
    """Composite witness of (alpha -> beta via w1) then (beta -> gamma
    via w2)."""
    from ..twcalc.multicat import ListMorphism, compose_lists
    al, bel, vl, pos, u = w1
    _, gal, vl2, pos2, u2 = w2
    b = M.mor(bel)
    v = M.mor(vl)
    v12 = M.compose_at(vl, pos, vl2)
    new_pos = pos + pos2
    # refine the pos-block of u by u2: u maps alpha's sources onto
    # v.sources with beta's sources plugged at pos; replace that stretch
    # by its composite with u2
    bi = 0
    new_blocks = []
    for i in range(len(v.sources)):
        if i == pos:
            width = len(b.sources)
            stretch = u.blocks[bi:bi + width]
            src = tuple(s for mid in stretch for s in M.mor(mid).sources)
            restr = ListMorphism(src, tuple(b.sources), tuple(stretch))
            comp = compose_lists(M, restr, u2)
            new_blocks.extend(comp.blocks)
            bi += width
        else:
            new_blocks.append(u.blocks[bi])
            bi += 1
    a_sources = M.mor(al).sources
    v12_sources = M.mor(v12).sources
    g = M.mor(gal)
    replaced = (v12_sources[:new_pos] + tuple(g.sources)
                + v12_sources[new_pos + 1:])
    u12 = ListMorphism(tuple(a_sources), replaced, tuple(new_blocks))
    return factor_label(al, gal, v12, new_pos, u12)


@dataclass
class TreeCorrespondenceData:
    """Generator spans for a tree of correspondences (point-indexed).

    ``object_values[o]`` is the base object at the tree object o;
    ``generator_spans[g] = (apex, source_legs, target_leg)`` for each
    generating multimorphism (indexed by position in tree.generators).
    """

    tree: Tree
    object_values: dict
    generator_spans: dict


def total_diagram(data: TreeCorrespondenceData, M: FiniteMulticategory,
                  factor_cat: FiniteCategory,
                  classes: CompactificationClasses) -> BaseFunctor:
    """The admissible functor on the factor category of the twisted
    shape: a cut maps to the limit of its glued span diagram, and the
    factor maps are limit mediations."""
    ops = classes.ops
    tree = data.tree
    gen_index = {gs: k for k, gs in enumerate(tree.generators)}

    preorder_pos = {o: k for k, o in enumerate(tree.preorder())}

    def cut_shape(a):
        """Diagram of the multimorphism a: objects passed through plus
        the generator apexes inside the cut.  Object order follows the
        tree preorder so equal cuts in different ambient trees realize
        to identical chosen limits."""
        inside = _generators_inside(tree, a)
        objs = set()
        for gs, t in inside:
            objs.add(t)
            objs.update(gs)
        objs.update(a.sources)
        objs.add(a.target)
        ordered = sorted(objs, key=preorder_pos.__getitem__)
        shape_objs = [f"o:{o}" for o in ordered]
        mors = []
        values = {f"o:{o}": data.object_values[o] for o in ordered}
        arrows = {}
        for gs, t in inside:
            k = gen_index[(gs, t)]
            apex, legs, tleg = data.generator_spans[k]
            nm = f"a:{k}"
            shape_objs.append(nm)
            values[nm] = apex
            for j, s in enumerate(gs):
                mors.append((f"g:{k}:{j}", nm, f"o:{s}"))
                arrows[f"g:{k}:{j}"] = legs[j]
            mors.append((f"f:{k}", nm, f"o:{t}"))
            arrows[f"f:{k}"] = tleg
        mors += [(f"id:{o}", o, o) for o in shape_objs]
        ident = {o: f"id:{o}" for o in shape_objs}
        comp = {}
        for m, s, d in mors:
            comp[(f"id:{s}", m)] = m
            comp[(m, f"id:{d}")] = m
        for o in shape_objs:
            comp[(f"id:{o}", f"id:{o}")] = f"id:{o}"
        shape = FiniteCategory(shape_objs, mors, ident, comp, name="cut")
        return shape, values, arrows

    lims = {}

    def value_of(al):
        """(value, cone over the cut diagram, shape, kind).

        Identity cuts take the object itself and single-generator cuts
        the span apex (keeping values literal); other cuts take the
        honest limit, whose cone is jointly injective.
        """
        if al not in lims:
            a = M.mor(al)
            inside = _generators_inside(tree, a)
            shape, values, arrows = cut_shape(a)
            if not inside and a.sources == (a.target,):
                obj = data.object_values[a.target]
                cone = {f"o:{a.target}": ops.identity(obj)}
                lims[al] = (obj, cone, shape, "object")
            elif len(inside) == 1 and a.sources == inside[0][0] \
                    and a.target == inside[0][1]:
                k = gen_index[inside[0]]
                apex, legs, tleg = data.generator_spans[k]
                cone = {f"a:{k}": ops.identity(apex),
                        f"o:{a.target}": tleg}
                for j, s in enumerate(inside[0][0]):
                    cone[f"o:{s}"] = legs[j]
                lims[al] = (apex, cone, shape, "apex")
            else:
                L, cone = ops.limit(shape, values, arrows)
                lims[al] = (L, cone, shape, "limit")
        return lims[al]

    obj_map = {}
    for al in factor_cat.objects:
        obj_map[al] = value_of(al)[0]
    mor_map = {}
    for ml in factor_cat.morphisms:
        al, be = factor_cat.src(ml), factor_cat.dst(ml)
        if al == be and factor_cat.id_of(al) == ml:
            mor_map[ml] = ops.identity(obj_map[al])
            continue
        La, cone_a, shape_a, _ = value_of(al)
        Lb, cone_b, shape_b, kind_b = value_of(be)
        if kind_b == "object":
            b = M.mor(be)
            mor_map[ml] = cone_a[f"o:{b.target}"]
        elif kind_b == "apex":
            b = M.mor(be)
            k = gen_index[_generators_inside(tree, b)[0]]
            mor_map[ml] = cone_a[f"a:{k}"]
        else:
            legs = {o: cone_a[o] for o in shape_b.objects}
            mor_map[ml] = ops.mediate_limit(Lb, cone_b, shape_b.objects, legs)
    out = BaseFunctor(factor_cat, obj_map, mor_map, name="total")
    rep = out.validate(ops)
    if not rep.ok:
        raise StructureError(f"total diagram not functorial: {rep.violations[:3]}")
    return out


def _generators_inside(tree: Tree, a) -> list:
    """Generators of the tree strictly between a's sources and target."""
    inside = []
    frontier = set(a.sources)

    def covered(o, seen):
        # does o develop from the frontier using generators, collecting them
        if o in frontier:
            return []
        gen = tree.generator_into(o)
        if gen is None:
            return None
        used = [gen]
        for s in gen[0]:
            sub = covered(s, seen)
            if sub is None:
                return None
            used.extend(sub)
        return used

    used = covered(a.target, set())
    if used is None:
        if (a.target,) == a.sources:
            return []
        raise StructureError("cut does not develop from its frontier")
    return used


def identity_objects_subdiagram(M: FiniteMulticategory,
                                factor_cat: FiniteCategory) -> list:
    """The identity multimorphisms, as a final (out-closed) subdiagram
    of the factor category."""
    return [al for al in factor_cat.objects if M.is_identity(al)]


@dataclass
class CompactifiedTreeMorphism:
    """A tree of correspondences with a chosen compactification of its
    total diagram, restricting to given compactifications on the tree
    objects."""

    data: TreeCorrespondenceData
    M: FiniteMulticategory
    factor_cat: FiniteCategory
    witnesses: dict
    total: BaseFunctor
    ext: ExteriorCompactification

    def restriction_at(self, obj) -> tuple:
        """(value, bar value, embedding component) at a tree object."""
        al = self.M.id_of(obj)
        return (self.total.obj[al], self.ext.bar.obj[al], self.ext.iota[al])


def compactified_hom(data: TreeCorrespondenceData,
                     classes: CompactificationClasses,
                     object_exts: dict | None = None) -> CompactifiedTreeMorphism:
    """Choose an exterior compactification of the total diagram of a
    tree of correspondences, extending given per-object data.

    ``object_exts[o] = (bar object, embedding)`` optionally pins the
    compactification at the tree objects (a final subdiagram of the
    factor category); the output restricts to it verbatim.
    """
    from ..twcalc.multicat import free_multicategory
    ops = classes.ops
    M = free_multicategory(data.tree)
    fc, wit = tw_factor_category(M)
    if inverse_structure(fc) is None:
        raise StructureError("factor category failed to be inverse")
    X = total_diagram(data, M, fc, classes)
    given_ext = None
    given_objects = None
    if object_exts:
        given_objects = [M.id_of(o) for o in object_exts]
        bar_obj = {}
        bar_mor = {}
        iota = {}
        for o, (bo, io) in object_exts.items():
            al = M.id_of(o)
            bar_obj[al] = bo
            bar_mor[fc.id_of(al)] = ops.identity(bo)
            iota[al] = io
        given_ext = ExteriorCompactification(
            X, BaseFunctor(fc, bar_obj, bar_mor), iota)
    ext = exterior_compactify(X, classes, given=given_ext,
                              given_objects=given_objects)
    return CompactifiedTreeMorphism(data, M, fc, wit, X, ext)


def compose_compactified(outer: CompactifiedTreeMorphism, slot_obj: str,
                         inner: CompactifiedTreeMorphism,
                         classes: CompactificationClasses) -> CompactifiedTreeMorphism:
    """Concatenate two compactified trees; the composite's chosen
    compactification restricts to the two given ones bit-for-bit."""
    ops = classes.ops
    tree = concat_trees(outer.data.tree, slot_obj, inner.data.tree)
    ren = {}
    for o in inner.data.tree.objects:
        ren[o] = slot_obj if o == inner.data.tree.root else f"{slot_obj}.{o}"
    object_values = dict(outer.data.object_values)
    for o, v in inner.data.object_values.items():
        object_values[ren[o]] = v
    generator_spans = dict(outer.data.generator_spans)
    for k, gs in enumerate(inner.data.tree.generators):
        generator_spans[len(outer.data.tree.generators) + k] = \
            inner.data.generator_spans[k]
    data = TreeCorrespondenceData(tree, object_values, generator_spans)

    from ..twcalc.multicat import free_multicategory
    M = free_multicategory(tree)
    fc, wit = tw_factor_category(M)
    X = total_diagram(data, M, fc, classes)

    # seed the composite's compactification from both pieces on the
    # union of the two sub-tree factor categories (a final subdiagram)
    bar_obj = {}
    bar_mor = {}
    iota = {}
    seeded = set()

    def seed_from(piece: CompactifiedTreeMorphism, rename):
        from ..twcalc.multicat import ListMorphism
        for al in piece.factor_cat.objects:
            a = piece.M.mor(al)
            nal = _rename_mid(a, rename)
            if nal not in set(fc.objects):
                raise StructureError("sub-tree object missing in composite")
            bar_obj[nal] = piece.ext.bar.obj[al]
            iota[nal] = piece.ext.iota[al]
            seeded.add(nal)
        for ml in piece.factor_cat.morphisms:
            w = piece.witnesses[ml]
            al, bel, vl, pos, u = w
            nal = _rename_mid(piece.M.mor(al), rename)
            nbe = _rename_mid(piece.M.mor(bel), rename)
            nvl = _rename_mid(piece.M.mor(vl), rename)
            nu = ListMorphism(
                tuple(rename.get(x, x) for x in u.src),
                tuple(rename.get(x, x) for x in u.dst),
                tuple(_rename_mid(piece.M.mor(bb), rename)
                      for bb in u.blocks))
            bar_mor[factor_label(nal, nbe, nvl, pos, nu)] = \
                piece.ext.bar.mor[ml]

    seed_from(outer, {})
    seed_from(inner, ren)
    given_objects = sorted(seeded)
    mid = BaseFunctor(fc, bar_obj, bar_mor)
    ext = exterior_compactify(
        X, classes,
        given=ExteriorCompactification(X, mid, iota),
        given_objects=given_objects)
    out = CompactifiedTreeMorphism(data, M, fc, wit, X, ext)
    # bit-for-bit restriction
    for al in given_objects:
        if out.ext.bar.obj[al] != bar_obj[al] or out.ext.iota[al] != iota[al]:
            raise StructureError("composite compactification failed to "
                                 "restrict to the given pieces")
    return out


def _rename_mid(m, rename) -> str:
    srcs = tuple(rename.get(s, s) for s in m.sources)
    tgt = rename.get(m.target, m.target)
    return f"({','.join(srcs)};{tgt})"


def refinement_roof(a: CompactifiedTreeMorphism, b: CompactifiedTreeMorphism,
                    classes: CompactificationClasses):
    """Connect two compactifications of the same data by a refinement
    roof: a third compactification dominating both, with the point-wise
    proper comparison morphisms."""
    ops = classes.ops
    if a.total.obj != b.total.obj:
        raise StructureError("the two compactifications differ in substance")
    const = constant_functor(a.factor_cat, ops)
    to_t = DiagramMorphism(a.total, const,
                           {o: ops.to_terminal(a.total.obj[o])
                            for o in a.factor_cat.objects})
    fact_a = Factorization(
        DiagramMorphism(a.total, a.ext.bar, a.ext.iota),
        DiagramMorphism(a.ext.bar, const,
                        {o: ops.to_terminal(a.ext.bar.obj[o])
                         for o in a.factor_cat.objects}))
    fact_b = Factorization(
        DiagramMorphism(b.total, b.ext.bar, b.ext.iota),
        DiagramMorphism(b.ext.bar, const,
                        {o: ops.to_terminal(b.ext.bar.obj[o])
                         for o in b.factor_cat.objects}))
    return common_refinement(to_t, fact_a, fact_b, classes)


def localized_two_morphisms(a: MultiCorrespondence, b: MultiCorrespondence,
                            classes: CompactificationClasses,
                            mode: str = "plain") -> list:
    """Two-morphisms between multicorrespondences; in the localized
    category they are represented by their underlying components (the
    forgetful functor is full and faithful on parallel pairs)."""
    from ..finset import FinMap, FinObj
    ops = classes.ops
    out = []
    if a.arity != b.arity:
        return out
    apex_a, apex_b = a.apex, b.apex
    if isinstance(apex_a, FinObj):
        candidates = _all_maps(apex_a, apex_b)
    else:
        candidates = classes.ops.cat.hom(apex_a, apex_b)
    for h in candidates:
        ok = all(ops.then(h, g2) == g1
                 for g1, g2 in zip(a.source_legs, b.source_legs))
        ok = ok and ops.then(h, b.target_leg) == a.target_leg
        if not ok:
            continue
        if mode == "plain" and not ops.is_iso(h):
            continue
        if mode in ("lax", "oplax") and not classes.is_s0(h):
            continue
        out.append(h)
    return out


def _all_maps(A, B):
    from itertools import product as iproduct
    from ..finset import FinMap
    if len(A) == 0:
        return [FinMap(A, B, ())]
    if len(B) == 0:
        return []
    return [FinMap(A, B, idx) for idx in iproduct(range(len(B)), repeat=len(A))]
