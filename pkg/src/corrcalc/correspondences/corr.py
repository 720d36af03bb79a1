"""Multicorrespondences and their strictly associative composition via
abstract fiber products, admissibility of twisted-shape diagrams, lax
and oplax encodings, 2-morphisms, and the symmetric-group action.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..comp.axioms import Square, is_cartesian_square, is_weakly_cartesian
from ..comp.classes import CompactificationClasses
from ..comp.compactify import BaseFunctor
from ..fincat.core import StructureError
from ..fincat.xi import XiCategory, twisted_arrow
from .afp import (
    AbstractFiberProduct,
    afp_bytes,
    concat_afp,
    realize_afp,
    reduce_afp,
    single_vertex,
)


@dataclass(frozen=True)
class MultiCorrespondence:
    """A span with several source legs and one target leg, together with
    its abstract-fiber-product witness."""

    apex: object
    source_legs: tuple
    target_leg: object
    witness: AbstractFiberProduct = None

    @property
    def arity(self) -> int:
        return len(self.source_legs)

    def validate(self, ops) -> None:
        for g in self.source_legs:
            if ops.src(g) != self.apex:
                raise StructureError("source leg does not start at the apex")
        if ops.src(self.target_leg) != self.apex:
            raise StructureError("target leg does not start at the apex")
        if self.witness is not None:
            self.witness.validate(ops)

    def source_objects(self, ops) -> tuple:
        return tuple(ops.dst(g) for g in self.source_legs)

    def target_object(self, ops):
        return ops.dst(self.target_leg)


def plain_correspondence(ops, apex, source_legs, target_leg) -> MultiCorrespondence:
    w = single_vertex(ops, apex, source_legs, target_leg)
    return MultiCorrespondence(apex, tuple(source_legs), target_leg, w)


def identity_correspondence(ops, obj) -> MultiCorrespondence:
    i = ops.identity(obj)
    return plain_correspondence(ops, obj, (i,), i)


def compose_corr(outer: MultiCorrespondence, slot: int,
                 inner: MultiCorrespondence, classes: CompactificationClasses):
    """Graft ``inner`` into a source slot of ``outer``.

    The abstract-fiber-product witness is concatenated and reduced
    (strictly associative); the realized span is recomputed from the
    reduced witness so equal records realize identically.
    """
    ops = classes.ops
    s_obj = ops.dst(outer.source_legs[slot])
    if inner.target_object(ops) != s_obj:
        raise StructureError("slot type mismatch")
    glued = concat_afp(outer.witness, slot, s_obj, inner.witness)
    reduced = reduce_afp(glued, ops)
    return realize_correspondence(reduced, ops), reduced


def realize_correspondence(w: AbstractFiberProduct, ops) -> MultiCorrespondence:
    L, sources, target, _ = realize_afp(w, ops)
    return MultiCorrespondence(L, tuple(sources), target, w)


def sym_action(sigma, xi: MultiCorrespondence) -> MultiCorrespondence:
    """Permute the source slots: slot i of the result is slot sigma[i]."""
    if sorted(sigma) != list(range(xi.arity)):
        raise StructureError("not a permutation of the slots")
    legs = tuple(xi.source_legs[sigma[i]] for i in range(xi.arity))
    w = xi.witness
    if w is not None:
        w = AbstractFiberProduct(w.vertices, w.edges,
                                 tuple(w.sources[sigma[i]]
                                       for i in range(xi.arity)),
                                 w.target, w.reduced)
    return MultiCorrespondence(xi.apex, legs, xi.target_leg, w)


@dataclass(frozen=True)
class CorrTwoMorphism:
    """A morphism of multicorrespondences commuting with all legs."""

    component: object     # h: apex -> apex'
    source: MultiCorrespondence
    target: MultiCorrespondence
    kind: str             # "iso" or "proper"

    def validate(self, classes: CompactificationClasses) -> None:
        ops = classes.ops
        h = self.component
        a, b = self.source, self.target
        if a.arity != b.arity:
            raise StructureError("arity mismatch")
        for g1, g2 in zip(a.source_legs, b.source_legs):
            if ops.then(h, g2) != g1:
                raise StructureError("source-leg triangle does not commute")
        if ops.then(h, b.target_leg) != a.target_leg:
            raise StructureError("target-leg triangle does not commute")
        if self.kind == "iso":
            if not ops.is_iso(h):
                raise StructureError("plain 2-morphisms must be isomorphisms")
        elif self.kind == "proper":
            if not classes.is_s0(h):
                raise StructureError("lax/oplax 2-morphisms must be proper")
        else:
            raise StructureError(f"unknown kind {self.kind!r}")


def two_morphism(h, source: MultiCorrespondence, target: MultiCorrespondence,
                 mode: str, classes: CompactificationClasses) -> CorrTwoMorphism:
    kind = "iso" if mode == "plain" else "proper"
    out = CorrTwoMorphism(h, source, target, kind)
    out.validate(classes)
    return out


def compose_two_morphisms(first: CorrTwoMorphism, second: CorrTwoMorphism,
                          classes) -> CorrTwoMorphism:
    if first.target is not second.source and first.target != second.source:
        raise StructureError("2-morphisms not composable")
    kind = "iso" if first.kind == second.kind == "iso" else "proper"
    out = CorrTwoMorphism(classes.ops.then(first.component, second.component),
                          first.source, second.target, kind)
    out.validate(classes)
    return out


# -- admissibility of twisted-shape diagrams ---------------------------------


@dataclass
class AdmissibleDiagram:
    shape: XiCategory            # the twisted-arrow shape of the index
    functor: BaseFunctor
    certificate: list            # checked squares
    weak: bool = False


def _typed_squares(tw: XiCategory, h_type: int, v_type: int):
    """Commuting squares in a ladder category with horizontals of one
    type and verticals of another (corner-first enumeration)."""
    out = []
    by_src = {}
    for m in tw.morphisms:
        by_src.setdefault(tw.src(m), []).append(m)
    for w in tw.objects:
        hs = [m for m in by_src.get(w, ()) if tw.morphism_type(m) == h_type]
        vs = [m for m in by_src.get(w, ()) if tw.morphism_type(m) == v_type]
        for h1 in hs:
            for v1 in vs:
                z, y = tw.dst(h1), tw.dst(v1)
                for v2 in by_src.get(z, ()):
                    if tw.morphism_type(v2) not in (v_type, "all"):
                        continue
                    for h2 in by_src.get(y, ()):
                        if tw.morphism_type(h2) not in (h_type, "all"):
                            continue
                        if tw.dst(v2) == tw.dst(h2) and \
                           tw.then(h1, v2) == tw.then(v1, h2):
                            out.append((w, h1, v1, v2, h2))
    return out


def check_admissible(tw: XiCategory, functor: BaseFunctor,
                     classes: CompactificationClasses,
                     weak: bool = False):
    """Scan the squares with type-2 horizontals and type-1 verticals;
    Cartesian (or weakly Cartesian) is required of every image square.

    Returns an AdmissibleDiagram or the first counterexample square.
    """
    ops = classes.ops
    cert = []
    for (w, h1, v1, v2, h2) in _typed_squares(tw, 2, 1):
        sq = Square(p=functor.mor[h1], q=functor.mor[v1],
                    f=functor.mor[v2], g=functor.mor[h2])
        ok = is_weakly_cartesian(sq, classes) if weak \
            else is_cartesian_square(sq, ops)
        if not ok:
            return None, (w, h1, v1, v2, h2)
        cert.append((w, h1, v1))
    return AdmissibleDiagram(tw, functor, cert, weak), None


def chain_diagram_from_spans(n: int, objects, spans,
                             classes: CompactificationClasses):
    """Admissible twisted-shape diagram over a linear order 0 < ... < n.

    ``objects[k]`` is the base object at k; ``spans[k] = (apex, g, f)``
    the span over the generator k -> k+1.  Values over longer morphisms
    are limits of the glued path diagrams (realized abstract fiber
    products) and all structural maps are limit mediations, so the
    result is admissible by construction.  Returns (functor, I, tw I).
    """
    from ..fincat.core import delta_category
    ops = classes.ops
    I = delta_category(n)
    tw = twisted_arrow(I)

    data = {}

    def interval_limit(a, b):
        if (a, b) in data:
            return data[(a, b)]
        if a == b:
            obj = objects[a]
            out = (obj, {f"o{a}": ops.identity(obj)})
        elif b == a + 1:
            apex, g, f = spans[a]
            out = (apex, {f"o{a}": g, f"o{b}": f,
                          f"a{a}": ops.identity(apex)})
        else:
            shape, values, arrows = _path_shape(a, b, objects, spans)
            L, cone = ops.limit(shape, values, arrows)
            out = (L, dict(cone))
        data[(a, b)] = out
        return out

    def mediate(src_iv, dst_iv):
        L1, legs1 = interval_limit(*src_iv)
        if src_iv == dst_iv:
            return ops.identity(L1)
        a2, b2 = dst_iv
        L2, legs2 = interval_limit(*dst_iv)
        if a2 == b2:
            return legs1[f"o{a2}"]
        if b2 == a2 + 1:
            return legs1[f"a{a2}"]
        shape, values, arrows = _path_shape(a2, b2, objects, spans)
        return ops.mediate_limit(L2, legs2, shape.objects,
                                 {k: legs1[k] for k in shape.objects})

    obj_map = {}
    mor_map = {}
    for lb in tw.objects:
        (m,) = tw.chain_mors[lb]
        a, b = int(I.src(m)), int(I.dst(m))
        obj_map[lb] = interval_limit(a, b)[0]
    for ml in tw.morphisms:
        la, lb2, _ = tw.ladder[ml]
        (m1,) = tw.chain_mors[la]
        (m2,) = tw.chain_mors[lb2]
        src_iv = (int(I.src(m1)), int(I.dst(m1)))
        dst_iv = (int(I.src(m2)), int(I.dst(m2)))
        mor_map[ml] = mediate(src_iv, dst_iv)
    out = BaseFunctor(tw, obj_map, mor_map, name=f"chain-spans-{n}")
    rep = out.validate(ops)
    if not rep.ok:
        raise StructureError(f"span diagram not functorial: {rep.violations[:3]}")
    return out, I, tw


def _path_shape(a, b, objects, spans):
    """The zigzag o_a <- apex_a -> o_{a+1} <- ... -> o_b as a diagram."""
    from ..fincat.core import FiniteCategory
    objs = []
    mors = []
    values = {}
    arrows = {}
    for k in range(a, b + 1):
        objs.append(f"o{k}")
        values[f"o{k}"] = objects[k]
    for k in range(a, b):
        apex, g, f = spans[k]
        objs.append(f"a{k}")
        values[f"a{k}"] = apex
        mors.append((f"g{k}", f"a{k}", f"o{k}"))
        mors.append((f"f{k}", f"a{k}", f"o{k + 1}"))
        arrows[f"g{k}"] = g
        arrows[f"f{k}"] = f
    mors += [(f"id:{o}", o, o) for o in objs]
    ident = {o: f"id:{o}" for o in objs}
    comp = {}
    for m, s2, d in mors:
        comp[(f"id:{s2}", m)] = m
        comp[(m, f"id:{d}")] = m
    for o in objs:
        comp[(f"id:{o}", f"id:{o}")] = f"id:{o}"
    return FiniteCategory(objs, mors, ident, comp, name="path"), values, arrows


def product_diagram(I1, tw1: XiCategory, X1: BaseFunctor,
                    I2, tw2: XiCategory, X2: BaseFunctor,
                    classes: CompactificationClasses):
    """External product of two admissible diagrams: the value over a
    pair of morphisms is the chosen product of the two values; products
    of admissible diagrams are admissible.  Returns (functor, I, tw I).
    """
    from ..fincat.core import product_category
    from ..fincat.xi import chain_label, ladder_label
    ops = classes.ops
    I = product_category(I1, I2)
    tw = twisted_arrow(I)
    obj_map = {}
    prods = {}
    mor_map = {}

    def pair_obj(lb):
        (m,) = tw.chain_mors[lb]
        m1, m2 = _split_pair_label(m)
        lb1 = chain_label((I1.src(m1), I1.dst(m1)), (m1,))
        lb2 = chain_label((I2.src(m2), I2.dst(m2)), (m2,))
        return lb1, lb2

    for lb in tw.objects:
        lb1, lb2 = pair_obj(lb)
        P, projs = ops.product([X1.obj[lb1], X2.obj[lb2]])
        obj_map[lb] = P
        prods[lb] = (P, projs)
    for ml in tw.morphisms:
        la, lb2_, (u, v) = tw.ladder[ml]
        u1, u2 = _split_pair_label(u)
        v1, v2 = _split_pair_label(v)
        a1, a2 = pair_obj(la)
        b1, b2 = pair_obj(lb2_)
        f1 = X1.mor[ladder_label(a1, b1, (u1, v1))]
        f2 = X2.mor[ladder_label(a2, b2, (u2, v2))]
        Pa, projs_a = prods[la]
        Pb, projs_b = prods[lb2_]
        mor_map[ml] = ops.tuple_map(Pb, projs_b,
                                    [ops.then(projs_a[0], f1),
                                     ops.then(projs_a[1], f2)])
    out = BaseFunctor(tw, obj_map, mor_map, name="product-diagram")
    rep = out.validate(ops)
    if not rep.ok:
        raise StructureError(f"product diagram not functorial: {rep.violations[:3]}")
    return out, I, tw


def _split_pair_label(s: str):
    if not (s.startswith("(") and s.endswith(")")):
        raise StructureError(f"not a pair label: {s!r}")
    body = s[1:-1]
    depth = 0
    for i, ch in enumerate(body):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            return body[:i], body[i + 1:]
    raise StructureError(f"malformed pair label: {s!r}")
