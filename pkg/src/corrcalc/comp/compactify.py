"""Compactification of diagram morphisms over inverse shapes.

The factorization of a natural transformation into a point-wise dense
embedding followed by a point-wise proper map is built by induction on
the degree of the shape object: at each object the already-built data
is assembled by a limit over the matching category, pulled back, and
the comparison map is factorized by the class oracle.  The same engine
extends partial data given on a final (out-closed) subdiagram, produces
common refinements of two factorizations, and compactifies a diagram
exteriorly against the constant terminal diagram.

Interior compactifications are the induced functors on the two-chain
shape, with values the chosen pullbacks bar(i) x_{bar(j)} X(j); on the
three-chain shape of a twisted-arrow base they restrict along the
square-assignment functor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..fincat.core import FiniteCategory, StructureError, ValidationReport
from ..fincat.fibrations import inverse_structure, matching_category
from ..fincat.xi import XiCategory, comma_over, interior_shape, tww_to_dd_tw, twisted_arrow
from ..report import Report
from .classes import CompactificationClasses


@dataclass
class BaseFunctor:
    """A functor from an explicit finite shape into an oracle base."""

    shape: FiniteCategory
    obj: dict
    mor: dict
    name: str = ""

    def validate(self, ops) -> ValidationReport:
        bad = []
        for o in self.shape.objects:
            if o not in self.obj:
                bad.append(("missing-object", o))
        for m in self.shape.morphisms:
            if m not in self.mor:
                bad.append(("missing-morphism", m))
                continue
            f = self.mor[m]
            if ops.src(f) != self.obj[self.shape.src(m)] or \
               ops.dst(f) != self.obj[self.shape.dst(m)]:
                bad.append(("typing", m))
        if not bad:
            for o in self.shape.objects:
                if self.mor[self.shape.id_of(o)] != ops.identity(self.obj[o]):
                    bad.append(("identity", o))
            for f, g in self.shape.composable_pairs():
                if self.mor[self.shape.then(f, g)] != ops.then(self.mor[f], self.mor[g]):
                    bad.append(("composition", f, g))
        return ValidationReport("base-functor", tuple(bad))

    def restricted(self, objects) -> "BaseFunctor":
        keep = set(objects)
        obj = {o: v for o, v in self.obj.items() if o in keep}
        mor = {m: v for m, v in self.mor.items()
               if self.shape.src(m) in keep and self.shape.dst(m) in keep}
        return BaseFunctor(self.shape, obj, mor, name=self.name)


def constant_functor(shape: FiniteCategory, ops, value=None) -> BaseFunctor:
    v = ops.terminal() if value is None else value
    return BaseFunctor(shape, {o: v for o in shape.objects},
                       {m: ops.identity(v) for m in shape.morphisms},
                       name="const")


@dataclass
class DiagramMorphism:
    """A natural transformation between base-valued diagrams."""

    source: BaseFunctor
    target: BaseFunctor
    components: dict
    name: str = ""

    @property
    def shape(self) -> FiniteCategory:
        return self.source.shape

    def validate(self, ops) -> ValidationReport:
        bad = []
        sh = self.shape
        for o in sh.objects:
            c = self.components.get(o)
            if c is None or ops.src(c) != self.source.obj[o] or \
               ops.dst(c) != self.target.obj[o]:
                bad.append(("component-typing", o))
        if not bad:
            for m in sh.morphisms:
                a, b = sh.src(m), sh.dst(m)
                if ops.then(self.source.mor[m], self.components[b]) != \
                   ops.then(self.components[a], self.target.mor[m]):
                    bad.append(("naturality", m))
        return ValidationReport("diagram-morphism", tuple(bad))


@dataclass
class Factorization:
    """A point-wise dense-then-proper factorization of a morphism."""

    iota: DiagramMorphism
    fbar: DiagramMorphism

    @property
    def mid(self) -> BaseFunctor:
        return self.iota.target

    def composite_at(self, ops, o):
        return ops.then(self.iota.components[o], self.fbar.components[o])

    def validate(self, classes: CompactificationClasses,
                 of: DiagramMorphism | None = None) -> ValidationReport:
        ops = classes.ops
        bad = []
        bad += list(self.iota.validate(ops).violations)
        bad += list(self.fbar.validate(ops).violations)
        sh = self.iota.shape
        for o in sh.objects:
            if not classes.is_s1(self.iota.components[o]):
                bad.append(("iota-not-dense", o))
            if not classes.is_s0(self.fbar.components[o]):
                bad.append(("fbar-not-proper", o))
            if of is not None and self.composite_at(ops, o) != of.components[o]:
                bad.append(("not-a-factorization", o))
        return ValidationReport("factorization", tuple(bad))


def _ordered_by_degree(shape: FiniteCategory):
    wit = inverse_structure(shape)
    if wit is None:
        raise StructureError("shape is not an inverse category")
    return sorted(shape.objects, key=lambda o: (wit.deg[o], o)), wit


def _matching_limit(shape, i, functor: BaseFunctor, ops, match_cache):
    """Limit of a diagram over the matching category of i, with the
    canonical cone out of the value at i (legs indexed by M_i objects,
    which are the non-identity morphisms out of i)."""
    if i not in match_cache:
        match_cache[i] = matching_category(shape, i)
    M = match_cache[i]
    values = {m: functor.obj[shape.dst(m)] for m in M.objects}
    arrows = {}
    for ml in M.morphisms:
        h = ml.split("~")[2]
        arrows[ml] = functor.mor[h]
    L, cone = ops.limit(M, values, arrows)
    return M, L, cone


def _cone_from(shape, i, functor: BaseFunctor, ops, M, L, cone):
    """The canonical map functor(i) -> lim_{M_i} functor."""
    if not M.objects:
        return ops.to_terminal(functor.obj[i])
    legs = {m: functor.mor[m] for m in M.objects}
    return ops.mediate_limit(L, cone, M.objects, legs)


def compactify_morphism(f: DiagramMorphism, classes: CompactificationClasses,
                        given: Factorization | None = None,
                        given_objects=None) -> Factorization:
    """Factor a diagram morphism as dense-then-proper, point-wise.

    ``given``/``given_objects`` optionally supply data on an
    out-closed collection of shape objects (a final subdiagram); the
    output restricts to it verbatim.
    """
    ops = classes.ops
    shape = f.shape
    order, _ = _ordered_by_degree(shape)
    rep = f.validate(ops)
    if not rep.ok:
        raise StructureError(f"input not natural: {rep.violations[:3]}")

    fixed = set(given_objects or ())
    if fixed:
        _require_out_closed(shape, fixed)

    F, G = f.source, f.target
    bar_obj = {}
    bar_mor = {}
    iota = {}
    fbar = {}
    match_cache = {}

    # seed identities for bar as objects appear
    def set_bar_identity(o):
        bar_mor[shape.id_of(o)] = ops.identity(bar_obj[o])

    for i in order:
        if i in fixed:
            bar_obj[i] = given.mid.obj[i]
            iota[i] = given.iota.components[i]
            fbar[i] = given.fbar.components[i]
            set_bar_identity(i)
            for m in shape.morphisms_from(i):
                if not shape.is_identity(m):
                    bar_mor[m] = given.mid.mor[m]
            continue

        M, limF, coneF = _matching_limit(shape, i, F, ops, match_cache)
        _, limG, coneG = _matching_limit(shape, i, G, ops, match_cache)
        barpart = BaseFunctor(shape, bar_obj, bar_mor)
        _, limB, coneB = _matching_limit(shape, i, barpart, ops, match_cache)

        cF = _cone_from(shape, i, F, ops, M, limF, coneF)
        cG = _cone_from(shape, i, G, ops, M, limG, coneG)

        if M.objects:
            lim_iota = ops.mediate_limit(
                limB, coneB, M.objects,
                {m: ops.then(coneF[m], iota[shape.dst(m)]) for m in M.objects})
            lim_fbar = ops.mediate_limit(
                limG, coneG, M.objects,
                {m: ops.then(coneB[m], fbar[shape.dst(m)]) for m in M.objects})
        else:
            t = ops.terminal()
            lim_iota = ops.identity(t)
            lim_fbar = ops.identity(t)

        P, pG, pB = ops.pullback(cG, lim_fbar)
        x = ops.mediate_pullback(P, pG, pB, f.components[i],
                                 ops.then(cF, lim_iota))
        io, xb = classes.factorize(x)
        bar_obj[i] = ops.dst(io)
        iota[i] = io
        fbar[i] = ops.then(xb, pG)
        set_bar_identity(i)
        to_lim_bar = ops.then(xb, pB)
        for m in M.objects:  # the non-identity morphisms out of i
            bar_mor[m] = ops.then(to_lim_bar, coneB[m])

    bar = BaseFunctor(shape, bar_obj, bar_mor, name=f"{F.name}~bar")
    out = Factorization(
        DiagramMorphism(F, bar, iota, name="iota"),
        DiagramMorphism(bar, G, fbar, name="fbar"),
    )
    chk = out.validate(classes)
    ok_compose = all(
        ops.then(iota[o], fbar[o]) == f.components[o] for o in shape.objects)
    if not chk.ok or not ok_compose:
        raise StructureError(
            f"compactification postcondition failed: {chk.violations[:3]}")
    return out


def _require_out_closed(shape: FiniteCategory, objects):
    for o in objects:
        for m in shape.morphisms_from(o):
            if shape.dst(m) not in objects:
                raise StructureError(
                    "given subdiagram is not final (not closed under "
                    f"outgoing morphisms: {m!r} leaves it)")


def extend_compactification(f: DiagramMorphism, classes: CompactificationClasses,
                            partial: Factorization, objects) -> Factorization:
    """Extend a factorization given on a final subdiagram to all of the
    shape; the restriction to the subdiagram is reproduced verbatim."""
    out = compactify_morphism(f, classes, given=partial, given_objects=objects)
    for o in objects:
        if out.iota.components[o] != partial.iota.components[o] or \
           out.fbar.components[o] != partial.fbar.components[o] or \
           out.mid.obj[o] != partial.mid.obj[o]:
            raise StructureError("extension failed to restrict to given data")
    return out


# -- common refinement ------------------------------------------------------


def _zigzag_shape() -> FiniteCategory:
    objs = ["a", "q1", "q3", "q2", "b"]
    mors = [("a>q1", "a", "q1"), ("q3>q1", "q3", "q1"),
            ("q3>q2", "q3", "q2"), ("b>q2", "b", "q2")]
    mors += [(f"id:{o}", o, o) for o in objs]
    ident = {o: f"id:{o}" for o in objs}
    comp = {}
    for m, s, d in mors:
        comp[(f"id:{s}", m)] = m
        comp[(m, f"id:{d}")] = m
    for o in objs:
        comp[(f"id:{o}", f"id:{o}")] = f"id:{o}"
    return FiniteCategory(objs, mors, ident, comp, name="zigzag")


@dataclass
class Refinement:
    """A third factorization dominating two given ones."""

    third: Factorization
    to_first: DiagramMorphism
    to_second: DiagramMorphism

    def validate(self, classes, fact1: Factorization, fact2: Factorization) -> ValidationReport:
        ops = classes.ops
        bad = list(self.third.validate(classes).violations)
        bad += list(self.to_first.validate(ops).violations)
        bad += list(self.to_second.validate(ops).violations)
        sh = self.third.iota.shape
        for o in sh.objects:
            r1, r2 = self.to_first.components[o], self.to_second.components[o]
            if not classes.is_s0(r1) or not classes.is_s0(r2):
                bad.append(("comparison-not-proper", o))
            if ops.then(self.third.iota.components[o], r1) != fact1.iota.components[o]:
                bad.append(("triangle-1", o))
            if ops.then(self.third.iota.components[o], r2) != fact2.iota.components[o]:
                bad.append(("triangle-2", o))
            if ops.then(r1, fact1.fbar.components[o]) != self.third.fbar.components[o]:
                bad.append(("square-1", o))
            if ops.then(r2, fact2.fbar.components[o]) != self.third.fbar.components[o]:
                bad.append(("square-2", o))
        return ValidationReport("refinement", tuple(bad))


def common_refinement(f: DiagramMorphism, fact1: Factorization,
                      fact2: Factorization,
                      classes: CompactificationClasses) -> Refinement:
    """Dominate two factorizations of the same morphism by a third.

    At each shape object (by ascending degree) the two middle objects
    are pulled back over the target, the already-built refinement data
    is assembled by a matching limit, and the comparison map out of the
    source is factorized by the class oracle.
    """
    ops = classes.ops
    shape = f.shape
    for fact in (fact1, fact2):
        for o in shape.objects:
            if ops.then(fact.iota.components[o], fact.fbar.components[o]) != \
               f.components[o]:
                raise StructureError("input does not factor the given morphism")
    order, _ = _ordered_by_degree(shape)
    F, G = f.source, f.target
    B1, B2 = fact1.mid, fact2.mid

    obj3 = {}
    mor3 = {}
    iota3 = {}
    fbar3 = {}
    r1 = {}
    r2 = {}
    match_cache = {}
    zig = _zigzag_shape()

    for i in order:
        M, limG, coneG = _matching_limit(shape, i, G, ops, match_cache)
        _, limF, coneF = _matching_limit(shape, i, F, ops, match_cache)
        _, lim1, cone1 = _matching_limit(shape, i, B1, ops, match_cache)
        _, lim2, cone2 = _matching_limit(shape, i, B2, ops, match_cache)
        b3part = BaseFunctor(shape, obj3, mor3)
        _, lim3, cone3 = _matching_limit(shape, i, b3part, ops, match_cache)
        cG = _cone_from(shape, i, G, ops, M, limG, coneG)
        cF = _cone_from(shape, i, F, ops, M, limF, coneF)

        def lim_map(src_cone, comp, dst_cone, dst_lim):
            if not M.objects:
                return ops.identity(ops.terminal())
            return ops.mediate_limit(
                dst_lim, dst_cone, M.objects,
                {m: ops.then(src_cone[m], comp[shape.dst(m)]) for m in M.objects})

        limf1 = lim_map(cone1, fact1.fbar.components, coneG, limG)
        limf2 = lim_map(cone2, fact2.fbar.components, coneG, limG)
        limr1 = lim_map(cone3, r1, cone1, lim1)
        limr2 = lim_map(cone3, r2, cone2, lim2)
        limf3 = ops.then(limr1, limf1)

        Q1, q1G, q1L = ops.pullback(cG, limf1)
        Q2, q2G, q2L = ops.pullback(cG, limf2)
        Q3, q3G, q3L = ops.pullback(cG, limf3)

        a_to_q1 = ops.mediate_pullback(
            Q1, q1G, q1L, fact1.fbar.components[i],
            _cone_from(shape, i, B1, ops, M, lim1, cone1))
        b_to_q2 = ops.mediate_pullback(
            Q2, q2G, q2L, fact2.fbar.components[i],
            _cone_from(shape, i, B2, ops, M, lim2, cone2))
        q3_to_q1 = ops.mediate_pullback(Q1, q1G, q1L, q3G,
                                        ops.then(q3L, limr1))
        q3_to_q2 = ops.mediate_pullback(Q2, q2G, q2L, q3G,
                                        ops.then(q3L, limr2))

        values = {"a": B1.obj[i], "q1": Q1, "q3": Q3, "q2": Q2, "b": B2.obj[i]}
        arrows = {"a>q1": a_to_q1, "q3>q1": q3_to_q1,
                  "q3>q2": q3_to_q2, "b>q2": b_to_q2}
        L, cone = ops.limit(zig, values, arrows)

        x = ops.mediate_limit(L, cone, zig.objects, {
            "a": fact1.iota.components[i],
            "b": fact2.iota.components[i],
            "q1": ops.mediate_pullback(
                Q1, q1G, q1L, f.components[i],
                ops.then(cF, lim_map(coneF, fact1.iota.components, cone1, lim1))),
            "q3": ops.mediate_pullback(
                Q3, q3G, q3L, f.components[i],
                ops.then(cF, lim_map(coneF, iota3, cone3, lim3))),
            "q2": ops.mediate_pullback(
                Q2, q2G, q2L, f.components[i],
                ops.then(cF, lim_map(coneF, fact2.iota.components, cone2, lim2))),
        })
        io, xb = classes.factorize(x)
        obj3[i] = ops.dst(io)
        iota3[i] = io
        r1[i] = ops.then(xb, cone["a"])
        r2[i] = ops.then(xb, cone["b"])
        fbar3[i] = ops.then(r1[i], fact1.fbar.components[i])
        mor3[shape.id_of(i)] = ops.identity(obj3[i])
        to_lim3 = ops.then(xb, ops.then(cone["q3"], q3L))
        for m in M.objects:
            mor3[m] = ops.then(to_lim3, cone3[m])

    third = Factorization(
        DiagramMorphism(F, BaseFunctor(shape, obj3, mor3, name="bar3"), iota3,
                        name="iota3"),
        DiagramMorphism(BaseFunctor(shape, obj3, mor3), G, fbar3, name="fbar3"),
    )
    out = Refinement(third,
                     DiagramMorphism(third.mid, B1, r1, name="r1"),
                     DiagramMorphism(third.mid, B2, r2, name="r2"))
    chk = out.validate(classes, fact1, fact2)
    if not chk.ok:
        raise StructureError(f"refinement postcondition failed: {chk.violations[:4]}")
    return out


# -- exterior and interior compactifications --------------------------------


@dataclass
class ExteriorCompactification:
    diagram: BaseFunctor
    bar: BaseFunctor
    iota: dict

    def validate(self, classes: CompactificationClasses) -> ValidationReport:
        ops = classes.ops
        bad = []
        dm = DiagramMorphism(self.diagram, self.bar, self.iota)
        bad += list(dm.validate(ops).violations)
        sh = self.diagram.shape
        for o in sh.objects:
            if not classes.is_s1(self.iota[o]):
                bad.append(("iota-not-dense", o))
        for m in sh.morphisms:
            if not classes.is_s0(self.bar.mor[m]):
                bad.append(("bar-morphism-not-proper", m))
        return ValidationReport("exterior-compactification", tuple(bad))


def exterior_compactify(X: BaseFunctor, classes: CompactificationClasses,
                        given: "ExteriorCompactification | None" = None,
                        given_objects=None) -> ExteriorCompactification:
    """Compactify a diagram against the constant terminal diagram."""
    ops = classes.ops
    shape = X.shape
    const = constant_functor(shape, ops)
    to_t = DiagramMorphism(X, const,
                           {o: ops.to_terminal(X.obj[o]) for o in shape.objects})
    partial = None
    if given is not None:
        partial = Factorization(
            DiagramMorphism(X, given.bar, given.iota),
            DiagramMorphism(given.bar, const,
                            {o: ops.to_terminal(given.bar.obj[o])
                             for o in given_objects}),
        )
    fact = compactify_morphism(to_t, classes, given=partial,
                               given_objects=given_objects)
    ext = ExteriorCompactification(X, fact.mid, fact.iota.components)
    chk = ext.validate(classes)
    if not chk.ok:
        raise StructureError(f"exterior compactification invalid: {chk.violations[:3]}")
    return ext


@dataclass
class InteriorCompactification:
    """Functor on the two-chain shape with the dense/proper typing.

    ``shape`` is the comma shape of the diagram's shape; ``values`` and
    ``maps`` give the functor; ``proj_bar``/``proj_x`` record the chosen
    pullback projections at each chain (onto bar(first) and X(second)).
    """

    source: ExteriorCompactification
    shape: XiCategory
    values: dict
    maps: dict
    proj_bar: dict
    proj_x: dict

    def as_base_functor(self) -> BaseFunctor:
        return BaseFunctor(self.shape, self.values, self.maps, name="interior")

    def validate(self, classes: CompactificationClasses) -> ValidationReport:
        ops = classes.ops
        bad = list(self.as_base_functor().validate(ops).violations)
        for ml in self.shape.morphisms:
            t = self.shape.morphism_type(ml)
            if t == 1 and not classes.is_s0(self.maps[ml]):
                bad.append(("type1-not-proper", ml))
            if t == 2 and not classes.is_s1(self.maps[ml]):
                bad.append(("type2-not-dense", ml))
        # diagonal restriction gives back the diagram on the nose
        base_shape = self.source.diagram.shape
        from ..fincat.xi import chain_label
        for o in base_shape.objects:
            lb = chain_label((o, o), (base_shape.id_of(o),))
            if self.values[lb] != self.source.diagram.obj[o]:
                bad.append(("diagonal-restriction", o))
        return ValidationReport("interior-compactification", tuple(bad))


def induced_interior(ext: ExteriorCompactification,
                     classes: CompactificationClasses,
                     dd_shape: XiCategory | None = None) -> InteriorCompactification:
    """The canonical interior compactification induced by an exterior one.

    The value on a chain i -> j is the chosen pullback of
    bar(i) -> bar(j) <- X(j); type-1 morphisms land in the proper class
    and type-2 morphisms in the dense class (validated).
    """
    ops = classes.ops
    X, bar, iota = ext.diagram, ext.bar, ext.iota
    shape = X.shape
    dd = dd_shape if dd_shape is not None else comma_over(shape)
    values = {}
    projs = {}
    for lb in dd.objects:
        (i, j) = dd.chain_objs[lb]
        (m,) = dd.chain_mors[lb]
        P, p_bar, p_x = ops.pullback(bar.mor[m], iota[j])
        values[lb] = P
        projs[lb] = (p_bar, p_x)
    maps = {}
    for ml in dd.morphisms:
        la, lb2, (a, b) = dd.ladder[ml][0], dd.ladder[ml][1], dd.ladder[ml][2]
        (i1, j1) = dd.chain_objs[la]
        (i2, j2) = dd.chain_objs[lb2]
        (m2,) = dd.chain_mors[lb2]
        P1, (p1_bar, p1_x) = values[la], projs[la]
        P2, (p2_bar, p2_x) = values[lb2], projs[lb2]
        pb2 = ops.pullback(bar.mor[m2], iota[j2])
        maps[ml] = ops.mediate_pullback(
            pb2[0], pb2[1], pb2[2],
            ops.then(p1_bar, bar.mor[a]),
            ops.then(p1_x, X.mor[b]))
    out = InteriorCompactification(ext, dd, values, maps,
                                   {lb: projs[lb][0] for lb in dd.objects},
                                   {lb: projs[lb][1] for lb in dd.objects})
    chk = out.validate(classes)
    if not chk.ok:
        raise StructureError(f"interior compactification invalid: {chk.violations[:4]}")
    return out


def interior_on_tww(ext: ExteriorCompactification,
                    classes: CompactificationClasses):
    """The interior compactification on the three-chain shape of the
    base: the two-chain interior of a twisted-arrow diagram, restricted
    along the square-assignment functor.

    ``ext`` must compactify a diagram whose shape is a twisted-arrow
    category.  Returns (tww shape, values, maps); type-1 morphisms land
    in the proper class and type-2 morphisms in the dense class.
    """
    shape = ext.diagram.shape
    base = getattr(shape, "base", None)
    if base is None or tuple(getattr(shape, "xi", ())) != ("d", "u"):
        raise StructureError("interior_on_tww needs a twisted-arrow shape")
    G, tww, ddtw = tww_to_dd_tw(base)
    inner = induced_interior(ext, classes, dd_shape=ddtw)
    values = {lb: inner.values[G.obj_map[lb]] for lb in tww.objects}
    maps = {ml: inner.maps[G.mor_map[ml]] for ml in tww.morphisms}
    bad = []
    for ml in tww.morphisms:
        t = tww.morphism_type(ml)
        if t == 1 and not classes.is_s0(maps[ml]):
            bad.append(("type1-not-proper", ml))
        if t == 2 and not classes.is_s1(maps[ml]):
            bad.append(("type2-not-dense", ml))
    if bad:
        raise StructureError(f"tww interior typing failed: {bad[:3]}")
    return tww, values, maps


def interior_morphism(ext1: ExteriorCompactification,
                      ext2: ExteriorCompactification,
                      on_diagram: dict, on_bar: dict,
                      classes: CompactificationClasses):
    """Functoriality of the induced interior compactification.

    Given a commuting square of a diagram morphism (components
    ``on_diagram``) and a morphism of the compactified diagrams
    (``on_bar``), returns the induced family of maps between the two
    interiors, indexed by chains.  For a refinement (``on_diagram``
    identities, ``on_bar`` point-wise proper) the family is point-wise
    proper; callers assert this.
    """
    ops = classes.ops
    int1 = induced_interior(ext1, classes)
    int2 = induced_interior(ext2, classes)
    dd = int1.shape
    comps = {}
    for lb in dd.objects:
        (i, j) = dd.chain_objs[lb]
        (m,) = dd.chain_mors[lb]
        P2 = ops.pullback(ext2.bar.mor[m], ext2.iota[j])
        comps[lb] = ops.mediate_pullback(
            P2[0], P2[1], P2[2],
            ops.then(int1.proj_bar[lb], on_bar[i]),
            ops.then(int1.proj_x[lb], on_diagram[j]))
    return int1, int2, comps
