"""The verification suites behind ``corrcalc verify`` and the
acceptance tests, keyed by name.  Every suite takes a RunConfig and
returns a deterministic Report."""

from __future__ import annotations

import random

from .comp.axioms import check_axioms, derived_lemma_suite
from .comp.classes import finset_classes, toy_classes, toy_classes_alt
from .comp.compactify import (
    BaseFunctor,
    DiagramMorphism,
    Factorization,
    common_refinement,
    compactify_morphism,
    extend_compactification,
)
from .correspondences.afp import afp_bytes
from .correspondences.corr import plain_correspondence, compose_corr
from .engine.evaluator import composition_comparison, eval_corr, eval_corr_on_maps
from .engine.interior_suite import interior_suite
from .fincat.core import FiniteCategory, Functor, poset_category
from .fincat.fibrations import inverse_structure, q_fiber_check
from .finset import FinSetOps, compose_maps
from .report import Report, RunConfig, Stopwatch
from .twcalc.trees import all_trees
from .twcalc.ximulti import degree_suite
from .vectfam.family import (
    compose_family_maps,
    identity_family_map,
    invert,
    is_invertible,
    random_family,
    random_vertical_map,
)
from .vectfam.field import ExactField
from .vectfam.suites import (
    axiom_suite_F,
    lemma_squares_suite,
    random_map,
    random_set,
    trial_rng,
)

_OPS = FinSetOps()


def suite_axioms(config: RunConfig) -> Report:
    rep = Report("axioms")
    rep.merge(check_axioms(finset_classes(), max_size=config.max_set))
    rep.merge(check_axioms(toy_classes()))
    return rep


def suite_lemmas(config: RunConfig) -> Report:
    rep = Report("lemmas")
    rep.merge(derived_lemma_suite(finset_classes()))
    rep.merge(derived_lemma_suite(toy_classes()))
    rep.merge(lemma_squares_suite(trials=max(config.trials // 2, 20),
                                  seed=config.seed,
                                  field=ExactField(config.field_char or 7),
                                  max_set=config.max_set,
                                  max_dim=config.max_dim))
    return rep


def _random_inverse_poset(rng, max_objects=6, max_matching=3):
    """A random finite poset whose matching categories are small."""
    while True:
        n = rng.randrange(2, max_objects + 1)
        names = [f"p{i}" for i in range(n)]
        above = {x: set() for x in names}
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.4:
                    above[names[i]].add(names[j])
        changed = True
        while changed:
            changed = False
            for x in names:
                for y in list(above[x]):
                    extra = above[y] - above[x]
                    if extra:
                        above[x] |= extra
                        changed = True
        if all(len(v) <= max_matching for v in above.values()):
            leq = lambda x, y: x == y or y in above[x]
            return poset_category(names, leq, name="rand-poset")


def _random_toy_diagram_morphism(rng, shape, toy):
    """Functors into the shipped lattice plus a natural transformation."""
    cat = toy.ops.cat
    order = {o: set(cat.objects) - {x for x in cat.objects
                                    if not cat.hom(o, x)} for o in cat.objects}
    leq = {(a, b) for a in cat.objects for b in cat.objects if cat.hom(a, b)}

    def below_all(targets):
        return [o for o in cat.objects
                if all((o, t) in leq for t in targets)]

    wit = inverse_structure(shape)
    objs = sorted(shape.objects, key=lambda o: wit.deg[o])
    F = {}
    G = {}
    for i in objs:
        succ = [shape.dst(m) for m in shape.morphisms_from(i)
                if not shape.is_identity(m)]
        fc = below_all([F[x] for x in succ])
        F[i] = rng.choice(fc)
        gc = [o for o in below_all([G[x] for x in succ]) if (F[i], o) in leq]
        G[i] = rng.choice(gc)
    Fm = {m: cat.hom(F[shape.src(m)], F[shape.dst(m)])[0]
          for m in shape.morphisms}
    Gm = {m: cat.hom(G[shape.src(m)], G[shape.dst(m)])[0]
          for m in shape.morphisms}
    Ff = BaseFunctor(shape, F, Fm, name="F")
    Gf = BaseFunctor(shape, G, Gm, name="G")
    comps = {i: cat.hom(F[i], G[i])[0] for i in shape.objects}
    return DiagramMorphism(Ff, Gf, comps)


def _out_closure(shape, seeds):
    out = set(seeds)
    changed = True
    while changed:
        changed = False
        for o in list(out):
            for m in shape.morphisms_from(o):
                if shape.dst(m) not in out:
                    out.add(shape.dst(m))
                    changed = True
    return sorted(out)


def suite_compactify(config: RunConfig) -> Report:
    """Random diagram morphisms over inverse shapes in the shipped
    lattice: factor, check classes and naturality, extend from a final
    subdiagram and compare bit-for-bit; every third trial also builds a
    common refinement of the two shipped factorization routes."""
    rep = Report("compactify")
    toy = toy_classes()
    toy_alt = toy_classes_alt()
    for k in range(config.trials):
        rng = trial_rng(config.seed, "compactify", k)
        shape = _random_inverse_poset(rng)
        f = _random_toy_diagram_morphism(rng, shape, toy)
        try:
            fact = compactify_morphism(f, toy)
        except Exception as exc:  # anything here is a failure
            rep.record(False, {"trial": k, "stage": "factor", "error": str(exc)})
            continue
        chk = fact.validate(toy, of=f)
        rep.record(chk.ok, None if chk.ok else
                   {"trial": k, "stage": "classes", "violations": chk.violations[:3]})
        seeds = rng.sample(list(shape.objects),
                           rng.randrange(1, len(shape.objects) + 1))
        final = _out_closure(shape, seeds)
        partial = Factorization(
            DiagramMorphism(f.source, fact.mid,
                            {o: fact.iota.components[o] for o in final}),
            DiagramMorphism(fact.mid, f.target,
                            {o: fact.fbar.components[o] for o in final}))
        ext = extend_compactification(f, toy, partial, final)
        same = all(ext.iota.components[o] == fact.iota.components[o] and
                   ext.fbar.components[o] == fact.fbar.components[o] and
                   ext.mid.obj[o] == fact.mid.obj[o] for o in final)
        rep.record(same, None if same else {"trial": k, "stage": "extension"})
        if k % 3 == 0:
            fact2 = compactify_morphism(f, toy_alt)
            ref = common_refinement(f, fact, fact2, toy)
            chk = ref.validate(toy, fact, fact2)
            rep.record(chk.ok, None if chk.ok else
                       {"trial": k, "stage": "refinement",
                        "violations": chk.violations[:3]})
    return rep


def suite_interior(config: RunConfig) -> Report:
    return interior_suite(trials=config.trials, seed=config.seed,
                          max_set=min(config.max_set, 3),
                          max_dim=min(config.max_dim, 2),
                          field=ExactField(config.field_char or 7))


def suite_spans(config: RunConfig) -> Report:
    """Strictified span composition: realized reductions against
    stepwise pullbacks (explicit isomorphism), and byte-equal reduced
    bracketings of triples."""
    rep = Report("spans")
    fc = finset_classes()
    for k in range(config.trials):
        rng = trial_rng(config.seed, "spans", k)
        S = random_set(rng, config.max_set, 1, "s")
        T = random_set(rng, config.max_set, 1, "t")
        U = random_set(rng, config.max_set, 1, "u")
        A = random_set(rng, config.max_set, 0, "a")
        B = random_set(rng, config.max_set, 0, "b")
        x1 = plain_correspondence(_OPS, A, (random_map(rng, A, S),),
                                  random_map(rng, A, T))
        x2 = plain_correspondence(_OPS, B, (random_map(rng, B, T),),
                                  random_map(rng, B, U))
        comp, wit = compose_corr(x2, 0, x1, fc)
        P, p2, p1 = _OPS.pullback(x2.source_legs[0], x1.target_leg)
        ok = len(P) == len(comp.apex)
        if ok:
            # explicit isomorphism: elementwise matching of leg data
            pairs_c = sorted((comp.source_legs[0].idx[i],
                              comp.target_leg.idx[i])
                             for i in range(len(comp.apex)))
            legP_s = [x1.source_legs[0].idx[p1.idx[i]] for i in range(len(P))]
            legP_t = [x2.target_leg.idx[p2.idx[i]] for i in range(len(P))]
            ok = sorted(zip(legP_s, legP_t)) == pairs_c
        rep.record(ok, None if ok else {"trial": k, "stage": "realize-vs-pullback"})
    triples = max(config.trials // 4, 10)
    for k in range(triples):
        rng = trial_rng(config.seed, "spans3", k)
        sets = [random_set(rng, config.max_set, 1, f"s{i}") for i in range(4)]
        spans = []
        for i in range(3):
            A = random_set(rng, config.max_set, 0, f"a{i}")
            spans.append(plain_correspondence(
                _OPS, A, (random_map(rng, A, sets[i]),),
                random_map(rng, A, sets[i + 1])))
        c12, _ = compose_corr(spans[1], 0, spans[0], fc)
        left, wl = compose_corr(spans[2], 0, c12, fc)
        c23, _ = compose_corr(spans[2], 0, spans[1], fc)
        right, wr = compose_corr(c23, 0, spans[0], fc)
        ok = afp_bytes(wl) == afp_bytes(wr)
        rep.record(ok, None if ok else {"trial": k, "stage": "bracketing"})
    return rep


def suite_sixfunctor(config: RunConfig) -> Report:
    rep = axiom_suite_F(trials=config.trials, seed=config.seed,
                        field=ExactField(config.field_char or 7),
                        max_set=config.max_set, max_dim=config.max_dim)
    # the three shipped faults must each be caught
    for fault in ("shriek-projection", "wrong-pullback", "skew-projection"):
        frep = axiom_suite_F(trials=max(10, config.trials // 50),
                             seed=config.seed, fault=fault,
                             field=ExactField(config.field_char or 7),
                             max_set=config.max_set, max_dim=config.max_dim)
        caught = not frep.ok
        rep.record(caught, None if caught else
                   {"stage": "mutation-not-caught", "fault": fault})
    return rep


def suite_coherence(config: RunConfig) -> Report:
    """Pseudo-functoriality: comparisons invertible and natural on
    random pairs; bracketing coherence on triples via the byte-equal
    reduced composite."""
    rep = Report("coherence")
    field = ExactField(config.field_char or 7)
    fc = finset_classes()
    for k in range(config.trials):
        rng = trial_rng(config.seed, "coherence", k)
        T1 = random_set(rng, 3, 1, "t")
        U1 = random_set(rng, 3, 1, "u")
        A = random_set(rng, 3, 0, "a")
        B = random_set(rng, 3, 0, "b")
        n_in = rng.randrange(0, 3)
        srcs = [random_set(rng, 3, 1, f"w{i}") for i in range(n_in)]
        inner = plain_correspondence(
            _OPS, B, tuple(random_map(rng, B, s) for s in srcs),
            random_map(rng, B, T1))
        n_out = rng.randrange(1, 3)
        outs = [random_set(rng, 3, 1, f"v{i}") for i in range(n_out)]
        slot = rng.randrange(n_out)
        legs = [random_map(rng, A, o) for o in outs]
        legs[slot] = random_map(rng, A, T1)
        outer = plain_correspondence(_OPS, A, tuple(legs),
                                     random_map(rng, A, U1))
        fams = []
        for i in range(n_out):
            if i == slot:
                fams.extend(random_family(field, rng, s, config.max_dim)
                            for s in srcs)
            else:
                fams.append(random_family(field, rng, outs[i], config.max_dim))
        if not fams:
            rep.record(True)
            continue
        chi, nested, comp = composition_comparison(outer, slot, inner, fams)
        ok = is_invertible(chi)
        rep.record(ok, None if ok else {"trial": k, "stage": "invertible"})
        if not ok:
            continue
        j = rng.randrange(len(fams))
        F2 = random_family(field, rng, fams[j].base, config.max_dim)
        m = random_vertical_map(rng, fams[j], F2)
        fams2 = list(fams)
        fams2[j] = F2
        chi2, _, _ = composition_comparison(outer, slot, inner, fams2)
        maps = [identity_family_map(f) if i != j else m
                for i, f in enumerate(fams)]
        mids = maps[slot:slot + inner.arity]
        if inner.arity:
            inner_map = eval_corr_on_maps(inner, mids)
        else:
            from .vectfam.family import unit_family
            from .vectfam.functors import pushforward_u
            uf = pushforward_u(inner.target_leg, unit_family(field, inner.apex))
            inner_map = identity_family_map(uf)
        outer_maps = maps[:slot] + [inner_map] + maps[slot + inner.arity:]
        lhs_map = eval_corr_on_maps(outer, outer_maps)
        P, p_out, p_in = _OPS.pullback(outer.source_legs[slot],
                                       inner.target_leg)
        comp_corr = plain_correspondence(
            _OPS, P,
            tuple([compose_maps(p_out, g) for g in outer.source_legs[:slot]]
                  + [compose_maps(p_in, g) for g in inner.source_legs]
                  + [compose_maps(p_out, g)
                     for g in outer.source_legs[slot + 1:]]),
            compose_maps(p_out, outer.target_leg))
        comp_map = eval_corr_on_maps(comp_corr, maps)
        natural = compose_family_maps(lhs_map, chi2) == \
            compose_family_maps(chi, comp_map)
        rep.record(natural, None if natural else {"trial": k, "stage": "natural"})
    # triples: the two bracketings compare to the same composite
    triples = max(config.trials // 3, 10)
    for k in range(triples):
        rng = trial_rng(config.seed, "coherence3", k)
        ok = _triple_coherence(rng, field, config.max_dim)
        rep.record(ok, None if ok else {"trial": k, "stage": "bracketing"})
    return rep


def _triple_coherence(rng, field, max_dim) -> bool:
    """chi-paths of the two bracketings agree after transporting along
    the canonical identification of the iterated pullbacks."""
    sets = [random_set(rng, 3, 1, f"s{i}") for i in range(4)]
    spans = []
    for i in range(3):
        A = random_set(rng, 3, 0, f"a{i}")
        spans.append(plain_correspondence(
            _OPS, A, (random_map(rng, A, sets[i]),),
            random_map(rng, A, sets[i + 1])))
    E = random_family(field, rng, sets[0], max_dim)
    x1, x2, x3 = spans

    # path A: compare inside first
    chi12, nested12, comp12 = composition_comparison(x2, 0, x1, [E])
    P12, p12_out, p12_in = _OPS.pullback(x2.source_legs[0], x1.target_leg)
    c12 = plain_correspondence(
        _OPS, P12, (compose_maps(p12_in, x1.source_legs[0]),),
        compose_maps(p12_out, x2.target_leg))
    stepA1 = eval_corr_on_maps(x3, [chi12])
    chiA, nestedA, compA = composition_comparison(x3, 0, c12, [E])
    pathA = compose_family_maps(stepA1, chiA)

    # path B: compare outside first
    chi23_at = composition_comparison(x3, 0, x2, [eval_corr(x1, [E])])[0]
    P23, p23_out, p23_in = _OPS.pullback(x3.source_legs[0], x2.target_leg)
    c23 = plain_correspondence(
        _OPS, P23, (compose_maps(p23_in, x2.source_legs[0]),),
        compose_maps(p23_out, x3.target_leg))
    chiB, nestedB, compB = composition_comparison(c23, 0, x1, [E])
    pathB = compose_family_maps(chi23_at, chiB)

    # both iterated chosen pullbacks enumerate triples lexicographically,
    # so the two composite evaluations are literally equal records and
    # the identification is the identity
    if pathA.dst != pathB.dst or pathA.src != pathB.src:
        return False
    return pathA == pathB


def suite_degree(config: RunConfig) -> Report:
    cap = min(config.max_edges, 6)
    return degree_suite(all_trees(cap))


def suite_homsets(config: RunConfig) -> Report:
    from .engine.homset_suite import homset_suite
    return homset_suite(config)


def suite_fibers(config: RunConfig) -> Report:
    """Random small opfibrations (Grothendieck construction) against the
    comma-category fiber formulas."""
    rep = Report("fibers")
    for k in range(config.trials):
        rng = trial_rng(config.seed, "fibers", k)
        alpha = _random_opfibration(rng)
        try:
            qrep = q_fiber_check(alpha)
        except Exception as exc:
            rep.record(False, {"trial": k, "stage": "build", "error": str(exc)})
            continue
        rep.record(qrep.ok, None if qrep.ok else
                   {"trial": k, "stage": "fibers",
                    "q1": qrep.q1_is_opfibration, "q2": qrep.q2_is_fibration,
                    "failures": qrep.failures[:2]})
    return rep


def _random_opfibration(rng) -> Functor:
    """The projection of a strict Grothendieck construction of a functor
    from the arrow category into small discrete fibers (the four-slot
    shapes downstream grow fast, so the total stays at four objects)."""
    nJ = 1
    J = poset_category([str(i) for i in range(nJ + 1)],
                       lambda x, y: int(x) <= int(y), name="J")
    fibers = {}
    for j in J.objects:
        nf = rng.randrange(1, 3)
        fibers[j] = [f"{j}f{t}" for t in range(nf)]
    push = {}
    for j in J.objects:
        for j2 in J.objects:
            if int(j) < int(j2):
                push[(j, j2)] = {x: rng.choice(fibers[j2]) for x in fibers[j]}
    # functoriality on the nose: multi-step pushes are composites of the
    # one-step ones
    for j in J.objects:
        push[(j, j)] = {x: x for x in fibers[j]}
    for j in J.objects:
        for j2 in J.objects:
            if int(j2) > int(j) + 1:
                table = {}
                for x in fibers[j]:
                    y = x
                    for step in range(int(j), int(j2)):
                        y = push[(str(step), str(step + 1))][y]
                    table[x] = y
                push[(j, j2)] = table
    objs = [x for j in J.objects for x in fibers[j]]
    of = {x: j for j in J.objects for x in fibers[j]}
    mors = []
    for x in objs:
        for y in objs:
            jx, jy = of[x], of[y]
            if int(jx) <= int(jy) and push[(jx, jy)][x] == y:
                mors.append((f"{x}>{y}", x, y))
    ident = {x: f"{x}>{x}" for x in objs}
    comp = {}
    for ml, s2, d in mors:
        for ml2, s3, d2 in mors:
            if d == s3:
                comp[(ml, ml2)] = f"{s2}>{d2}"
    I = FiniteCategory(objs, mors, ident, comp, name="groth")
    mor_map = {ml: J.hom(of[s2], of[d])[0] for ml, s2, d in mors}
    alpha = Functor(I, J, {x: of[x] for x in objs}, mor_map, name="alpha")
    rep = alpha.validate()
    if not rep.ok:
        raise RuntimeError(f"generated projection invalid: {rep.violations[:3]}")
    return alpha


SUITES = {
    "axioms": suite_axioms,
    "lemmas": suite_lemmas,
    "compactify": suite_compactify,
    "interior": suite_interior,
    "spans": suite_spans,
    "sixfunctor": suite_sixfunctor,
    "coherence": suite_coherence,
    "degree": suite_degree,
    "homsets": suite_homsets,
    "fibers": suite_fibers,
}


def run_suite(name: str, config: RunConfig) -> Report:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    config.validate()
    with Stopwatch() as sw:
        rep = SUITES[name](config)
    rep.elapsed = sw.elapsed
    return rep
