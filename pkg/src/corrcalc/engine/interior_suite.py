"""Exchange scans over interior compactifications of admissible
diagrams: the Cartesian-square recognitions on the three-chain shape
and the three exchange families on (supported) random objects."""

from __future__ import annotations

import random

from ..comp.axioms import Square, is_cartesian_square
from ..comp.classes import CompactificationClasses, finset_classes
from ..comp.compactify import BaseFunctor, exterior_compactify, interior_on_tww
from ..correspondences.corr import (
    chain_diagram_from_spans,
    check_admissible,
    product_diagram,
)
from ..fincat.core import StructureError, delta_category
from ..fincat.xi import XiCategory
from ..finset import FinMap, FinObj, FinSetOps
from ..report import Report
from ..vectfam.exchange import BaseSquare, base_change, base_change_shriek, exchange_f6
from ..vectfam.family import is_invertible, random_family
from ..vectfam.field import ExactField
from ..vectfam.suites import random_map, random_set, trial_rng

_OPS = FinSetOps()


def _typed_squares(shape: XiCategory, h_type: int, v_type: int):
    out = []
    by_src = {}
    for m in shape.morphisms:
        by_src.setdefault(shape.src(m), []).append(m)
    for w in shape.objects:
        hs = [m for m in by_src.get(w, ()) if shape.morphism_type(m) == h_type]
        vs = [m for m in by_src.get(w, ()) if shape.morphism_type(m) == v_type]
        for h1 in hs:
            for v1 in vs:
                z, y = shape.dst(h1), shape.dst(v1)
                for v2 in by_src.get(z, ()):
                    if shape.morphism_type(v2) not in (v_type, "all"):
                        continue
                    for h2 in by_src.get(y, ()):
                        if shape.morphism_type(h2) not in (h_type, "all"):
                            continue
                        if shape.dst(v2) == shape.dst(h2) and \
                           shape.then(h1, v2) == shape.then(v1, h2):
                            out.append((w, h1, v1, v2, h2))
    return out


def random_admissible_diagram(rng, shape_name: str,
                              classes: CompactificationClasses,
                              max_set: int = 3):
    """A random admissible twisted-shape diagram over one of the three
    supported index shapes."""
    def rand_objects(n, tag):
        return {i: random_set(rng, max_set, 1, f"{tag}{i}") for i in range(n)}

    def rand_spans(objs, n, tag):
        spans = {}
        for i in range(n):
            A = random_set(rng, max_set, 0, f"{tag}a{i}")
            spans[i] = (A, random_map(rng, A, objs[i]),
                        random_map(rng, A, objs[i + 1]))
        return spans

    if shape_name == "d1":
        objs = rand_objects(2, "o")
        return chain_diagram_from_spans(1, objs, rand_spans(objs, 1, "s"),
                                        classes)
    if shape_name == "d2":
        objs = rand_objects(3, "o")
        return chain_diagram_from_spans(2, objs, rand_spans(objs, 2, "s"),
                                        classes)
    if shape_name == "d1xd1":
        o1 = rand_objects(2, "l")
        X1, I1, tw1 = chain_diagram_from_spans(1, o1, rand_spans(o1, 1, "u"),
                                               classes)
        o2 = rand_objects(2, "r")
        X2, I2, tw2 = chain_diagram_from_spans(1, o2, rand_spans(o2, 1, "v"),
                                               classes)
        return product_diagram(I1, tw1, X1, I2, tw2, X2, classes)
    raise StructureError(f"unknown shape {shape_name!r}")


def interior_suite(trials: int = 100, seed: int = 0, max_set: int = 3,
                   max_dim: int = 2, field: ExactField | None = None,
                   classes: CompactificationClasses | None = None) -> Report:
    """For random admissible diagrams over the three index shapes:
    verify the class typing of the induced interior, the two
    Cartesian-square recognitions on the three-chain shape, and the
    exact invertibility of the three exchange families on (supported)
    random family data."""
    from ..comp.classes import toy_classes
    rep = Report("interior")
    field = field or ExactField(7)
    classes = classes or finset_classes()
    toy = toy_classes()
    shapes = ("d1", "d2", "d1xd1")
    for k in range(trials):
        rng = trial_rng(seed, "interior", k)
        if k % 4 == 3:
            # toy-category leg: nontrivial dense embeddings, class typing
            _toy_interior_case(rep, rng, toy, k)
            continue
        shape_name = shapes[k % len(shapes)]
        X, I, tw = random_admissible_diagram(rng, shape_name, classes, max_set)
        adm, cex = check_admissible(tw, X, classes)
        if adm is None:
            rep.record(False, {"stage": "admissible", "trial": k,
                               "counterexample": repr(cex)})
            continue
        rep.record(True)
        ext = exterior_compactify(X, classes)
        try:
            tww, values, maps = interior_on_tww(ext, classes)
        except StructureError as exc:
            rep.record(False, {"stage": "interior-typing", "trial": k,
                               "error": str(exc)})
            continue
        rep.record(True)

        # square recognitions: (t1 horizontal, t2 vertical) and
        # (t3 horizontal, t2 vertical) land on Cartesian squares
        for (h_t, v_t, tag) in ((1, 2, "proper-dense"), (3, 2, "weak-adm")):
            for (w, h1, v1, v2, h2) in _typed_squares(tww, h_t, v_t):
                sq = Square(p=maps[h1], q=maps[v1], f=maps[v2], g=maps[h2])
                ok = is_cartesian_square(sq, classes.ops)
                rep.record(ok, None if ok else
                           {"stage": f"cartesian-{tag}", "trial": k,
                            "square": (w, h1, v1)})

        # exchange families on random data
        _exchange_cases(rep, rng, tww, values, maps, field, max_dim, k)
    return rep


def _toy_interior_case(rep, rng, toy, trial):
    """An admissible diagram in the shipped lattice: the induced interior
    sends type-1 morphisms into the proper class and type-2 into the
    dense class nontrivially, and the recognition squares stay
    Cartesian."""
    cat = toy.ops.cat
    below = {o: [x for x in cat.objects if cat.hom(x, o)] for o in cat.objects}
    objs = {}
    spans = {}
    n = rng.choice((1, 2))
    for i in range(n + 1):
        objs[i] = rng.choice(cat.objects)
    for i in range(n):
        cands = [a for a in cat.objects
                 if a in below[objs[i]] and a in below[objs[i + 1]]]
        a = rng.choice(cands)
        spans[i] = (a, cat.hom(a, objs[i])[0], cat.hom(a, objs[i + 1])[0])
    X, I, tw = chain_diagram_from_spans(n, objs, spans, toy)
    adm, cex = check_admissible(tw, X, toy)
    rep.record(adm is not None, None if adm is not None else
               {"stage": "toy-admissible", "trial": trial})
    if adm is None:
        return
    ext = exterior_compactify(X, toy)
    try:
        tww, values, maps = interior_on_tww(ext, toy)
        rep.record(True)
    except StructureError as exc:
        rep.record(False, {"stage": "toy-interior-typing", "trial": trial,
                           "error": str(exc)})
        return
    for (h_t, v_t, tag) in ((1, 2, "proper-dense"), (3, 2, "weak-adm")):
        for (w, h1, v1, v2, h2) in _typed_squares(tww, h_t, v_t):
            sq = Square(p=maps[h1], q=maps[v1], f=maps[v2], g=maps[h2])
            ok = is_cartesian_square(sq, toy.ops)
            rep.record(ok, None if ok else
                       {"stage": f"toy-cartesian-{tag}", "trial": trial})


def _exchange_cases(rep, rng, tww, values, maps, field, max_dim, trial):
    # case: horizontals t1, verticals t2 -> the proper/embedding mate
    for (w, h1, v1, v2, h2) in _typed_squares(tww, 1, 2):
        if not (maps[v1].is_injective and maps[v2].is_injective):
            continue
        E = random_family(field, rng, values[w], max_dim)
        sq = BaseSquare(maps[v1], maps[h1], maps[h2], maps[v2])
        try:
            chi = exchange_f6(sq, E)
            ok = is_invertible(chi)
        except StructureError:
            ok = False
        rep.record(ok, None if ok else
                   {"stage": "exchange-2-1", "trial": trial, "at": w})
    # case: horizontals t3, verticals t1 -> base change on supported data
    for (w, h1, v1, v2, h2) in _typed_squares(tww, 3, 1):
        E = random_family(field, rng, values[tww.dst(h1)], max_dim)
        sq = BaseSquare(maps[h1], maps[v1], maps[v2], maps[h2])
        try:
            chi = base_change(sq, E)
            ok = is_invertible(chi)
        except StructureError:
            ok = False
        rep.record(ok, None if ok else
                   {"stage": "exchange-1-3", "trial": trial, "at": w})
    # case: horizontals t3, verticals t2 -> the embedding exchange
    for (w, h1, v1, v2, h2) in _typed_squares(tww, 3, 2):
        if not (maps[v1].is_injective and maps[v2].is_injective):
            continue
        E = random_family(field, rng, values[tww.dst(h1)], max_dim)
        sq = BaseSquare(maps[h1], maps[v1], maps[v2], maps[h2])
        try:
            chi = base_change_shriek(sq, E)
            ok = is_invertible(chi)
        except StructureError:
            ok = False
        rep.record(ok, None if ok else
                   {"stage": "exchange-2-3", "trial": trial, "at": w})
