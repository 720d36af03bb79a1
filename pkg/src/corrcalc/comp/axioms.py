"""Axiom checks for compactification classes, plus the consequences the
construction relies on (class stability under limits, the two Cartesian-
square recognition lemmas, weak Cartesianness).

Every check is an exhaustive scan over a finite window of the base:
for an explicit finite base the window is everything; for finite sets
it is the skeleton of sets up to a size cap (per-check caps keep the
configuration spaces small enough to enumerate completely).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from ..fincat.core import FiniteCategory, StructureError, delta_category, poset_category
from ..finset import FinCatOps, FinMap, FinObj, FinSetOps
from ..report import Report
from .classes import CompactificationClasses


def finset_window(max_size: int):
    """Skeleton window: one set per cardinality 0..max_size, all maps."""
    objs = [FinObj(tuple(range(n))) for n in range(max_size + 1)]
    maps = []
    for a in objs:
        for b in objs:
            for idx in iproduct(range(len(b)), repeat=len(a)):
                maps.append(FinMap(a, b, idx))
    return objs, maps


def window_for(classes: CompactificationClasses, max_size: int = 4):
    ops = classes.ops
    if getattr(ops, "kind", "") == "fincat":
        cat = ops.cat
        return list(cat.objects), list(cat.morphisms)
    return finset_window(max_size)


def _maps_between(ops, morphisms, a, b):
    return [m for m in morphisms if ops.src(m) == a and ops.dst(m) == b]


def check_axioms(classes: CompactificationClasses, max_size: int = 4) -> Report:
    """Exhaustively verify the class axioms on a finite window.

    Checked: S1 contained in S2 with the two-out-of-three density rule;
    proper-and-dense = iso; left cancellation of each class along
    itself; stability of proper maps and embeddings under pullback;
    diagonals proper; the chosen dense-then-proper factorization of
    every morphism.
    """
    rep = Report("axioms:" + classes.name)
    ops = classes.ops
    objs, mors = window_for(classes, max_size)
    by_src = {}
    for m in mors:
        by_src.setdefault(ops.src(m), []).append(m)

    # (S0)
    for m in mors:
        if classes.is_s1(m) and not classes.is_s2(m):
            rep.record(False, {"axiom": "S0", "case": "S1 not in S2", "f": repr(m)})
    for f in mors:
        if not classes.is_s2(f):
            continue
        for g in by_src.get(ops.dst(f), ()):
            if not classes.is_s2(g):
                continue
            h = ops.then(f, g)
            if classes.is_s1(h) and not (classes.is_s1(f) and classes.is_s1(g)):
                rep.record(False, {"axiom": "S0", "case": "density-two-out-of-three",
                                   "f": repr(f), "g": repr(g)})
            else:
                rep.record(True)

    # (S1)
    for m in mors:
        both = classes.is_s0(m) and classes.is_s1(m)
        if both != ops.is_iso(m):
            rep.record(False, {"axiom": "S1", "f": repr(m)})
        else:
            rep.record(True)

    # (S2)
    for pred, nm in ((classes.is_s0, "S0"), (classes.is_s1, "S1"),
                     (classes.is_s2, "S2")):
        for f in mors:
            for g in by_src.get(ops.dst(f), ()):
                if not pred(g):
                    continue
                if pred(f) != pred(ops.then(f, g)):
                    rep.record(False, {"axiom": "S2", "class": nm,
                                       "f": repr(f), "g": repr(g)})
                else:
                    rep.record(True)

    # (S3)
    for pred, nm in ((classes.is_s0, "S0"), (classes.is_s2, "S2")):
        for f in mors:
            if not pred(f):
                continue
            for g in mors:
                if ops.dst(g) != ops.dst(f):
                    continue
                P, p1, p2 = ops.pullback(f, g)
                if not pred(p2):
                    rep.record(False, {"axiom": "S3", "class": nm,
                                       "f": repr(f), "g": repr(g)})
                else:
                    rep.record(True)

    # (S4)
    for X in objs:
        P, projs = ops.product([X, X])
        i = ops.identity(X)
        diag = ops.tuple_map(P, projs, [i, i])
        if not classes.is_s0(diag):
            rep.record(False, {"axiom": "S4", "object": repr(X)})
        else:
            rep.record(True)

    # (S5)
    for f in mors:
        iota, fbar = classes.factorize(f)
        ok = classes.is_s1(iota) and classes.is_s0(fbar) and \
            ops.then(iota, fbar) == f
        rep.record(ok, None if ok else {"axiom": "S5", "f": repr(f),
                                        "iota": repr(iota), "fbar": repr(fbar)})
    return rep


@dataclass(frozen=True)
class Square:
    """A commuting square: p: W->X, q: W->Z, f: X->Y, g: Z->Y."""

    p: object
    q: object
    f: object
    g: object

    def commutes(self, ops) -> bool:
        return ops.then(self.p, self.f) == ops.then(self.q, self.g)


def is_cartesian_square(square: Square, ops) -> bool:
    if not square.commutes(ops):
        raise StructureError("square does not commute")
    P, p1, p2 = ops.pullback(square.f, square.g)
    try:
        med = ops.mediate_pullback(P, p1, p2, square.p, square.q)
    except StructureError:
        return False
    return ops.is_iso(med)


def is_weakly_cartesian(square: Square, classes: CompactificationClasses) -> bool:
    """True iff the comparison map into the chosen pullback is proper."""
    ops = classes.ops
    if not square.commutes(ops):
        raise StructureError("square does not commute")
    P, p1, p2 = ops.pullback(square.f, square.g)
    try:
        med = ops.mediate_pullback(P, p1, p2, square.p, square.q)
    except StructureError:
        return False
    return classes.is_s0(med)


def derived_lemma_suite(classes: CompactificationClasses,
                        caps: dict | None = None) -> Report:
    """Verify the lemmas the compactification algorithms depend on.

    1. proper maps and embeddings are stable under binary products;
    2. proper maps are stable under fiber products (morphisms of
       cospans that are point-wise proper induce proper maps on
       pullbacks);
    3. proper maps are stable under finite limits (parallel-pair and
       cospan shapes checked);
    4. for diagrams with a final shape object and all arrows proper,
       the limit projections are proper;
    5. commuting squares with proper rows, embedding columns and dense
       left column are Cartesian;
    6. in a two-story diagram with embedding top verticals (left one
       dense) and proper bottom verticals, a weakly Cartesian outer
       rectangle forces the top square to be Cartesian.

    ``caps`` optionally overrides the per-check window sizes for the
    finite-set instance: keys ``pairs``, ``cospans``, ``squares``.
    """
    rep = Report("lemmas:" + classes.name)
    ops = classes.ops
    caps = caps or {}
    is_finset = getattr(ops, "kind", "") == "finset"

    def window(key, default):
        return window_for(classes, caps.get(key, default) if is_finset else 0)

    # 1. products
    objs, mors = window("pairs", 2)
    for pred, nm in ((classes.is_s0, "S0"), (classes.is_s2, "S2")):
        for f in mors:
            if not pred(f):
                continue
            for g in mors:
                if not pred(g):
                    continue
                Ps, sprojs = ops.product([ops.src(f), ops.src(g)])
                Pd, dprojs = ops.product([ops.dst(f), ops.dst(g)])
                fxg = ops.tuple_map(Pd, dprojs,
                                    [ops.then(sprojs[0], f), ops.then(sprojs[1], g)])
                if not pred(fxg):
                    rep.record(False, {"lemma": "products", "class": nm,
                                       "f": repr(f), "g": repr(g)})
                else:
                    rep.record(True)

    # 2. fiber products
    objs, mors = window("cospans", 2)
    by_dst = {}
    by_pair = {}
    for m in mors:
        by_dst.setdefault(ops.dst(m), []).append(m)
        by_pair.setdefault((ops.src(m), ops.dst(m)), []).append(m)
    s0 = [m for m in mors if classes.is_s0(m)]
    for b in s0:
        Y, Y2 = ops.src(b), ops.dst(b)
        for f1 in by_dst.get(Y, ()):
            for f2 in by_dst.get(Y2, ()):
                a_cands = [a for a in by_pair.get((ops.src(f1), ops.src(f2)), ())
                           if classes.is_s0(a) and
                           ops.then(a, f2) == ops.then(f1, b)]
                for g1 in by_dst.get(Y, ()):
                    for g2 in by_dst.get(Y2, ()):
                        c_cands = [c for c in
                                   by_pair.get((ops.src(g1), ops.src(g2)), ())
                                   if classes.is_s0(c) and
                                   ops.then(c, g2) == ops.then(g1, b)]
                        for a in a_cands:
                            for c in c_cands:
                                try:
                                    P1, p1a, p1c = ops.pullback(f1, g1)
                                    P2, p2a, p2c = ops.pullback(f2, g2)
                                    med = ops.mediate_pullback(
                                        P2, p2a, p2c,
                                        ops.then(p1a, a), ops.then(p1c, c))
                                    ok = classes.is_s0(med)
                                except StructureError:
                                    ok = False
                                rep.record(ok, None if ok else {
                                    "lemma": "fiber-products",
                                    "b": repr(b), "a": repr(a), "c": repr(c)})

    # 3. finite limits: parallel pairs via equalizers (pointwise-S0
    # morphisms of parallel-pair diagrams induce S0 maps on limits)
    objs, mors = window("cospans", 2)
    shape = _parallel_shape()
    for S in objs:
        for T in objs:
            homST = _maps_between(ops, mors, S, T)
            for f in homST:
                for g in homST:
                    L1, cone1 = ops.limit(shape, {"s": S, "t": T},
                                          {"a": f, "b": g})
                    for u in mors:
                        if ops.src(u) != S or not classes.is_s0(u):
                            continue
                        for v in mors:
                            if ops.src(v) != T or not classes.is_s0(v):
                                continue
                            S2o, T2o = ops.dst(u), ops.dst(v)
                            for f2 in _maps_between(ops, mors, S2o, T2o):
                                if ops.then(u, f2) != ops.then(f, v):
                                    continue
                                for g2 in _maps_between(ops, mors, S2o, T2o):
                                    if ops.then(u, g2) != ops.then(g, v):
                                        continue
                                    L2, cone2 = ops.limit(
                                        shape, {"s": S2o, "t": T2o},
                                        {"a": f2, "b": g2})
                                    med = ops.mediate_limit(
                                        L2, cone2, ["s", "t"],
                                        {"s": ops.then(cone1["s"], u),
                                         "t": ops.then(cone1["t"], v)})
                                    if not classes.is_s0(med):
                                        rep.record(False, {
                                            "lemma": "finite-limits",
                                            "f": repr(f), "g": repr(g),
                                            "u": repr(u), "v": repr(v)})
                                    else:
                                        rep.record(True)

    # 4. final-object shapes with proper arrows: projections proper
    objs, mors = window("squares", 2)
    shape = delta_category(1)
    for f in mors:
        if not classes.is_s0(f):
            continue
        L, cone = ops.limit(shape, {"0": ops.src(f), "1": ops.dst(f)},
                            {"0<1": f, "id:0": ops.identity(ops.src(f)),
                             "id:1": ops.identity(ops.dst(f))})
        ok = all(classes.is_s0(cone[o]) for o in ("0", "1"))
        rep.record(ok, None if ok else {"lemma": "final-projections", "f": repr(f)})
    cos = _cospan_with_final()
    for f in mors:
        for g in mors:
            if ops.dst(g) != ops.dst(f):
                continue
            if not (classes.is_s0(f) and classes.is_s0(g)):
                continue
            idz = ops.identity(ops.dst(f))
            L, cone = ops.limit(cos, {"x": ops.src(f), "y": ops.src(g),
                                      "z": ops.dst(f)},
                                {"f": f, "g": g})
            ok = all(classes.is_s0(cone[o]) for o in ("x", "y", "z"))
            rep.record(ok, None if ok else {"lemma": "final-projections",
                                            "f": repr(f), "g": repr(g)})

    # 5. proper rows + embedding columns + dense left column => Cartesian
    objs, mors = window("squares", 3)
    for F in mors:                   # top row W -> X, proper
        if not classes.is_s0(F):
            continue
        W, X = ops.src(F), ops.dst(F)
        for iw in mors:              # left column W -> Z, dense
            if ops.src(iw) != W or not classes.is_s1(iw):
                continue
            Z = ops.dst(iw)
            for ix in mors:          # right column X -> Y, embedding
                if ops.src(ix) != X or not classes.is_s2(ix):
                    continue
                Y = ops.dst(ix)
                for fb in _maps_between(ops, mors, Z, Y):
                    if not classes.is_s0(fb):
                        continue
                    if ops.then(F, ix) != ops.then(iw, fb):
                        continue
                    sq = Square(p=F, q=iw, f=ix, g=fb)
                    ok = is_cartesian_square(sq, ops)
                    rep.record(ok, None if ok else {
                        "lemma": "dense-proper-cartesian",
                        "F": repr(F), "iota": repr(iw),
                        "iota'": repr(ix), "fbar": repr(fb)})

    # 6. weakly Cartesian outer + dense top-left => top Cartesian
    objs, mors = window("squares", 2)
    for tl in mors:                  # top square left column, dense
        if not classes.is_s1(tl):
            continue
        A, C = ops.src(tl), ops.dst(tl)
        for tr in mors:              # top square right column, embedding
            if not classes.is_s2(tr):
                continue
            B, D = ops.src(tr), ops.dst(tr)
            for t in _maps_between(ops, mors, A, B):
                for m in _maps_between(ops, mors, C, D):
                    if ops.then(t, tr) != ops.then(tl, m):
                        continue
                    for bl in mors:  # bottom verticals, proper
                        if ops.src(bl) != C or not classes.is_s0(bl):
                            continue
                        E = ops.dst(bl)
                        for br in mors:
                            if ops.src(br) != D or not classes.is_s0(br):
                                continue
                            Ff = ops.dst(br)
                            for bot in _maps_between(ops, mors, E, Ff):
                                if ops.then(m, br) != ops.then(bl, bot):
                                    continue
                                outer = Square(p=t, q=ops.then(tl, bl),
                                               f=ops.then(tr, br), g=bot)
                                if not is_weakly_cartesian(outer, classes):
                                    continue
                                top = Square(p=t, q=tl, f=tr, g=m)
                                ok = is_cartesian_square(top, ops)
                                rep.record(ok, None if ok else {
                                    "lemma": "weak-outer-cartesian-top",
                                    "t": repr(t), "tl": repr(tl),
                                    "tr": repr(tr), "m": repr(m)})
    return rep


def _parallel_shape() -> FiniteCategory:
    mors = [("ids", "s", "s"), ("idt", "t", "t"), ("a", "s", "t"), ("b", "s", "t")]
    comp = {("ids", "ids"): "ids", ("idt", "idt"): "idt",
            ("ids", "a"): "a", ("a", "idt"): "a",
            ("ids", "b"): "b", ("b", "idt"): "b"}
    return FiniteCategory(["s", "t"], mors, {"s": "ids", "t": "idt"}, comp,
                          name="parallel-pair")


def _cospan_with_final() -> FiniteCategory:
    from ..finset import _cospan_shape
    return _cospan_shape()


class CorruptedPullbackOps:
    """Wrapper that deliberately mis-chooses pullbacks (drops the last
    element of every pullback with at least two); for mutation testing
    of the lemma suite."""

    def __init__(self, inner):
        self._inner = inner

    def __getattr__(self, item):
        return getattr(self._inner, item)

    def pullback(self, f, g):
        P, p1, p2 = self._inner.pullback(f, g)
        if isinstance(P, FinObj) and len(P) > 1:
            keep = tuple(range(len(P) - 1))
            P2 = FinObj(tuple(P.elements[i] for i in keep))
            q1 = FinMap(P2, p1.dst, tuple(p1.idx[i] for i in keep))
            q2 = FinMap(P2, p2.dst, tuple(p2.idx[i] for i in keep))
            return P2, q1, q2
        return P, p1, p2
