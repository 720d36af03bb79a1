"""The category of finite sets with chosen, deterministic limits.

Objects are ``FinObj`` (ordered tuples of hashable elements, no
duplicates); maps are ``FinMap`` (position tables).  All chosen limits
are canonical: the pullback of a cospan is the set of matching pairs in
lexicographic position order, products are tuple sets, the terminal
object is a fixed one-point set.  Identical inputs therefore produce
bit-identical outputs everywhere.

``FinSetOps`` exposes the oracle interface consumed by the
compactification algorithms; ``FinCatOps`` provides the same interface
for an arbitrary explicit finite category by exhaustive universal-
property search (usable for small bases such as the shipped toy poset).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .fincat.core import FiniteCategory, StructureError


@dataclass(frozen=True)
class FinObj:
    elements: tuple

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise StructureError("FinObj elements must be distinct")

    def __len__(self):
        return len(self.elements)

    def index(self, x):
        return self.elements.index(x)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f"FinObj{self.elements!r}"


@dataclass(frozen=True)
class FinMap:
    src: FinObj
    dst: FinObj
    idx: tuple  # position in dst per position in src

    def __post_init__(self):
        if len(self.idx) != len(self.src.elements):
            raise StructureError("FinMap table has wrong length")
        n = len(self.dst.elements)
        if any(not (0 <= i < n) for i in self.idx):
            raise StructureError("FinMap table out of range")

    def __call__(self, x):
        return self.dst.elements[self.idx[self.src.index(x)]]

    def apply_pos(self, i: int) -> int:
        return self.idx[i]

    @property
    def is_injective(self) -> bool:
        return len(set(self.idx)) == len(self.idx)

    @property
    def is_surjective(self) -> bool:
        return len(set(self.idx)) == len(self.dst.elements)

    @property
    def is_bijective(self) -> bool:
        return self.is_injective and self.is_surjective

    def __repr__(self):
        return f"FinMap({self.src.elements!r}->{self.dst.elements!r}:{self.idx!r})"


def fin_obj(elements) -> FinObj:
    return FinObj(tuple(elements))


def fin_map(src, dst, fn) -> FinMap:
    """Build a map from a callable or an element dict."""
    src = src if isinstance(src, FinObj) else fin_obj(src)
    dst = dst if isinstance(dst, FinObj) else fin_obj(dst)
    get = fn.__getitem__ if isinstance(fn, dict) else fn
    idx = tuple(dst.index(get(x)) for x in src.elements)
    return FinMap(src, dst, idx)


def identity_map(X: FinObj) -> FinMap:
    return FinMap(X, X, tuple(range(len(X))))


def compose_maps(f: FinMap, g: FinMap) -> FinMap:
    """f then g."""
    if f.dst != g.src:
        raise StructureError("maps not composable")
    return FinMap(f.src, g.dst, tuple(g.idx[i] for i in f.idx))


TERMINAL = FinObj(("*",))


class FinSetOps:
    """Chosen-limit oracle for finite sets."""

    kind = "finset"

    def src(self, f: FinMap) -> FinObj:
        return f.src

    def dst(self, f: FinMap) -> FinObj:
        return f.dst

    def identity(self, X: FinObj) -> FinMap:
        return identity_map(X)

    def then(self, f: FinMap, g: FinMap) -> FinMap:
        return compose_maps(f, g)

    def is_identity(self, f: FinMap) -> bool:
        return f.src == f.dst and f.idx == tuple(range(len(f.src)))

    def is_iso(self, f: FinMap) -> bool:
        return f.is_bijective

    def terminal(self) -> FinObj:
        return TERMINAL

    def to_terminal(self, X: FinObj) -> FinMap:
        return FinMap(X, TERMINAL, (0,) * len(X))

    def product(self, objs):
        objs = list(objs)
        if not objs:
            return TERMINAL, []
        elems = tuple(iproduct(*[o.elements for o in objs]))
        P = FinObj(elems)
        projs = [FinMap(P, o, tuple(o.index(t[k]) for t in elems))
                 for k, o in enumerate(objs)]
        return P, projs

    def tuple_map(self, P: FinObj, projs, maps):
        """The unique map into a chosen product with given components."""
        src = maps[0].src
        if any(m.src != src for m in maps):
            raise StructureError("components have different sources")
        idx = []
        for i in range(len(src)):
            t = tuple(m.dst.elements[m.idx[i]] for m in maps)
            idx.append(P.index(t))
        return FinMap(src, P, tuple(idx))

    def pullback(self, f: FinMap, g: FinMap):
        """Chosen pullback of the cospan f: X -> Z <- Y: g."""
        if f.dst != g.dst:
            raise StructureError("not a cospan")
        if self.is_identity(g):
            # strictly degenerate choice: X itself (keeps interior
            # compactification restrictions literal record equalities)
            return f.src, identity_map(f.src), f
        if self.is_identity(f):
            return g.src, g, identity_map(g.src)
        pairs = [(x, y)
                 for x in f.src.elements for y in g.src.elements
                 if f(x) == g(y)]
        P = FinObj(tuple(pairs))
        p1 = FinMap(P, f.src, tuple(f.src.index(x) for x, _ in pairs))
        p2 = FinMap(P, g.src, tuple(g.src.index(y) for _, y in pairs))
        return P, p1, p2

    def mediate_pullback(self, P, p1, p2, u: FinMap, v: FinMap) -> FinMap:
        """Unique map h with h.p1 = u, h.p2 = v into a chosen pullback."""
        idx = []
        table1 = {}
        for i in range(len(P)):
            table1.setdefault((p1.idx[i], p2.idx[i]), i)
        for i in range(len(u.src)):
            key = (u.idx[i], v.idx[i])
            if key not in table1:
                raise StructureError("cone does not factor through pullback")
            idx.append(table1[key])
        return FinMap(u.src, P, tuple(idx))

    def limit(self, shape: FiniteCategory, values: dict, arrows: dict):
        """Limit of a finite diagram of finite sets.

        ``values`` maps shape objects to FinObj, ``arrows`` maps shape
        morphisms to FinMap.  Returns (L, cone) with cone a dict of
        projections; mediation via :meth:`mediate_limit`.
        """
        objs = list(shape.objects)
        if not objs:
            return TERMINAL, {}
        conds = [(shape.src(m), shape.dst(m), arrows[m])
                 for m in shape.morphisms if not shape.is_identity(m)]
        tuples = []
        for combo in iproduct(*[values[o].elements for o in objs]):
            assign = dict(zip(objs, combo))
            if all(f(assign[a]) == assign[b] for a, b, f in conds):
                tuples.append(combo)
        L = FinObj(tuple(tuples))
        cone = {}
        for k, o in enumerate(objs):
            cone[o] = FinMap(L, values[o],
                             tuple(values[o].index(t[k]) for t in tuples))
        return L, cone

    def mediate_limit(self, L: FinObj, cone: dict, shape_objects,
                      legs: dict) -> FinMap:
        """Unique factorization of a compatible cone through the limit."""
        objs = list(shape_objects)
        src = legs[objs[0]].src
        index = {}
        for i in range(len(L)):
            key = tuple(cone[o].idx[i] for o in objs)
            index.setdefault(key, i)
        idx = []
        for i in range(len(src)):
            key = tuple(legs[o].idx[i] for o in objs)
            if key not in index:
                raise StructureError("cone does not factor through limit")
            idx.append(index[key])
        return FinMap(src, L, tuple(idx))

    # -- morphism classes of the standard instance ------------------------

    @staticmethod
    def is_proper(f: FinMap) -> bool:
        return True

    @staticmethod
    def is_dense(f: FinMap) -> bool:
        return f.is_bijective

    @staticmethod
    def is_embedding(f: FinMap) -> bool:
        return f.is_injective


class FinCatOps:
    """Oracle interface over an explicit finite category.

    Limits are found by exhaustive universal-property search with a
    deterministic tie-break (first candidate in category order); raises
    if a required limit does not exist.
    """

    kind = "fincat"

    def __init__(self, cat: FiniteCategory):
        self.cat = cat
        self._terminal = None
        self._lim_cache = {}

    def src(self, f):
        return self.cat.src(f)

    def dst(self, f):
        return self.cat.dst(f)

    def identity(self, X):
        return self.cat.id_of(X)

    def then(self, f, g):
        return self.cat.then(f, g)

    def is_identity(self, f):
        return self.cat.is_identity(f)

    def is_iso(self, f):
        return self.cat.is_iso(f)

    def terminal(self):
        if self._terminal is None:
            for o in self.cat.objects:
                if all(len(self.cat.hom(x, o)) == 1 for x in self.cat.objects):
                    self._terminal = o
                    break
            else:
                raise StructureError("category has no terminal object")
        return self._terminal

    def to_terminal(self, X):
        return self.cat.hom(X, self.terminal())[0]

    def product(self, objs):
        objs = list(objs)
        if not objs:
            t = self.terminal()
            return t, []
        shape = _discrete_shape(len(objs))
        values = {str(i): o for i, o in enumerate(objs)}
        L, cone = self.limit(shape, values, {})
        return L, [cone[str(i)] for i in range(len(objs))]

    def tuple_map(self, P, projs, maps):
        src = self.cat.src(maps[0])
        for h in self.cat.hom(src, P):
            if all(self.cat.then(h, p) == m for p, m in zip(projs, maps)):
                return h
        raise StructureError("no tuple map into product")

    def pullback(self, f, g):
        # degenerate choices keep diagonal restrictions literal
        if self.is_identity(g):
            return self.cat.src(f), self.cat.id_of(self.cat.src(f)), f
        if self.is_identity(f):
            return self.cat.src(g), g, self.cat.id_of(self.cat.src(g))
        if not hasattr(self, "_cospan"):
            self._cospan = _cospan_shape()
        values = {"x": self.cat.src(f), "y": self.cat.src(g), "z": self.cat.dst(f)}
        arrows = {"f": f, "g": g}
        L, cone = self.limit(self._cospan, values, arrows)
        return L, cone["x"], cone["y"]

    def mediate_pullback(self, P, p1, p2, u, v):
        src = self.cat.src(u)
        hits = [h for h in self.cat.hom(src, P)
                if self.cat.then(h, p1) == u and self.cat.then(h, p2) == v]
        if len(hits) != 1:
            raise StructureError("pullback mediation not unique")
        return hits[0]

    def limit(self, shape: FiniteCategory, values: dict, arrows: dict):
        key = (id(shape), tuple(sorted(values.items())),
               tuple(sorted(arrows.items())))
        if key in self._lim_cache:
            return self._lim_cache[key]
        cat = self.cat
        objs = list(shape.objects)
        if not objs:
            t = self.terminal()
            out = (t, {})
            self._lim_cache[key] = out
            return out

        def cones_from(L):
            # enumerate natural cones L -> values
            choices = [cat.hom(L, values[o]) for o in objs]
            for combo in iproduct(*choices):
                legs = dict(zip(objs, combo))
                if all(cat.then(legs[shape.src(m)], arrows[m]) == legs[shape.dst(m)]
                       for m in shape.morphisms if not shape.is_identity(m)):
                    yield legs

        best = None
        for L in cat.objects:
            for legs in cones_from(L):
                universal = True
                for X in cat.objects:
                    for other in cones_from(X):
                        fills = [h for h in cat.hom(X, L)
                                 if all(cat.then(h, legs[o]) == other[o]
                                        for o in objs)]
                        if len(fills) != 1:
                            universal = False
                            break
                    if not universal:
                        break
                if universal:
                    best = (L, legs)
                    break
            if best:
                break
        if best is None:
            raise StructureError(
                f"no limit of shape {shape.name!r} in {cat.name!r}")
        self._lim_cache[key] = best
        return best

    def mediate_limit(self, L, cone, shape_objects, legs: dict):
        objs = list(shape_objects)
        src = self.cat.src(legs[objs[0]])
        hits = [h for h in self.cat.hom(src, L)
                if all(self.cat.then(h, cone[o]) == legs[o] for o in objs)]
        if len(hits) != 1:
            raise StructureError("limit mediation not unique")
        return hits[0]


def _discrete_shape(n: int) -> FiniteCategory:
    from .fincat.core import discrete_category
    return discrete_category(n)


def _cospan_shape() -> FiniteCategory:
    mors = [("idx", "x", "x"), ("idy", "y", "y"), ("idz", "z", "z"),
            ("f", "x", "z"), ("g", "y", "z")]
    comp = {("idx", "idx"): "idx", ("idy", "idy"): "idy", ("idz", "idz"): "idz",
            ("idx", "f"): "f", ("f", "idz"): "f",
            ("idy", "g"): "g", ("g", "idz"): "g"}
    return FiniteCategory(["x", "y", "z"], mors,
                          {"x": "idx", "y": "idy", "z": "idz"}, comp,
                          name="cospan")
