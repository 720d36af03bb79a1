"""Explicit finite categories with total composition tables.

A category is stored extensionally: every object, every morphism, the
identity assignment and the full table of composites.  This makes every
universal property decidable by exhaustive search, which is the point:
all constructions in this package are checked, never trusted.

Composition is written in diagram order throughout: ``then(f, g)`` is
"f followed by g" and requires ``dst(f) == src(g)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Iterable, Optional


class StructureError(Exception):
    """Malformed categorical data (missing table entries, bad ids)."""


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of an exhaustive law check.

    ``violations`` lists one human-readable record per broken law
    instance; an empty list means the data is a category / functor /
    natural transformation.
    """

    subject: str
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


class FiniteCategory:
    """A finite category given by objects, morphisms and a compose table.

    Parameters
    ----------
    objects:
        iterable of object ids (strings).
    morphisms:
        iterable of ``(mor_id, src, dst)`` triples.
    identity:
        mapping object id -> identity morphism id.
    compose:
        mapping ``(f, g) -> g_after_f`` for every composable pair,
        i.e. ``compose[(f, g)]`` is "f then g".
    """

    def __init__(self, objects, morphisms, identity, compose, name: str = ""):
        self.name = name
        self.objects = tuple(objects)
        self._obj_set = set(self.objects)
        if len(self._obj_set) != len(self.objects):
            raise StructureError("duplicate object ids")
        self._src = {}
        self._dst = {}
        mors = []
        for m, s, d in morphisms:
            if m in self._src:
                raise StructureError(f"duplicate morphism id {m!r}")
            if s not in self._obj_set or d not in self._obj_set:
                raise StructureError(f"morphism {m!r} has unknown endpoint")
            self._src[m] = s
            self._dst[m] = d
            mors.append(m)
        self.morphisms = tuple(mors)
        self.identity = dict(identity)
        for o in self.objects:
            i = self.identity.get(o)
            if i is None or self._src.get(i) != o or self._dst.get(i) != o:
                raise StructureError(f"object {o!r} lacks a well-typed identity")
        self._by_src: dict = {o: [] for o in self.objects}
        self._by_dst: dict = {o: [] for o in self.objects}
        for m in self.morphisms:
            self._by_src[self._src[m]].append(m)
            self._by_dst[self._dst[m]].append(m)
        self._compose = dict(compose)
        for (f, g), h in self._compose.items():
            if f not in self._src or g not in self._src or h not in self._src:
                raise StructureError(f"compose entry ({f!r},{g!r}) uses unknown ids")
        # Every composable pair must be present.
        for f in self.morphisms:
            for g in self._by_src[self._dst[f]]:
                if (f, g) not in self._compose:
                    raise StructureError(f"missing compose entry ({f!r},{g!r})")
        self._hom_cache: dict = {}

    # -- basic accessors -------------------------------------------------

    def src(self, m: str) -> str:
        return self._src[m]

    def dst(self, m: str) -> str:
        return self._dst[m]

    def id_of(self, o: str) -> str:
        return self.identity[o]

    def is_identity(self, m: str) -> bool:
        return self.identity[self._src[m]] == m

    def then(self, f: str, g: str) -> str:
        """Composite "f then g" (requires dst(f) == src(g))."""
        try:
            return self._compose[(f, g)]
        except KeyError:
            raise StructureError(f"morphisms not composable: {f!r} then {g!r}")

    def then_all(self, *ms: str) -> str:
        """Composite of a chain of morphisms in diagram order."""
        if not ms:
            raise StructureError("empty composite")
        out = ms[0]
        for m in ms[1:]:
            out = self.then(out, m)
        return out

    def hom(self, a: str, b: str) -> tuple:
        key = (a, b)
        if key not in self._hom_cache:
            self._hom_cache[key] = tuple(
                m for m in self._by_src[a] if self._dst[m] == b
            )
        return self._hom_cache[key]

    def morphisms_from(self, a: str) -> tuple:
        return tuple(self._by_src[a])

    def morphisms_to(self, b: str) -> tuple:
        return tuple(self._by_dst[b])

    def is_iso(self, m: str) -> bool:
        a, b = self._src[m], self._dst[m]
        for n in self.hom(b, a):
            if self.then(m, n) == self.identity[a] and self.then(n, m) == self.identity[b]:
                return True
        return False

    def composable_pairs(self):
        for f in self.morphisms:
            for g in self._by_src[self._dst[f]]:
                yield f, g

    def __repr__(self):
        nm = f" {self.name!r}" if self.name else ""
        return f"<FiniteCategory{nm}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"


def validate_category(cat: FiniteCategory) -> ValidationReport:
    """Exhaustively check identity and associativity laws.

    Returns a report listing every violated instance (empty iff ``cat``
    is a category).  Typing of composites (src/dst agreement) is checked
    as well.
    """
    bad = []
    for f in cat.morphisms:
        a, b = cat.src(f), cat.dst(f)
        if cat.then(cat.id_of(a), f) != f:
            bad.append(("left-identity", cat.id_of(a), f))
        if cat.then(f, cat.id_of(b)) != f:
            bad.append(("right-identity", f, cat.id_of(b)))
    for f, g in cat.composable_pairs():
        h = cat.then(f, g)
        if cat.src(h) != cat.src(f) or cat.dst(h) != cat.dst(g):
            bad.append(("composite-typing", f, g, h))
    for f in cat.morphisms:
        for g in cat.morphisms_from(cat.dst(f)):
            for h in cat.morphisms_from(cat.dst(g)):
                if cat.then(cat.then(f, g), h) != cat.then(f, cat.then(g, h)):
                    bad.append(("associativity", f, g, h))
    return ValidationReport("category", tuple(bad))


class Functor:
    """A functor between explicit finite categories."""

    def __init__(self, source: FiniteCategory, target: FiniteCategory,
                 obj_map: dict, mor_map: dict, name: str = ""):
        self.source = source
        self.target = target
        self.obj_map = dict(obj_map)
        self.mor_map = dict(mor_map)
        self.name = name

    def on_obj(self, o: str) -> str:
        return self.obj_map[o]

    def on_mor(self, m: str) -> str:
        return self.mor_map[m]

    def validate(self) -> ValidationReport:
        bad = []
        for o in self.source.objects:
            if o not in self.obj_map or self.obj_map[o] not in self.target._obj_set:
                bad.append(("object-map", o))
        for m in self.source.morphisms:
            if m not in self.mor_map:
                bad.append(("morphism-map-missing", m))
                continue
            fm = self.mor_map[m]
            if self.target.src(fm) != self.obj_map[self.source.src(m)] or \
               self.target.dst(fm) != self.obj_map[self.source.dst(m)]:
                bad.append(("morphism-typing", m))
        if not bad:
            for o in self.source.objects:
                if self.mor_map[self.source.id_of(o)] != self.target.id_of(self.obj_map[o]):
                    bad.append(("identity", o))
            for f, g in self.source.composable_pairs():
                if self.mor_map[self.source.then(f, g)] != \
                   self.target.then(self.mor_map[f], self.mor_map[g]):
                    bad.append(("composition", f, g))
        return ValidationReport("functor", tuple(bad))

    def compose_with(self, other: "Functor", name: str = "") -> "Functor":
        """self followed by other (other.source must be self.target)."""
        if other.source is not self.target and other.source != self.target:
            raise StructureError("functors not composable")
        return Functor(
            self.source, other.target,
            {o: other.obj_map[x] for o, x in self.obj_map.items()},
            {m: other.mor_map[x] for m, x in self.mor_map.items()},
            name=name or f"{other.name}∘{self.name}",
        )

    def __repr__(self):
        nm = f" {self.name!r}" if self.name else ""
        return f"<Functor{nm}: {self.source!r} -> {self.target!r}>"


def identity_functor(cat: FiniteCategory) -> Functor:
    return Functor(cat, cat, {o: o for o in cat.objects},
                   {m: m for m in cat.morphisms}, name="id")


class NaturalTransformation:
    """A natural transformation between parallel functors."""

    def __init__(self, source: Functor, target: Functor, components: dict, name: str = ""):
        if source.source is not target.source or source.target is not target.target:
            if source.source != target.source or source.target != target.target:
                raise StructureError("functors are not parallel")
        self.source = source
        self.target = target
        self.components = dict(components)
        self.name = name

    def at(self, o: str) -> str:
        return self.components[o]

    def validate(self) -> ValidationReport:
        bad = []
        cat = self.source.source
        tgt = self.source.target
        for o in cat.objects:
            c = self.components.get(o)
            if c is None or tgt.src(c) != self.source.obj_map[o] or \
               tgt.dst(c) != self.target.obj_map[o]:
                bad.append(("component-typing", o))
        if not bad:
            for m in cat.morphisms:
                a, b = cat.src(m), cat.dst(m)
                lhs = tgt.then(self.source.mor_map[m], self.components[b])
                rhs = tgt.then(self.components[a], self.target.mor_map[m])
                if lhs != rhs:
                    bad.append(("naturality", m))
        return ValidationReport("natural-transformation", tuple(bad))


@dataclass(frozen=True)
class DegreeFunction:
    """Witness that a category is inverse.

    ``deg`` assigns each object a non-negative integer such that every
    non-identity morphism strictly decreases it.
    """

    category: FiniteCategory
    deg: dict

    def validate(self) -> ValidationReport:
        bad = []
        for m in self.category.morphisms:
            if self.category.is_identity(m):
                continue
            if not self.deg[self.category.src(m)] > self.deg[self.category.dst(m)]:
                bad.append(("non-decreasing", m))
        for v in self.deg.values():
            if v < 0:
                bad.append(("negative-degree", v))
        return ValidationReport("degree-function", tuple(bad))


# -- builders ------------------------------------------------------------


def terminal_category() -> FiniteCategory:
    return FiniteCategory(["*"], [("id", "*", "*")], {"*": "id"},
                          {("id", "id"): "id"}, name="point")


def discrete_category(n: int) -> FiniteCategory:
    objs = [str(i) for i in range(n)]
    mors = [(f"id{i}", str(i), str(i)) for i in range(n)]
    comp = {(f"id{i}", f"id{i}"): f"id{i}" for i in range(n)}
    return FiniteCategory(objs, mors, {str(i): f"id{i}" for i in range(n)},
                          comp, name=f"discrete{n}")


def poset_category(elements, leq, name: str = "") -> FiniteCategory:
    """The category of a finite poset: one morphism x -> y iff leq(x, y)."""
    elements = [str(e) for e in elements]
    mors = []
    for x in elements:
        for y in elements:
            if leq(x, y):
                mors.append((f"{x}<{y}" if x != y else f"id:{x}", x, y))
    ident = {x: f"id:{x}" for x in elements}
    by_pair = {(s, d): m for m, s, d in mors}
    comp = {}
    for m, s, d in mors:
        for n, s2, d2 in mors:
            if d == s2:
                comp[(m, n)] = by_pair[(s, d2)]
    return FiniteCategory(elements, mors, ident, comp, name=name or "poset")


def delta_category(n: int) -> FiniteCategory:
    """The linear order 0 -> 1 -> ... -> n as a category."""
    return poset_category([str(i) for i in range(n + 1)],
                          lambda x, y: int(x) <= int(y), name=f"delta{n}")


def opposite_category(cat: FiniteCategory) -> FiniteCategory:
    mors = [(m, cat.dst(m), cat.src(m)) for m in cat.morphisms]
    comp = {(g, f): h for (f, g), h in cat._compose.items()}
    return FiniteCategory(cat.objects, mors, dict(cat.identity), comp,
                          name=f"{cat.name}^op")


def product_category(left: FiniteCategory, right: FiniteCategory) -> FiniteCategory:
    def po(a, b):
        return f"({a},{b})"

    objs = [po(a, b) for a in left.objects for b in right.objects]
    mors = []
    ident = {}
    for f in left.morphisms:
        for g in right.morphisms:
            m = po(f, g)
            mors.append((m, po(left.src(f), right.src(g)), po(left.dst(f), right.dst(g))))
    for a in left.objects:
        for b in right.objects:
            ident[po(a, b)] = po(left.id_of(a), right.id_of(b))
    comp = {}
    for (f1, g1), h1 in left._compose.items():
        for (f2, g2), h2 in right._compose.items():
            comp[(po(f1, f2), po(g1, g2))] = po(h1, h2)
    return FiniteCategory(objs, mors, ident, comp,
                          name=f"{left.name}x{right.name}")


def full_subcategory(cat: FiniteCategory, objects, name: str = "") -> FiniteCategory:
    keep = set(objects)
    mors = [(m, cat.src(m), cat.dst(m)) for m in cat.morphisms
            if cat.src(m) in keep and cat.dst(m) in keep]
    kept = {m for m, _, _ in mors}
    comp = {k: v for k, v in cat._compose.items() if k[0] in kept and k[1] in kept}
    ident = {o: cat.id_of(o) for o in cat.objects if o in keep}
    return FiniteCategory([o for o in cat.objects if o in keep], mors, ident, comp,
                          name=name or f"{cat.name}|sub")


class PullbackCategory(FiniteCategory):
    """Strict pullback of categories, with component projections kept as
    explicit tables (labels are opaque; never parsed)."""

    def __init__(self, objects, morphisms, identity, compose,
                 obj_parts, mor_parts, name=""):
        super().__init__(objects, morphisms, identity, compose, name=name)
        self.obj_parts = obj_parts  # label -> (left object, right object)
        self.mor_parts = mor_parts  # label -> (left morphism, right morphism)


def pullback_category(f: Functor, g: Functor, name: str = "") -> PullbackCategory:
    """Strict pullback of categories along functors with common target."""
    if f.target != g.target and f.target is not g.target:
        raise StructureError("pullback needs a common target")
    C, D = f.source, g.source
    objs = []
    obj_parts = {}
    obj_label = {}
    for i, a in enumerate(C.objects):
        for j, b in enumerate(D.objects):
            if f.obj_map[a] == g.obj_map[b]:
                lb = f"o{len(objs)}"
                objs.append(lb)
                obj_parts[lb] = (a, b)
                obj_label[(a, b)] = lb
    mors = []
    mor_parts = {}
    mor_label = {}
    for m in C.morphisms:
        fm = f.mor_map[m]
        for n in D.morphisms:
            if fm == g.mor_map[n]:
                lb = f"m{len(mors)}"
                mors.append((lb, obj_label[(C.src(m), D.src(n))],
                             obj_label[(C.dst(m), D.dst(n))]))
                mor_parts[lb] = (m, n)
                mor_label[(m, n)] = lb
    ident = {lb: mor_label[(C.id_of(a), D.id_of(b))]
             for lb, (a, b) in obj_parts.items()}
    comp = {}
    by_src = {}
    for lb, s, d in mors:
        by_src.setdefault(s, []).append((lb, d))
    for lb, s, d in mors:
        m1, n1 = mor_parts[lb]
        for lb2, d2 in by_src.get(d, ()):
            m2, n2 = mor_parts[lb2]
            comp[(lb, lb2)] = mor_label[(C.then(m1, m2), D.then(n1, n2))]
    return PullbackCategory(objs, mors, ident, comp, obj_parts, mor_parts,
                            name=name or "pullback")


# -- isomorphism testing -------------------------------------------------


def _object_fingerprint(cat: FiniteCategory, o: str):
    outs = sorted((cat.dst(m) != o, 1) for m in cat.morphisms_from(o))
    ins_ = sorted((cat.src(m) != o, 1) for m in cat.morphisms_to(o))
    return (len(outs), len(ins_),
            tuple(sorted(len(cat.hom(o, p)) for p in cat.objects)),
            tuple(sorted(len(cat.hom(p, o)) for p in cat.objects)))


def find_isomorphism(cat1: FiniteCategory, cat2: FiniteCategory) -> Optional[Functor]:
    """Search for an isomorphism of categories; None if there is none.

    Backtracks over object bijections compatible with hom-set-size
    fingerprints, then tries to extend to morphisms.  Intended for the
    small categories arising in tests.
    """
    if len(cat1.objects) != len(cat2.objects) or \
       len(cat1.morphisms) != len(cat2.morphisms):
        return None
    fp1 = {o: _object_fingerprint(cat1, o) for o in cat1.objects}
    fp2 = {o: _object_fingerprint(cat2, o) for o in cat2.objects}
    if sorted(fp1.values()) != sorted(fp2.values()):
        return None

    objs1 = sorted(cat1.objects, key=lambda o: (fp1[o], o))

    def extend(i, omap, used):
        if i == len(objs1):
            mmap = _extend_to_morphisms(cat1, cat2, omap)
            if mmap is not None:
                return Functor(cat1, cat2, omap, mmap, name="iso")
            return None
        a = objs1[i]
        for b in cat2.objects:
            if b in used or fp2[b] != fp1[a]:
                continue
            ok = all(len(cat1.hom(a, a2)) == len(cat2.hom(b, omap[a2])) and
                     len(cat1.hom(a2, a)) == len(cat2.hom(omap[a2], b))
                     for a2 in omap)
            if not ok:
                continue
            omap[a] = b
            used.add(b)
            res = extend(i + 1, omap, used)
            if res is not None:
                return res
            del omap[a]
            used.discard(b)
        return None

    return extend(0, {}, set())


def _extend_to_morphisms(cat1, cat2, omap):
    """Backtracking search for a compatible morphism bijection."""
    mors = sorted(cat1.morphisms)
    mmap = {}
    used = set()

    def candidates(m):
        a, b = omap[cat1.src(m)], omap[cat1.dst(m)]
        if cat1.is_identity(m):
            return [cat2.id_of(a)]
        return [x for x in cat2.hom(a, b) if x not in used and not cat2.is_identity(x)]

    def consistent(m, x):
        for n, y in mmap.items():
            if cat1.dst(n) == cat1.src(m):
                h = cat1.then(n, m)
                if h in mmap and mmap[h] != cat2.then(y, x):
                    return False
            if cat1.dst(m) == cat1.src(n):
                h = cat1.then(m, n)
                if h in mmap and mmap[h] != cat2.then(x, y):
                    return False
        return True

    def go(i):
        if i == len(mors):
            for f, g in cat1.composable_pairs():
                if mmap[cat1.then(f, g)] != cat2.then(mmap[f], mmap[g]):
                    return False
            return True
        m = mors[i]
        for x in candidates(m):
            if not consistent(m, x):
                continue
            mmap[m] = x
            used.add(x)
            if go(i + 1):
                return True
            del mmap[m]
            used.discard(x)
        return False

    return mmap if go(0) else None


def are_isomorphic(cat1: FiniteCategory, cat2: FiniteCategory) -> bool:
    return find_isomorphism(cat1, cat2) is not None
