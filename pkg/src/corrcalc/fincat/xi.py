"""Shape constructions on finite categories driven by arrow-direction words.

For a word ``Xi`` over ``{d, u}`` of length n, ``xi_category(C, Xi)`` has
as objects the chains of n-1 composable morphisms of ``C`` and as
morphisms the commuting ladders whose j-th vertical arrow points from
source chain to target chain when ``Xi[j] == 'd'`` and backwards when
``Xi[j] == 'u'``.  Composition is vertical pasting.

Special cases wired to named helpers:

* ``xi_category(C, "u")``   is C with arrows reversed,
* ``xi_category(C, "dd")``  is the comma category of C over itself,
* ``twisted_arrow(C) = xi_category(C, "du")`` has the morphisms of C as
  objects; maps out of an object are its factorizations,
* ``interior_shape(C) = xi_category(C, "ddu")`` is the 3-chain shape on
  which induced interior compactifications live,
* ``coherent_shape(C) = xi_category(C, "duud")`` is the 4-chain shape
  carrying coherent-diagram data.
"""

from __future__ import annotations

from .core import (
    FiniteCategory,
    Functor,
    StructureError,
    ValidationReport,
)

DEFAULT_SIZE_CAP = 50_000


class SizeCapExceeded(StructureError):
    """A shape construction would exceed the configured object cap."""


def parse_xi(xi) -> tuple:
    """Normalize a direction word to a tuple over {'d','u'}.

    Accepts "du", ["down","up"], ("d","u"), "↓↑".
    """
    if isinstance(xi, str):
        chars = list(xi)
    else:
        chars = list(xi)
    out = []
    for c in chars:
        c = str(c).lower()
        if c in ("d", "down", "↓"):
            out.append("d")
        elif c in ("u", "up", "↑"):
            out.append("u")
        else:
            raise StructureError(f"bad direction {c!r}")
    if not out:
        raise StructureError("direction word must be nonempty")
    return tuple(out)


def chain_label(objs, mors) -> str:
    if len(objs) == 1:
        return f"[{objs[0]}]"
    return "|".join(mors)


def ladder_label(src: str, dst: str, verts) -> str:
    return f"{src}=>{dst}#" + ",".join(verts)


class XiCategory(FiniteCategory):
    """A shape category with chain/ladder bookkeeping attached.

    Attributes
    ----------
    base: the underlying category C
    xi:   the direction word
    chain_objs / chain_mors: chain data per object label
    ladder: (src_label, dst_label, verticals) per morphism label
    """

    def __init__(self, base, xi, objects, morphisms, identity, compose,
                 chain_objs, chain_mors, ladder, name=""):
        super().__init__(objects, morphisms, identity, compose, name=name)
        self.base = base
        self.xi = xi
        self.chain_objs = chain_objs
        self.chain_mors = chain_mors
        self.ladder = ladder

    def verticals(self, m: str) -> tuple:
        return self.ladder[m][2]

    def morphism_type(self, m: str):
        """Type of a ladder: j (1-based) if only slot j moves, "all" for
        identities, "mixed" otherwise."""
        verts = self.ladder[m][2]
        src = self.ladder[m][0]
        sobjs = self.chain_objs[src]
        moving = [j for j, v in enumerate(verts)
                  if not self.base.is_identity(v)]
        if not moving:
            return "all"
        if len(moving) == 1:
            return moving[0] + 1
        return "mixed"


def _square_ok(base, dir1, dir2, mA, mB, v1, v2) -> bool:
    """Commutativity of one ladder square, in diagram order."""
    t = base.then
    if dir1 == "d" and dir2 == "d":
        return t(mA, v2) == t(v1, mB)
    if dir1 == "d" and dir2 == "u":
        return t(t(v1, mB), v2) == mA
    if dir1 == "u" and dir2 == "d":
        return t(t(v1, mA), v2) == mB
    return t(v1, mA) == t(mB, v2)


def xi_category(base: FiniteCategory, xi, size_cap: int = DEFAULT_SIZE_CAP) -> XiCategory:
    """Build the ladder category of ``base`` for the direction word ``xi``."""
    xi = parse_xi(xi)
    n = len(xi)

    # enumerate chains
    chains = []  # (objs tuple, mors tuple)
    if n == 1:
        for o in base.objects:
            chains.append(((o,), ()))
    else:
        def grow(objs, mors):
            if len(objs) == n:
                chains.append((tuple(objs), tuple(mors)))
                if len(chains) > size_cap:
                    raise SizeCapExceeded(
                        f"xi_category: more than {size_cap} chains")
                return
            for m in base.morphisms_from(objs[-1]):
                grow(objs + [base.dst(m)], mors + [m])

        for o in base.objects:
            grow([o], [])

    chain_objs = {}
    chain_mors = {}
    labels = []
    for objs, mors in chains:
        lb = chain_label(objs, mors)
        if lb in chain_objs:
            raise StructureError(f"chain label collision: {lb!r}")
        chain_objs[lb] = objs
        chain_mors[lb] = mors
        labels.append(lb)

    # enumerate ladders
    def ladders_between(la, lb):
        """All vertical tuples forming a ladder from chain la to lb."""
        A_obj, A_mor = chain_objs[la], chain_mors[la]
        B_obj, B_mor = chain_objs[lb], chain_mors[lb]
        results = []

        def options(j):
            if xi[j] == "d":
                return base.hom(A_obj[j], B_obj[j])
            return base.hom(B_obj[j], A_obj[j])

        def extend(j, verts):
            if j == n:
                results.append(tuple(verts))
                return
            for v in options(j):
                if j == 0 or _square_ok(base, xi[j - 1], xi[j],
                                        A_mor[j - 1], B_mor[j - 1],
                                        verts[-1], v):
                    verts.append(v)
                    extend(j + 1, verts)
                    verts.pop()

        extend(0, [])
        return results

    morphisms = []
    ladder = {}
    identity = {}
    mor_count = 0
    for la in labels:
        for lb in labels:
            for verts in ladders_between(la, lb):
                ml = ladder_label(la, lb, verts)
                morphisms.append((ml, la, lb))
                ladder[ml] = (la, lb, verts)
                mor_count += 1
                if mor_count > 20 * size_cap:
                    raise SizeCapExceeded("xi_category: morphism explosion")
    for lb in labels:
        objs = chain_objs[lb]
        verts = tuple(base.id_of(o) for o in objs)
        identity[lb] = ladder_label(lb, lb, verts)

    compose = {}
    by_src = {}
    for ml, la, lb in morphisms:
        by_src.setdefault(la, []).append(ml)
    for ml, la, lb in morphisms:
        for ml2 in by_src.get(lb, ()):
            la2, lb2, verts2 = ladder[ml2]
            verts1 = ladder[ml][2]
            comp = tuple(
                base.then(v1, v2) if d == "d" else base.then(v2, v1)
                for d, v1, v2 in zip(xi, verts1, verts2)
            )
            compose[(ml, ml2)] = ladder_label(la, lb2, comp)

    return XiCategory(base, xi, labels, morphisms, identity, compose,
                      chain_objs, chain_mors, ladder,
                      name=f"^{''.join(xi)}{base.name}")


def twisted_arrow(base: FiniteCategory, size_cap: int = DEFAULT_SIZE_CAP) -> XiCategory:
    """Twisted arrow shape: objects are morphisms of ``base``; morphisms
    out of ``a`` are factorizations ``a = v . b . u``."""
    return xi_category(base, "du", size_cap)


def comma_over(base: FiniteCategory, size_cap: int = DEFAULT_SIZE_CAP) -> XiCategory:
    return xi_category(base, "dd", size_cap)


def interior_shape(base: FiniteCategory, size_cap: int = DEFAULT_SIZE_CAP) -> XiCategory:
    return xi_category(base, "ddu", size_cap)


def coherent_shape(base: FiniteCategory, size_cap: int = DEFAULT_SIZE_CAP) -> XiCategory:
    return xi_category(base, "duud", size_cap)


def morphism_type(shape: XiCategory, m: str):
    return shape.morphism_type(m)


def restriction_functor(shape: XiCategory, positions,
                        size_cap: int = DEFAULT_SIZE_CAP) -> Functor:
    """Projection of a ladder category onto an ordered subset of slots.

    ``positions`` are 1-based slot indices.  Chains are projected by
    composing the base morphisms between consecutive selected slots.
    """
    pos = [p - 1 for p in positions]
    if not pos or pos != sorted(pos) or len(set(pos)) != len(pos):
        raise StructureError("positions must be a nonempty increasing set")
    n = len(shape.xi)
    if pos[0] < 0 or pos[-1] >= n:
        raise StructureError("positions out of range")
    sub_xi = tuple(shape.xi[p] for p in pos)
    target = xi_category(shape.base, sub_xi, size_cap)
    base = shape.base

    def project_chain(lb):
        objs = shape.chain_objs[lb]
        mors = shape.chain_mors[lb]
        new_objs = tuple(objs[p] for p in pos)
        new_mors = []
        for a, b in zip(pos, pos[1:]):
            m = base.id_of(objs[a])
            for k in range(a, b):
                m = base.then(m, mors[k])
            new_mors.append(m)
        return chain_label(new_objs, tuple(new_mors))

    obj_map = {lb: project_chain(lb) for lb in shape.objects}
    mor_map = {}
    for ml in shape.morphisms:
        la, lb, verts = shape.ladder[ml]
        new_verts = tuple(verts[p] for p in pos)
        mor_map[ml] = ladder_label(obj_map[la], obj_map[lb], new_verts)
    f = Functor(shape, target, obj_map, mor_map,
                name=f"pi_{','.join(str(p + 1) for p in pos)}")
    rep = f.validate()
    if not rep.ok:
        raise StructureError(f"restriction functor invalid: {rep.violations[:3]}")
    return f


def diagonal_functor(base: FiniteCategory, shape: XiCategory) -> Functor:
    """The constant-chain embedding C -> ^Xi C (all-down words only)."""
    if any(d != "d" for d in shape.xi):
        raise StructureError("diagonal functor needs an all-down word")
    n = len(shape.xi)
    obj_map = {}
    mor_map = {}
    for o in base.objects:
        obj_map[o] = chain_label((o,) * n, (base.id_of(o),) * (n - 1))
    for m in base.morphisms:
        mor_map[m] = ladder_label(obj_map[base.src(m)],
                                  obj_map[base.dst(m)], (m,) * n)
    return Functor(base, shape, obj_map, mor_map, name="diag")


def tww_to_dd_tw(base: FiniteCategory, size_cap: int = DEFAULT_SIZE_CAP):
    """The square-assignment functor from the 3-chain interior shape of C
    into the comma shape of the twisted-arrow category.

    A chain i -> j -> k is sent to the twisted-arrow morphism
    (i -> k) => (j -> k) given by (i -> j, id_k): the commuting square
    with right leg the identity of k.  Returns (functor, tww, ddtw).
    """
    tww = interior_shape(base, size_cap)
    tw = twisted_arrow(base, size_cap)
    ddtw = xi_category(tw, "dd", size_cap)

    def tw_obj(m):
        # chain of length 2 in base = object of tw labelled by its morphism
        return chain_label((base.src(m), base.dst(m)), (m,))

    def tw_mor(src_m, dst_m, u, v):
        return ladder_label(tw_obj(src_m), tw_obj(dst_m), (u, v))

    obj_map = {}
    for lb in tww.objects:
        (i, j, k) = tww.chain_objs[lb]
        (b, c) = tww.chain_mors[lb]
        m = base.then(b, c)
        square = tw_mor(m, c, b, base.id_of(k))
        obj_map[lb] = chain_label((tw_obj(m), tw_obj(c)), (square,))

    mor_map = {}
    for ml in tww.morphisms:
        la, lb2, (v1, v2, v3) = tww.ladder[ml]
        (bi, ci) = tww.chain_mors[la]
        (bj, cj) = tww.chain_mors[lb2]
        mi = base.then(bi, ci)
        mj = base.then(bj, cj)
        phi1 = tw_mor(mi, mj, v1, v3)
        phi2 = tw_mor(ci, cj, v2, v3)
        mor_map[ml] = ladder_label(obj_map[la], obj_map[lb2], (phi1, phi2))

    f = Functor(tww, ddtw, obj_map, mor_map, name="tww->dd(tw)")
    rep = f.validate()
    if not rep.ok:
        raise StructureError(f"tww_to_dd_tw invalid: {rep.violations[:3]}")
    return f, tww, ddtw
