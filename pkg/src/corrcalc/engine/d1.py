"""Coherent diagrams indexed by the arrow category: five-object flagged
family diagrams over the interior bases of a compactified span, the
pointwise functor calculus (pull, extend by zero, push), and the
morphism-set check for single correspondences between such diagrams.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from ..fincat.core import StructureError
from ..finset import FinMap, FinObj, compose_maps, identity_map
from ..report import Report
from ..vectfam.family import (
    FamilyMap,
    VectFamily,
    compose_family_maps,
    identity_family_map,
    invert,
    is_invertible,
    vertical_map,
)
from ..vectfam.functors import (
    iota_shriek,
    pull_vertical,
    pullback_u,
    push_vertical,
    pushforward_u,
    support_check,
    tensor,
    tensor_vertical,
)
from .coherent import cartesian_transpose

# the five chains of the four-slot shape over the arrow category, in
# build order: value bases are (S0, A, Abar', S1, S1) for a span
# S0 <-g- A -iota-> Abar' -fbar-> S1
LABELS = ("c0", "x3", "x2", "x1", "c1")


@dataclass(frozen=True)
class D1Base:
    """Interior bases of one compactified correspondence over the arrow
    category: base sets at the five chains and the four generator base
    maps (contravariant: from the target chain's base to the source's).
    """

    bases: dict           # label -> FinObj
    t4: FinMap            # B(x3) -> B(c0)   (the wrong-way leg)
    t3: FinMap            # B(x3) -> B(x2)   (the embedding)
    t2: FinMap            # B(x2) -> B(x1)   (the proper part)
    t1: FinMap            # B(c1) -> B(x1)   (identity-like)

    def validate(self):
        if not self.t3.is_injective:
            raise StructureError("the extension leg must be injective")
        for m, a, b in ((self.t4, "x3", "c0"), (self.t3, "x3", "x2"),
                        (self.t2, "x2", "x1"), (self.t1, "c1", "x1")):
            if m.src != self.bases[a] or m.dst != self.bases[b]:
                raise StructureError("base map endpoints mistyped")


def span_base(S0: FinObj, A: FinObj, S1: FinObj, g: FinMap, iota: FinMap,
              fbar: FinMap) -> D1Base:
    """Interior bases of the compactified span S0 <- A >-> Abar' -> S1."""
    Abar = iota.dst
    bases = {"c0": S0, "x3": A, "x2": Abar, "x1": S1, "c1": S1}
    base = D1Base(bases, g, iota, fbar, identity_map(S1))
    base.validate()
    return base


def trivial_span_base(S0, A, S1, g, f) -> D1Base:
    return span_base(S0, A, S1, g, identity_map(A), f)


@dataclass
class D1Coherent:
    """Families over the five bases with the four structure maps (each a
    vertical map from the pulled source value to the target value)."""

    base: D1Base
    values: dict          # label -> VectFamily
    maps: dict            # "t4"|"t3"|"t2"|"t1" -> FamilyMap

    _SPEC = (("t4", "c0", "x3"), ("t3", "x2", "x3"),
             ("t2", "x1", "x2"), ("t1", "x1", "c1"))

    def flag_report(self) -> Report:
        rep = Report("d1-flags")
        b = self.base
        ok = is_invertible(self.maps["t4"])
        rep.record(ok, None if ok else {"flag": "4-cocart"})
        ok = is_invertible(self.maps["t3"]) and \
            support_check(self.values["x2"], b.t3)
        rep.record(ok, None if ok else {"flag": "3-strong-cocart"})
        tr = cartesian_transpose(self.maps["t2"], b.t2, self.values["x1"])
        ok = is_invertible(tr)
        rep.record(ok, None if ok else {"flag": "2-cart"})
        return rep

    def structure_source(self, key: str) -> VectFamily:
        b = self.base
        u = {"t4": b.t4, "t3": b.t3, "t2": b.t2, "t1": b.t1}[key]
        src_label = {"t4": "c0", "t3": "x2", "t2": "x1", "t1": "x1"}[key]
        return pullback_u(u, self.values[src_label])


def _base_map(base: D1Base, key: str) -> FinMap:
    return {"t4": base.t4, "t3": base.t3, "t2": base.t2, "t1": base.t1}[key]


_SRC_TGT = {"t4": ("c0", "x3"), "t3": ("x2", "x3"),
            "t2": ("x1", "x2"), "t1": ("x1", "c1")}


def canonical_d1(base: D1Base, E0: VectFamily, E1: VectFamily,
                 phi: FamilyMap | None = None) -> D1Coherent:
    """The canonical coherent diagram from endpoint data: pull along the
    wrong-way leg, extend by zero, push along the proper part; the free
    map to the far corner defaults to zero."""
    field = E0.field
    vals = {"c0": E0, "c1": E1}
    vals["x3"] = pullback_u(base.t4, E0)
    vals["x2"] = iota_shriek(base.t3, vals["x3"])
    vals["x1"] = pushforward_u(base.t2, vals["x2"])
    maps = {}
    maps["t4"] = identity_family_map(vals["x3"])
    # extension-by-zero counit on the image
    src3 = pullback_u(base.t3, vals["x2"])
    maps["t3"] = vertical_map(src3, vals["x3"],
                              tuple(field.eye(d) for d in vals["x3"].dims))
    # Cartesian counit
    u = base.t2
    tgt = vals["x2"]
    blocks = []
    for s in range(len(u.src)):
        fib = [x for x, j in enumerate(u.idx) if j == u.idx[s]]
        total = sum(tgt.dims[x] for x in fib)
        m = field.zeros(tgt.dims[s], total)
        off = 0
        for x in fib:
            if x == s:
                m[:, off:off + tgt.dims[s]] = field.eye(tgt.dims[s])
            off += tgt.dims[x]
        blocks.append(m)
    maps["t2"] = vertical_map(pullback_u(u, vals["x1"]), tgt, tuple(blocks))
    if phi is None:
        src1 = pullback_u(base.t1, vals["x1"])
        phi = vertical_map(src1, E1,
                           tuple(field.zeros(E1.dims[i], src1.dims[i])
                                 for i in range(len(E1.dims))))
    maps["t1"] = phi
    out = D1Coherent(base, vals, maps)
    rep = out.flag_report()
    if not rep.ok:
        raise StructureError(f"canonical build failed flags: {rep.failures}")
    return out


def naturality_holds(E: D1Coherent, F: D1Coherent, comps: dict) -> bool:
    """Commutation of a component family with all four structure maps
    (E and F over the same base system)."""
    for key, (src, tgt) in _SRC_TGT.items():
        u = _base_map(E.base, key)
        lhs = compose_family_maps(pull_vertical(u, comps[src]), F.maps[key])
        rhs = compose_family_maps(E.maps[key], comps[tgt])
        if lhs != rhs:
            return False
    return True


def transport_components(E: D1Coherent, F: D1Coherent, phi0: FamilyMap,
                         phi1: FamilyMap):
    """Extend endpoint components to all five objects using the flags;
    returns the full family or None if the extension breaks down."""
    b = E.base
    comps = {"c0": phi0, "c1": phi1}
    # x3: conjugate through the invertible wrong-way structure maps
    comps["x3"] = compose_family_maps(
        compose_family_maps(invert(E.maps["t4"]),
                            pull_vertical(b.t4, phi0)), F.maps["t4"])
    # x2: recover from the pulled component (supported off-image)
    pulled = compose_family_maps(
        compose_family_maps(E.maps["t3"], comps["x3"]),
        invert(F.maps["t3"]))
    field = phi0.field
    Ex2, Fx2 = E.values["x2"], F.values["x2"]
    blocks = []
    for bpos in range(len(Ex2.base)):
        hit = [s for s, j in enumerate(b.t3.idx) if j == bpos]
        if hit:
            blocks.append(pulled.blocks[hit[0]])
        else:
            if Ex2.dims[bpos] or Fx2.dims[bpos]:
                return None
            blocks.append(field.zeros(Fx2.dims[bpos], Ex2.dims[bpos]))
    comps["x2"] = vertical_map(Ex2, Fx2, tuple(blocks))
    # x1: conjugate through the Cartesian transposes
    trE = cartesian_transpose(E.maps["t2"], b.t2, E.values["x1"])
    trF = cartesian_transpose(F.maps["t2"], b.t2, F.values["x1"])
    comps["x1"] = compose_family_maps(
        compose_family_maps(trE, push_vertical(b.t2, comps["x2"])),
        invert(trF))
    return comps


def hom_d1(E: D1Coherent, F: D1Coherent):
    """All morphisms of coherent diagrams E -> F, enumerated through the
    endpoint components and verified against every structure map."""
    from .homsets import _enumerate_vertical_maps
    out = []
    for phi0 in _enumerate_vertical_maps(E.values["c0"], F.values["c0"]):
        for phi1 in _enumerate_vertical_maps(E.values["c1"], F.values["c1"]):
            comps = transport_components(E, F, phi0, phi1)
            if comps is None:
                continue
            if naturality_holds(E, F, comps):
                out.append(comps)
    return out


# -- pointwise functors between base systems ---------------------------------


@dataclass(frozen=True)
class D1BaseMorphism:
    """A family of base maps between two base systems commuting with the
    structure maps (contravariant, matching the value-map convention)."""

    src: D1Base           # the system being mapped INTO (components' dst)
    dst: D1Base
    comps: dict           # label -> FinMap: dst.bases[l] -> src.bases[l]

    def validate(self):
        for lb in LABELS:
            c = self.comps[lb]
            if c.src != self.dst.bases[lb] or c.dst != self.src.bases[lb]:
                raise StructureError(f"component at {lb!r} mistyped")
        for key, (a, b) in _SRC_TGT.items():
            lhs = compose_maps(_base_map(self.dst, key), self.comps[a])
            rhs = compose_maps(self.comps[b], _base_map(self.src, key))
            if lhs != rhs:
                raise StructureError(f"base squares at {key!r} do not commute")


def pull_coherent(m: D1BaseMorphism, E: D1Coherent) -> D1Coherent:
    """Pull a coherent diagram back along a base morphism (values and
    structure maps reindex)."""
    vals = {lb: pullback_u(m.comps[lb], E.values[lb]) for lb in LABELS}
    maps = {}
    for key, (a, b) in _SRC_TGT.items():
        u_new = _base_map(m.dst, key)
        fm = E.maps[key]
        blocks = tuple(fm.blocks[m.comps[b].idx[p]]
                       for p in range(len(m.dst.bases[b])))
        src = pullback_u(u_new, vals[a])
        maps[key] = vertical_map(src, vals[b], blocks)
    return D1Coherent(m.dst, vals, maps)


def tensor_coherent(E: D1Coherent, F: D1Coherent) -> D1Coherent:
    if E.base is not F.base and E.base != F.base:
        raise StructureError("tensor needs a common base system")
    vals = {lb: tensor(E.values[lb], F.values[lb]) for lb in LABELS}
    maps = {}
    for key, (a, b) in _SRC_TGT.items():
        u = _base_map(E.base, key)
        fm = tensor_vertical(E.maps[key], F.maps[key])
        src = pullback_u(u, vals[a])
        maps[key] = FamilyMap(src, vals[b], fm.base, fm.blocks)
    return D1Coherent(E.base, vals, maps)


def shriek_coherent(m: D1BaseMorphism, E: D1Coherent) -> D1Coherent:
    """Extend a coherent diagram by zero along an injective base
    morphism (components must all be injective)."""
    for lb in LABELS:
        if not m.comps[lb].is_injective:
            raise StructureError("extension by zero needs injective components")
    vals = {lb: iota_shriek(m.comps[lb], E.values[lb]) for lb in LABELS}
    maps = {}
    field = next(iter(E.values.values())).field
    for key, (a, b) in _SRC_TGT.items():
        u_new = _base_map(m.src, key)
        fm = E.maps[key]
        src = pullback_u(u_new, vals[a])
        blocks = []
        for p in range(len(m.src.bases[b])):
            hit = [q for q, j in enumerate(m.comps[b].idx) if j == p]
            if hit:
                blocks.append(fm.blocks[hit[0]])
            else:
                blocks.append(field.zeros(vals[b].dims[p], src.dims[p]))
        maps[key] = vertical_map(src, vals[b], tuple(blocks))
    return D1Coherent(m.src, vals, maps)


def push_coherent(m: D1BaseMorphism, E: D1Coherent) -> D1Coherent:
    """Push a coherent diagram forward along a base morphism (values
    become fiberwise direct sums; structure maps assemble blockwise)."""
    vals = {lb: pushforward_u(m.comps[lb], E.values[lb]) for lb in LABELS}
    maps = {}
    field = next(iter(E.values.values())).field
    for key, (a, b) in _SRC_TGT.items():
        u_new = _base_map(m.src, key)
        u_old = _base_map(m.dst, key)
        fm = E.maps[key]
        src = pullback_u(u_new, vals[a])
        blocks = []
        for p in range(len(m.src.bases[b])):
            fib_b = [r for r, j in enumerate(m.comps[b].idx) if j == p]
            fib_a = [q for q, j in enumerate(m.comps[a].idx)
                     if j == u_new.idx[p]]
            rows = sum(E.values[b].dims[r] for r in fib_b)
            cols = sum(E.values[a].dims[q] for q in fib_a)
            mat = field.zeros(rows, cols)
            roff = 0
            col_off = {}
            off = 0
            for q in fib_a:
                col_off[q] = off
                off += E.values[a].dims[q]
            for r in fib_b:
                q = u_old.idx[r]
                blk = fm.blocks[r]
                if q in col_off:
                    mat[roff:roff + blk.shape[0],
                        col_off[q]:col_off[q] + blk.shape[1]] = blk
                elif blk.shape[0] and blk.shape[1]:
                    raise StructureError("push transport fell off the square")
                roff += blk.shape[0]
            blocks.append(mat)
        maps[key] = vertical_map(src, vals[b], tuple(blocks))
    return D1Coherent(m.src, vals, maps)
