"""Coherent family data over the four-slot shape of a tree of
correspondences (point-indexed), built canonically from degree-zero
values, and the morphism-set enumeration of the compactified
evaluation.

A filler assigns a family to every chain and a map to every typed
generator.  The canonical build walks objects by ascending degree and
defines each value by the first available generator (pull along type 4,
extend by zero along type 3, push along type 2), making those structure
maps literal identities; the remaining generator maps are solved from
the relation squares, and the type-1 maps are the free data.  The
morphism set is the set of type-1 assignments for which the solve
succeeds and every relation square commutes.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from ..comp.classes import CompactificationClasses
from ..correspondences.compactified import (
    CompactifiedTreeMorphism,
    factor_label,
)
from ..fincat.core import StructureError
from ..finset import FinMap, FinObj, FinSetOps, compose_maps, identity_map
from ..report import Report
from ..twcalc.multicat import compose_lists, list_morphisms
from ..twcalc.ximulti import (
    _generator_costs,
    relation_squares,
    tree_degree_cost,
    typed_generators,
    xi_multidiagram,
)
from ..vectfam.family import (
    FamilyMap,
    VectFamily,
    compose_family_maps,
    identity_family_map,
    invert,
    is_invertible,
    unit_family,
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

_OPS = FinSetOps()


class TreeInterior:
    """Interior bases over the four-slot shape of a compactified tree of
    correspondences (point-indexed): the base at a chain is the chosen
    pullback bar(first cut) x_{bar(second cut)} X(second cut), and base
    maps are pullback mediations along witnessed factor morphisms."""

    def __init__(self, ctm: CompactifiedTreeMorphism,
                 classes: CompactificationClasses):
        self.ctm = ctm
        self.classes = classes
        self.M = ctm.M
        self.W = xi_multidiagram(self.M, "duud")
        self.gens = typed_generators(self.W)
        self.squares = relation_squares(self.W, self.gens)
        self._base = {}
        self._proj = {}
        for lb, c in self.W.objects.items():
            m1, m2 = self._cut_pair(c)
            P, pb, px = _OPS.pullback(
                self.ctm.ext.bar.mor[self._factor(m1, m2)],
                self.ctm.ext.iota[m2])
            self._base[lb] = P
            self._proj[lb] = (pb, px, m1, m2)
        self._umaps = {}

    def _cut_pair(self, c):
        s2, s3 = c.steps[1], c.steps[2]
        m2 = s3.blocks[0]
        m1 = compose_lists(self.M, s2, s3).blocks[0]
        return m1, m2

    def _factor(self, a: str, b: str) -> str:
        """A witnessed factor morphism a -> b (the first in label order)."""
        if a == b:
            return self.ctm.factor_cat.id_of(a)
        A, B = self.M.mor(a), self.M.mor(b)
        cands = []
        for vl in self.M.into(A.target):
            v = self.M.mor(vl)
            for pos, s in enumerate(v.sources):
                if s != B.target:
                    continue
                replaced = (v.sources[:pos] + tuple(B.sources)
                            + v.sources[pos + 1:])
                for u in list_morphisms(self.M, A.sources, replaced):
                    lb = factor_label(a, b, vl, pos, u)
                    if lb in self.ctm.witnesses:
                        cands.append(lb)
        if not cands:
            raise StructureError(f"no factor {a!r} -> {b!r}")
        return sorted(cands)[0]

    def base_at(self, lb: str) -> FinObj:
        return self._base[lb]

    def base_maps(self, mid: str) -> list:
        """For a generator x1..xq -> y: the maps B(y) -> B(x_k)."""
        if mid in self._umaps:
            return self._umaps[mid]
        m = self.W.mors[mid]
        y = m.target.label()
        pb_y, px_y, m1y, m2y = self._proj[y]
        out = []
        for xk in m.sources:
            xl = xk.label()
            pb_x, px_x, m1x, m2x = self._proj[xl]
            bar_map = self.ctm.ext.bar.mor[self._factor(m1y, m1x)] \
                if m1y != m1x else identity_map(self.ctm.ext.bar.obj[m1y])
            x_map = self.ctm.total.mor[self._factor(m2y, m2x)] \
                if m2y != m2x else identity_map(self.ctm.total.obj[m2y])
            P, p1, p2 = _OPS.pullback(
                self.ctm.ext.bar.mor[self._factor(m1x, m2x)],
                self.ctm.ext.iota[m2x])
            u = _OPS.mediate_pullback(P, p1, p2,
                                      compose_maps(pb_y, bar_map),
                                      compose_maps(px_y, x_map))
            out.append(u)
        self._umaps[mid] = out
        return out

    def degree0_label(self, obj: str) -> str:
        idm = self.M.id_of(obj)
        for lb, c in self.W.objects.items():
            if c.lists == ((obj,),) * 4 and \
               all(s.blocks == (idm,) for s in c.steps):
                return lb
        raise StructureError(f"no degree-zero chain for {obj!r}")

    def degree_order(self):
        costs = _generator_costs(self.M)
        deg = {lb: tree_degree_cost(self.W, costs, c)
               for lb, c in self.W.objects.items()}
        return sorted(self.W.objects, key=lambda lb: (deg[lb], lb)), deg


@dataclass
class Filler:
    """A candidate element of the morphism set: canonical values plus a
    full generator-map assignment."""

    interior: TreeInterior
    values: dict
    maps: dict

    def source_of(self, mid: str) -> VectFamily:
        """The tensored pulled sources of a generator (the domain of its
        value map)."""
        m = self.interior.W.mors[mid]
        u = self.interior.base_maps(mid)
        out = None
        for k, x in enumerate(m.sources):
            part = pullback_u(u[k], self.values[x.label()])
            out = part if out is None else tensor(out, part)
        if out is None:
            field = _field_of(self.values)
            out = unit_family(field, self.interior.base_at(m.target.label()))
        return out

    def map_matrix_space(self, mid: str):
        src = self.source_of(mid)
        tgt = self.values[self.interior.W.mors[mid].target.label()]
        return src, tgt

    def flag_report(self) -> Report:
        rep = Report("coherent-flags")
        W = self.interior.W
        for t, mids in self.interior.gens.items():
            for mid in mids:
                fm = self.maps[mid]
                if t == 4:
                    ok = is_invertible(fm)
                    rep.record(ok, None if ok else {"flag": "4-cocart",
                                                    "mid": mid})
                elif t == 3:
                    u = self.interior.base_maps(mid)[0]
                    m = W.mors[mid]
                    ok = is_invertible(fm) and u.is_injective and \
                        support_check(self.values[m.sources[0].label()], u)
                    rep.record(ok, None if ok else
                               {"flag": "3-strong-cocart", "mid": mid})
                elif t == 2:
                    u = self.interior.base_maps(mid)[0]
                    m = W.mors[mid]
                    Ex = self.values[m.sources[0].label()]
                    tr = cartesian_transpose(fm, u, Ex)
                    ok = is_invertible(tr)
                    rep.record(ok, None if ok else {"flag": "2-cart",
                                                    "mid": mid})
        return rep

    def graft_map(self, outer: str, i: int, inner: str) -> FamilyMap:
        """Value map of the graft: insert inner's map into slot i of
        outer's and compose (all over the outer target's base)."""
        W = self.interior.W
        mo = W.mors[outer]
        u = self.interior.base_maps(outer)
        pieces = None
        for k, x in enumerate(mo.sources):
            if k == i:
                part = pull_vertical(u[k], self.maps[inner])
            else:
                part = identity_family_map(
                    pullback_u(u[k], self.values[x.label()]))
            pieces = part if pieces is None else tensor_vertical(pieces, part)
        if pieces is None:
            return self.maps[outer]
        fm = self.maps[outer]
        lhs = FamilyMap(pieces.src, pieces.dst, pieces.base, pieces.blocks)
        if lhs.dst.dims != fm.src.dims or lhs.dst.base != fm.src.base:
            raise StructureError("graft domains failed to line up")
        lhs = FamilyMap(lhs.src, fm.src, lhs.base, lhs.blocks)
        return compose_family_maps(lhs, fm)

    def squares_commute(self) -> bool:
        W = self.interior.W
        for (t1, t2), h, g2, v, g1, key in self.interior.squares:
            i = _graft_slot(W, h, g2)
            j = _graft_slot(W, v, g1)
            if self.graft_map(h, i, g2) != self.graft_map(v, j, g1):
                return False
        return True


def _graft_slot(W, outer, inner):
    mo = W.mors[outer]
    mi = W.mors[inner]
    slots = [k for k, s in enumerate(mo.sources)
             if s.label() == mi.target.label()]
    if len(slots) != 1:
        raise StructureError("ambiguous graft slot")
    return slots[0]


def _field_of(values: dict):
    for v in values.values():
        return v.field
    raise StructureError("no values")


def cartesian_transpose(fm: FamilyMap, u: FinMap, Ex: VectFamily) -> FamilyMap:
    """The transpose Ex -> u_* dst of a vertical map u^* Ex -> dst;
    the original is Cartesian over u exactly when this inverts."""
    field = fm.field
    pushed = pushforward_u(u, fm.dst)
    blocks = []
    for t in range(len(u.dst)):
        fib = [s for s, j in enumerate(u.idx) if j == t]
        cols = Ex.dims[t]
        rows = sum(fm.dst.dims[s] for s in fib)
        mat = field.zeros(rows, cols)
        off = 0
        for s in fib:
            d = fm.dst.dims[s]
            mat[off:off + d, :] = fm.blocks[s]
            off += d
        blocks.append(mat)
    return vertical_map(Ex, pushed, tuple(blocks))


def canonical_values(interior: TreeInterior, deg0: dict):
    """Values by ascending degree; each object gets a defining generator
    (pull along type 4, extend by zero along type 3, push along type 2)
    and the defining structure maps are literal.

    Returns (values, defining) where defining[label] = (type, mid) or
    None for degree-zero objects.
    """
    W = interior.W
    order, deg = interior.degree_order()
    values = {}
    defining = {}
    field = _field_of(deg0)
    for o, E in deg0.items():
        lb = interior.degree0_label(o)
        if E.base != interior.base_at(lb):
            raise StructureError(f"degree-zero value at {o!r} lives over "
                                 "the wrong base")
        values[lb] = E
        defining[lb] = None
    for lb in order:
        if lb in values:
            continue
        done = False
        for t in (4, 3, 2):
            for mid in interior.gens[t]:
                m = W.mors[mid]
                if t == 4 and m.target.label() == lb and \
                   all(x.label() in values for x in m.sources):
                    u = interior.base_maps(mid)
                    out = None
                    for k, x in enumerate(m.sources):
                        part = pullback_u(u[k], values[x.label()])
                        out = part if out is None else tensor(out, part)
                    values[lb] = out if out is not None else \
                        unit_family(field, interior.base_at(lb))
                    defining[lb] = (4, mid)
                    done = True
                elif t in (2, 3) and m.sources and \
                        m.sources[0].label() == lb and \
                        m.target.label() in values:
                    u = interior.base_maps(mid)[0]
                    tgt = values[m.target.label()]
                    if t == 3:
                        values[lb] = iota_shriek(u, tgt)
                    else:
                        values[lb] = pushforward_u(u, tgt)
                    defining[lb] = (t, mid)
                    done = True
                if done:
                    break
            if done:
                break
        if not done:
            raise StructureError(f"no defining generator reaches {lb!r}")
    return values, defining


def canonical_defining_maps(interior: TreeInterior, values, defining):
    """The literal structure maps along the defining generators."""
    W = interior.W
    maps = {}
    field = _field_of(values)
    for lb, d in defining.items():
        if d is None:
            continue
        t, mid = d
        m = W.mors[mid]
        if t == 4:
            src = values[lb]
            maps[mid] = identity_family_map(src)
        elif t == 3:
            u = interior.base_maps(mid)[0]
            tgt = values[m.target.label()]
            src = pullback_u(u, values[lb])
            # iota^* iota_! tgt -> tgt: identity blocks (singleton fibers)
            maps[mid] = vertical_map(src, tgt,
                                     tuple(field.eye(d2) for d2 in tgt.dims))
        else:
            u = interior.base_maps(mid)[0]
            tgt = values[m.target.label()]
            src = pullback_u(u, values[lb])
            # the canonical Cartesian counit u^* u_* tgt -> tgt
            blocks = []
            for s in range(len(u.src)):
                fib = [x for x, j in enumerate(u.idx) if j == u.idx[s]]
                total = sum(tgt.dims[x] for x in fib)
                mtr = field.zeros(tgt.dims[s], total)
                off = 0
                for x in fib:
                    if x == s:
                        mtr[:, off:off + tgt.dims[s]] = field.eye(tgt.dims[s])
                    off += tgt.dims[x]
                blocks.append(mtr)
            maps[mid] = vertical_map(src, tgt, tuple(blocks))
    return maps


def solve_remaining_maps(interior: TreeInterior, values, maps: dict,
                         free_assignment: dict):
    """Complete a partial generator-map assignment using the relation
    squares: any square with exactly one unknown composite side solves
    that unknown when the known partner is invertible-against it.

    Returns the completed dict or None when a square is inconsistent.
    """
    W = interior.W
    todo = [mid for t, ms in interior.gens.items() for mid in ms
            if mid not in maps and mid not in free_assignment]
    full = dict(maps)
    full.update(free_assignment)
    filler = Filler(interior, values, full)
    progress = True
    while todo and progress:
        progress = False
        for mid in list(todo):
            solved = _try_solve(interior, filler, mid)
            if solved is not None:
                full[mid] = solved
                todo.remove(mid)
                progress = True
    if todo:
        raise StructureError(f"unsolved generator maps: {todo[:3]}")
    return full


def _try_solve(interior: TreeInterior, filler: Filler, mid: str):
    """Solve one unknown generator map from a relation square in which
    every other map is known."""
    W = interior.W
    for (t1, t2), h, g2, v, g1, key in interior.squares:
        known = filler.maps
        if mid == h and g2 in known and v in known and g1 in known:
            j = _graft_slot(W, v, g1)
            rhs = filler.graft_map(v, j, g1)
            i = _graft_slot(W, h, g2)
            inner = _insertion(filler, h, i, g2)
            if inner is None:
                continue
            sol = _solve_left(inner, rhs, filler, h)
            if sol is not None:
                return sol
        if mid == g2 and h in known and v in known and g1 in known:
            j = _graft_slot(W, v, g1)
            rhs = filler.graft_map(v, j, g1)
            i = _graft_slot(W, h, g2)
            sol = _solve_right(filler, h, i, g2, rhs)
            if sol is not None:
                return sol
    return None


def _insertion(filler: Filler, outer: str, i: int, inner_mid: str):
    """The tensored insertion map of inner's (known) map into outer's
    slot, as a vertical map (the left factor of the graft)."""
    W = filler.interior.W
    mo = W.mors[outer]
    if inner_mid not in filler.maps:
        return None
    u = filler.interior.base_maps(outer)
    pieces = None
    for k, x in enumerate(mo.sources):
        if k == i:
            part = pull_vertical(u[k], filler.maps[inner_mid])
        else:
            part = identity_family_map(
                pullback_u(u[k], filler.values[x.label()]))
        pieces = part if pieces is None else tensor_vertical(pieces, part)
    return pieces


def _solve_left(inner: FamilyMap, rhs: FamilyMap, filler: Filler, h: str):
    """Solve X . inner = rhs for the outer map X when inner inverts."""
    if not is_invertible(inner):
        return None
    src, tgt = filler.map_matrix_space(h)
    cand = compose_family_maps(invert(inner), rhs)
    cand = FamilyMap(src, tgt, cand.base, cand.blocks)
    return cand


def _solve_right(filler: Filler, h: str, i: int, g2: str, rhs: FamilyMap):
    """Solve (insert X at slot i) then h = rhs for X when the outer map
    and the other insertions invert and the slot is the only one."""
    W = filler.interior.W
    mo = W.mors[h]
    if len(mo.sources) != 1 or i != 0:
        return None
    fm_h = filler.maps.get(h)
    if fm_h is None or not is_invertible(fm_h):
        return None
    u = filler.interior.base_maps(h)[0]
    pulled = compose_family_maps(rhs, invert(fm_h))
    # pulled = u-pullback of the unknown map; recover it when u is
    # surjective on the support (here: read off the blocks)
    src, tgt = filler.map_matrix_space(g2)
    field = pulled.field
    blocks = [None] * len(tgt.base)
    for s in range(len(u.src)):
        j = u.idx[s]
        if blocks[j] is None:
            blocks[j] = pulled.blocks[s]
        elif not field.equal(blocks[j], pulled.blocks[s]):
            return None
    for j, b in enumerate(blocks):
        if b is None:
            blocks[j] = field.zeros(tgt.dims[j], src.dims[j])
            if tgt.dims[j] * src.dims[j] != 0:
                return None
    return vertical_map(src, tgt, tuple(blocks))
