"""Ladder multidiagrams over a multicategory for direction words ending
downward, their generators and relations, the degree function on the
four-slot shape over a tree, and unaryization.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from ..fincat.core import FiniteCategory, StructureError
from ..fincat.xi import parse_xi
from .multicat import (
    FiniteMulticategory,
    ListMorphism,
    MultiMor,
    compose_lists,
    concat_list_morphisms,
    is_list_identity,
    list_identity,
    list_morphisms,
)
from .trees import Tree

DEFAULT_OBJECT_CAP = 20_000


@dataclass(frozen=True)
class ChainObject:
    """An object of a ladder multidiagram: l lists connected by list
    morphisms, the last list a singleton."""

    lists: tuple       # tuple of object tuples
    steps: tuple       # tuple of ListMorphism, len = l-1

    def label(self) -> str:
        cached = getattr(self, "_label", None)
        if cached is None:
            def fmt(lst):
                return "[" + ",".join(lst) + "]"
            parts = [fmt(self.lists[0])]
            for k, s in enumerate(self.steps):
                parts.append("(" + "|".join(s.blocks) + ")")
                parts.append(fmt(self.lists[k + 1]))
            cached = "".join(parts)
            object.__setattr__(self, "_label", cached)
        return cached


@dataclass(frozen=True)
class LadderMultiMor:
    """A multimorphism of the ladder multidiagram.

    ``verticals[s]`` is the list morphism at slot s: from the
    concatenated source lists to the target list for a down slot, and
    backwards for an up slot.
    """

    sources: tuple     # ChainObjects
    target: "ChainObject"
    verticals: tuple   # ListMorphisms


class XiMultidiagram:
    """The ladder multidiagram ^Xi M for a word Xi with last letter down.

    Composition is computed lazily by pasting verticals; results are
    located in the enumerated morphism set via their canonical key.
    """

    def __init__(self, M: FiniteMulticategory, xi, objects, mors_by_mid,
                 mor_key, identity, name=""):
        self.M = M
        self.xi = xi
        self.objects = objects            # dict label -> ChainObject
        self.object_order = tuple(objects)
        self.mors = mors_by_mid           # mid -> LadderMultiMor
        self._mor_key = mor_key           # canonical key -> mid
        self._compose_memo = {}
        self.identity = identity          # label -> mid
        self.name = name
        self._by_target = {}
        self._by_boundary = {}
        for mid, m in self.mors.items():
            self._by_target.setdefault(m.target.label(), []).append(mid)
            key = (tuple(x.label() for x in m.sources), m.target.label())
            self._by_boundary.setdefault(key, []).append(mid)

    def into(self, label: str) -> tuple:
        return tuple(self._by_target.get(label, ()))

    def compose_key(self, outer: str, i: int, inner: str):
        """Canonical key of a graft (works even when the composite is
        not in the enumerated morphism set)."""
        mo = self.mors[outer]
        mi = self.mors[inner]
        if mi.target.label() != mo.sources[i].label():
            raise StructureError("ladder graft not composable")
        new_sources, verts = _vertical_graft(self.M, self.xi, mo, i, mi)
        return (tuple(x.label() for x in new_sources),
                mo.target.label(),
                tuple((v.src, v.dst, v.blocks) for v in verts))

    def compose_at(self, outer: str, i: int, inner: str) -> str:
        key = (outer, i, inner)
        if key not in self._compose_memo:
            ck = self.compose_key(outer, i, inner)
            got = self._mor_key.get(ck)
            if got is None:
                raise StructureError(
                    f"graft left the enumerated morphism set ({outer},{i},{inner})")
            self._compose_memo[key] = got
        return self._compose_memo[key]

    def morphism_type(self, mid: str):
        m = self.mors[mid]
        moving = [s for s, v in enumerate(m.verticals)
                  if not is_list_identity(self.M, v)]
        if not moving:
            return "all"
        if len(moving) == 1:
            return moving[0] + 1
        return "mixed"

    def is_identity(self, mid: str) -> bool:
        m = self.mors[mid]
        return len(m.sources) == 1 and \
            m.sources[0] == m.target and \
            all(is_list_identity(self.M, v) for v in m.verticals)

    def __repr__(self):
        return (f"<XiMultidiagram {self.name!r}: {len(self.objects)} objects, "
                f"{len(self.mors)} multimorphisms>")


def _enumerate_chain_objects(M: FiniteMulticategory, l: int, cap: int):
    """Chains of l lists ending in a singleton, built back to front."""
    chains = []
    for a in M.objects:
        tails = [((a,),)]
        steps_acc = [()]
        level = [(((a,),), ())]
        for _ in range(l - 1):
            nxt = []
            for lists, steps in level:
                first = lists[0]
                for combo in iproduct(*[M.into(t) for t in first]):
                    srcs = tuple(s for mid in combo
                                 for s in M.mor(mid).sources)
                    phi = ListMorphism(srcs, first, tuple(combo))
                    nxt.append(((srcs,) + lists, (phi,) + steps))
                    if len(nxt) > cap:
                        raise StructureError("chain enumeration exceeds cap")
            level = nxt
        chains.extend(ChainObject(lists, steps) for lists, steps in level)
        if len(chains) > cap:
            raise StructureError("chain enumeration exceeds cap")
    return chains


def _ladder_squares_ok(M, xi, sources, target, verticals) -> bool:
    """Check all ladder squares for a candidate multimorphism."""
    l = len(xi)
    # concatenated source rows
    row = [concat_list_morphisms([x.steps[s] for x in sources])
           for s in range(l - 1)]
    trow = target.steps
    for s in range(l - 1):
        d1, d2 = xi[s], xi[s + 1]
        v1, v2 = verticals[s], verticals[s + 1]
        mA, mB = row[s], trow[s]
        try:
            if d1 == "d" and d2 == "d":
                ok = compose_lists(M, mA, v2) == compose_lists(M, v1, mB)
            elif d1 == "d" and d2 == "u":
                ok = compose_lists(M, compose_lists(M, v1, mB), v2) == mA
            elif d1 == "u" and d2 == "d":
                ok = compose_lists(M, compose_lists(M, v1, mA), v2) == mB
            else:
                ok = compose_lists(M, v1, mA) == compose_lists(M, mB, v2)
        except StructureError:
            return False
        if not ok:
            return False
    return True


def _list_morphisms_from(M: FiniteMulticategory, src: tuple,
                         allowed_prefixes: set, allowed: set):
    """All list morphisms out of ``src`` whose destination belongs to
    ``allowed`` (0-ary blocks make the unrestricted set infinite, so the
    enumeration is pruned by the prefix set of the realizable lists)."""
    out = {}
    by_block = {}
    for mid, m in M.mors.items():
        by_block.setdefault(m.sources, []).append((mid, m.target))

    def grow(pos, blocks, dst):
        if tuple(dst) not in allowed_prefixes:
            return
        if pos == len(src) and tuple(dst) in allowed:
            lm = ListMorphism(src, tuple(dst), tuple(blocks))
            out[(lm.src, lm.dst, lm.blocks)] = lm
        for size in range(0, len(src) - pos + 1):
            block = src[pos:pos + size]
            for mid, t in by_block.get(block, ()):
                blocks.append(mid)
                dst.append(t)
                grow(pos + size, blocks, dst)
                blocks.pop()
                dst.pop()

    grow(0, [], [])
    return list(out.values())


def _unary_moves(M, xi, chains, objects, add):
    """All single-moving-slot unary ladders, built constructively.

    Candidate verticals are pruned against the lists that actually
    occur among the chain objects (per slot, the moving endpoint must
    be realizable or the target chain cannot exist).
    """
    l = len(xi)
    occurring = set()
    for c in chains:
        occurring.update(c.lists)
    prefixes = set()
    for lst in occurring:
        for k in range(len(lst) + 1):
            prefixes.add(lst[:k])
    memo_from = {}
    memo_into = {}
    memo_hom = {}

    def vs_down(lst):
        if lst not in memo_from:
            memo_from[lst] = [v for v in
                              _list_morphisms_from(M, lst, prefixes, occurring)
                              if not is_list_identity(M, v)]
        return memo_from[lst]

    def vs_up(lst):
        if lst not in memo_into:
            acc = []
            for combo in iproduct(*[M.into(t) for t in lst]):
                src = tuple(t for mid in combo for t in M.mor(mid).sources)
                if src not in occurring:
                    continue
                v = ListMorphism(src, lst, tuple(combo))
                if not is_list_identity(M, v):
                    acc.append(v)
            memo_into[lst] = acc
        return memo_into[lst]

    def hom(a, b):
        if (a, b) not in memo_hom:
            memo_hom[(a, b)] = list_morphisms(M, a, b)
        return memo_hom[(a, b)]

    # factor the completion work through local windows: the solved data
    # only involves the lists and steps adjacent to the moving slot
    for s in range(l):
        windows = {}
        for x in chains:
            win = (x.lists[s],
                   x.steps[s - 1] if s - 1 >= 0 else None,
                   x.steps[s] if s <= l - 2 else None,
                   x.lists[s - 1] if s - 1 >= 0 else None,
                   x.lists[s + 1] if s <= l - 2 else None)
            windows.setdefault(win, []).append(x)
        chain_set = {(c.lists, c.steps): c for c in chains}
        for win, members in windows.items():
            x0 = members[0]
            cand_vs = vs_down(win[0]) if xi[s] == "d" else vs_up(win[0])
            for v in cand_vs:
                completions = _complete_unary(M, xi, x0, s, v, hom)
                for y0 in completions:
                    for x in members:
                        lists = list(x.lists)
                        lists[s] = y0.lists[s]
                        steps = list(x.steps)
                        if s - 1 >= 0:
                            steps[s - 1] = y0.steps[s - 1]
                        if s <= l - 2:
                            steps[s] = y0.steps[s]
                        y = chain_set.get((tuple(lists), tuple(steps)))
                        if y is not None:
                            verts = tuple(
                                v if k == s else list_identity(M, x.lists[k])
                                for k in range(l))
                            add((x,), y, verts)


def _complete_unary(M, xi, x: ChainObject, s: int, v: ListMorphism, hom=None):
    """Target chains of a unary ladder moving only slot s by v.

    The step into slot s and the step out of it are determined on one
    side of the square and solved for on the other; both solutions may
    fork.
    """
    if hom is None:
        hom = lambda a, b: list_morphisms(M, a, b)
    l = len(xi)
    new_list = v.dst if xi[s] == "d" else v.src
    lists = list(x.lists)
    lists[s] = new_list

    if s - 1 >= 0:
        if xi[s] == "d":
            prev_cands = [compose_lists(M, x.steps[s - 1], v)]
        else:
            prev_cands = [w for w in hom(x.lists[s - 1], new_list)
                          if compose_lists(M, w, v) == x.steps[s - 1]]
    else:
        prev_cands = [None]
    if s <= l - 2:
        if xi[s] == "d":
            next_cands = [w for w in hom(new_list, x.lists[s + 1])
                          if compose_lists(M, v, w) == x.steps[s]]
        else:
            next_cands = [compose_lists(M, v, x.steps[s])]
    else:
        next_cands = [None]

    results = []
    for pstep in prev_cands:
        for nstep in next_cands:
            st = list(x.steps)
            if pstep is not None:
                st[s - 1] = pstep
            if nstep is not None:
                st[s] = nstep
            results.append(ChainObject(tuple(lists), tuple(st)))
    return results


def _last_slot_moves(M, xi, chains, objects, add):
    """All multimorphisms moving only the last slot (any arity)."""
    l = len(xi)
    for y in chains:
        t = y.lists[-1][0]
        for bottom in M.into(t):
            m = M.mor(bottom)
            if M.is_identity(bottom):
                continue
            q = m.arity
            # split y's developing data over the q source chains
            splits = _split_sources(M, xi, y, m)
            for combo in splits:
                bottom_vert = ListMorphism(
                    tuple(c.lists[-1][0] for c in combo),
                    y.lists[-1], (bottom,))
                verts = tuple(
                    list_identity(M, tuple(x for c in combo
                                           for x in c.lists[s]))
                    for s in range(l - 1)) + (bottom_vert,)
                if _ladder_squares_ok(M, xi, combo, y, verts):
                    srcs = []
                    ok = True
                    for c in combo:
                        lb = c.label()
                        if lb not in objects:
                            ok = False
                            break
                        srcs.append(objects[lb])
                    if ok:
                        add(tuple(srcs), y, verts)


def _split_sources(M, xi, y: ChainObject, m):
    """Candidate source tuples for a last-slot move along ``m``: the
    chains obtained by splitting y's steps over the sources of m."""
    l = len(xi)
    q = m.arity
    # y.step_{l-2} must equal (concat of source last steps) grafted by m;
    # find per-source last-step blocks c_k: into(b_k) with graft matching
    if l < 2:
        return [()] if q == 0 else []
    target_block = y.steps[-1].blocks[0]
    cand_lists = [list(M.into(b)) for b in m.sources]
    results = []
    for c_combo in iproduct(*cand_lists):
        acc = bottom = m.mid
        for i in range(q - 1, -1, -1):
            acc = M.compose_at(acc, i, c_combo[i])
        if acc != target_block:
            continue
        # split the earlier lists/steps along the c_k arities
        okall = True
        combo = []
        # slot l-2 lists per source
        offsets2 = []
        pos = 0
        for ck in c_combo:
            a = M.mor(ck).arity
            offsets2.append((pos, pos + a))
            pos += a
        if pos != len(y.lists[l - 2]):
            continue
        # recursively split earlier steps by block counts
        per_source = []
        for k in range(q):
            lo, hi = offsets2[k]
            lists_k = [y.lists[l - 2][lo:hi], (m.sources[k],)]
            steps_k = [ListMorphism(y.lists[l - 2][lo:hi],
                                    (m.sources[k],), (c_combo[k],))]
            per_source.append((lists_k, steps_k, (lo, hi)))
        # now walk slots l-3 .. 0
        ok = True
        bounds = offsets2
        for s in range(l - 3, -1, -1):
            step = y.steps[s]
            # blocks of step are indexed by entries of y.lists[s+1]
            new_bounds = []
            pos_src = 0
            arities = [M.mor(b).arity for b in step.blocks]
            starts = []
            acc2 = 0
            for a in arities:
                starts.append(acc2)
                acc2 += a
            if acc2 != len(y.lists[s]):
                ok = False
                break
            for k in range(q):
                lo, hi = bounds[k]
                src_lo = starts[lo] if lo < len(starts) else acc2
                src_hi = starts[hi] if hi < len(starts) else acc2
                blocks_k = step.blocks[lo:hi]
                lists_k, steps_k, _ = per_source[k]
                lists_k.insert(0, y.lists[s][src_lo:src_hi])
                steps_k.insert(0, ListMorphism(
                    y.lists[s][src_lo:src_hi], lists_k[1], blocks_k))
                new_bounds.append((src_lo, src_hi))
                per_source[k] = (lists_k, steps_k, (src_lo, src_hi))
            if not ok:
                break
            bounds = new_bounds
        if not ok:
            continue
        combo = tuple(ChainObject(tuple(ls), tuple(st))
                      for ls, st, _ in per_source)
        results.append(combo)
    return results


def xi_multidiagram(M: FiniteMulticategory, xi,
                    cap: int = DEFAULT_OBJECT_CAP,
                    typed_only: bool = False) -> XiMultidiagram:
    """Build the ladder multidiagram for a word ending in down.

    With ``typed_only`` the morphism set is restricted to identities
    and single-moving-slot morphisms (types 1..l); this is what the
    degree checks consume and it avoids materializing mixed composites
    on large shapes.  Only the down-ending case is implemented; an
    up-ending word raises (the opmulticategory variant is consumed
    internally through unaryization only).
    """
    xi = parse_xi(xi)
    if xi[-1] != "d":
        raise StructureError(
            "only direction words ending downward are supported "
            "(the up-ending case would produce an opmulticategory)")
    l = len(xi)
    chains = _enumerate_chain_objects(M, l, cap)
    objects = {c.label(): c for c in chains}

    mors = {}
    mor_key = {}

    def add(sources, target, verticals):
        key = (tuple(x.label() for x in sources), target.label(),
               tuple((v.src, v.dst, v.blocks) for v in verticals))
        if key in mor_key:
            return mor_key[key]
        mid = f"m{len(mors)}"
        mors[mid] = LadderMultiMor(tuple(sources), target, tuple(verticals))
        mor_key[key] = mid
        return mid

    identity = {}
    for lb, c in objects.items():
        verts = tuple(list_identity(M, lst) for lst in c.lists)
        identity[lb] = add((c,), c, verts)

    if typed_only:
        _unary_moves(M, xi, chains, objects, add)
        _last_slot_moves(M, xi, chains, objects, add)
        return XiMultidiagram(M, xi, objects, mors, mor_key, identity,
                              name=f"^{''.join(xi)}{M.name}|typed")

    # full mode: all unary ladders and all q-ary last-slot ladders
    for tgt in chains:
        for src in chains:
            vert_options = []
            for s in range(l):
                a, b = src.lists[s], tgt.lists[s]
                opts = list_morphisms(M, a, b) if xi[s] == "d" \
                    else list_morphisms(M, b, a)
                vert_options.append(opts)
            if any(not o for o in vert_options):
                continue
            for verts in iproduct(*vert_options):
                if _ladder_squares_ok(M, xi, (src,), tgt, verts):
                    add((src,), tgt, verts)

    for tgt in chains:
        last = tgt.lists[-1][0]
        for bottom in M.into(last):
            m = M.mor(bottom)
            q = m.arity
            if q == 1:
                continue
            cand = [[c for c in chains if c.lists[-1] == (s,)]
                    for s in m.sources]
            for combo in iproduct(*cand):
                vert_options = []
                for s in range(l - 1):
                    conc = tuple(x for c in combo for x in c.lists[s])
                    b = tgt.lists[s]
                    opts = list_morphisms(M, conc, b) if xi[s] == "d" \
                        else list_morphisms(M, b, conc)
                    vert_options.append(opts)
                bottom_vert = ListMorphism(
                    tuple(c.lists[-1][0] for c in combo),
                    tgt.lists[-1], (bottom,))
                if any(not o for o in vert_options):
                    continue
                for verts in iproduct(*vert_options):
                    allv = tuple(verts) + (bottom_vert,)
                    if _ladder_squares_ok(M, xi, combo, tgt, allv):
                        add(combo, tgt, allv)

    return XiMultidiagram(M, xi, objects, mors, mor_key, identity,
                          name=f"^{''.join(xi)}{M.name}")


def _vertical_graft(M, xi, outer: LadderMultiMor, i: int,
                    inner: LadderMultiMor):
    """Vertical data of outer composed with inner in slot i."""
    l = len(xi)
    # sizes of the outer sources' lists per slot
    new_sources = outer.sources[:i] + inner.sources + outer.sources[i + 1:]
    verts = []
    for s in range(l):
        # identity on the other outer sources, inner vertical in slot i
        pieces = []
        for k, src in enumerate(outer.sources):
            if k == i:
                pieces.append(inner.verticals[s])
            else:
                pieces.append(list_identity(M, src.lists[s]))
        embed = concat_list_morphisms(pieces)
        if xi[s] == "d":
            verts.append(compose_lists(M, embed, outer.verticals[s]))
        else:
            verts.append(compose_lists(M, outer.verticals[s], embed))
    return new_sources, tuple(verts)


# -- generators, relations, degree ------------------------------------------


def typed_generators(shape: XiMultidiagram) -> dict:
    """Type-wise generators: single-slot moves by exactly one generating
    multimorphism of the base (last slot: the vertical is one
    generating multimorphism)."""
    M = shape.M
    l = len(shape.xi)
    gen_mids = set(M.generators)

    def moving_blocks(v: ListMorphism):
        return [b for b in v.blocks if not M.is_identity(b)]

    gens = {t: [] for t in range(1, l + 1)}
    for mid, m in shape.mors.items():
        t = shape.morphism_type(mid)
        if t == "all" or t == "mixed":
            continue
        v = m.verticals[t - 1]
        mv = moving_blocks(v)
        if t == l:
            if len(v.blocks) == 1 and v.blocks[0] in gen_mids:
                gens[t].append(mid)
        else:
            if len(mv) == 1 and mv[0] in gen_mids:
                gens[t].append(mid)
    return gens


def generators_relations(shape: XiMultidiagram):
    """Type-wise generators, relation squares, and the closure check
    that the generators reproduce every morphism by grafting."""
    gens = typed_generators(shape)

    # closure of the generators reproduces all morphisms (worklist; the
    # caller gates this by shape size)
    reached = {shape.identity[lb] for lb in shape.objects}
    reached |= {g for gs in gens.values() for g in gs}
    by_target = {}
    for mid in reached:
        by_target.setdefault(shape.mors[mid].target.label(), set()).add(mid)
    work = list(reached)
    while work:
        new = []
        for outer in list(reached):
            mo = shape.mors[outer]
            for i, src in enumerate(mo.sources):
                for inner in by_target.get(src.label(), ()):
                    got = shape.compose_at(outer, i, inner)
                    if got not in reached:
                        new.append(got)
        if not new:
            break
        for mid in new:
            if mid not in reached:
                reached.add(mid)
                by_target.setdefault(shape.mors[mid].target.label(), set()).add(mid)
        work = new
    missing = [mid for mid in shape.mors if mid not in reached]

    squares = relation_squares(shape, gens)
    return gens, squares, missing


def relation_squares(shape: XiMultidiagram, gens: dict):
    """Commuting generator squares (horizontal graft = vertical graft),
    recorded with the canonical key of the common composite."""
    flat = [(t, g) for t, gs in gens.items() for g in gs]
    by_target = {}
    for t, g in flat:
        by_target.setdefault(shape.mors[g].target.label(), []).append((t, g))
    composites = {}
    for t, g in flat:
        m = shape.mors[g]
        for i in range(len(m.sources)):
            for t2, g2 in by_target.get(m.sources[i].label(), ()):
                key = shape.compose_key(g, i, g2)
                composites.setdefault(key, []).append((t, g, i, g2))
    out = []
    for key, entries in composites.items():
        for a in range(len(entries)):
            t1, h, i, g2 = entries[a]
            for b in range(len(entries)):
                if a == b:
                    continue
                t2, v, j, g1 = entries[b]
                if h == v or g1 == h or g2 == v:
                    continue
                out.append(((t1, t2), h, g2, v, g1, key))
    return out


def tree_degree(tree: Tree, x: ChainObject) -> int:
    """Distance-weighted degree of a four-slot chain over a tree.

    3 d(L0) - d(L1) - d(L2) - d(L3) with d the summed distance to the
    root.  Monotonicity (decrease along types 1-3, increase along type
    4) holds for trees all of whose generators have at least one
    source; 0-ary generators break it (an empty list weighs nothing, so
    capping a branch far from the root can lower the degree below
    zero).  Use :func:`tree_degree_cost` when 0-ary generators are
    present.
    """
    d = tree.distance_to_root()

    def list_deg(lst):
        return sum(d[a] for a in lst)

    if len(x.lists) != 4:
        raise StructureError("degree is defined on four-slot chains")
    return 3 * list_deg(x.lists[0]) - list_deg(x.lists[1]) \
        - list_deg(x.lists[2]) - list_deg(x.lists[3])


def _generator_cost(M: FiniteMulticategory, gen_arity: dict, mid: str) -> int:
    """Number of generating multimorphisms in a free composite."""
    m = M.mor(mid)
    # in a free tree multicategory the generator count is determined by
    # the boundary: caps + interior edges; compute by developing greedily
    return gen_arity[mid]


def _generator_costs(M: FiniteMulticategory) -> dict:
    """Generator count per multimorphism of a free multicategory,
    computed by saturating graft equations cost(outer o_i inner) =
    cost(outer) + cost(inner)."""
    cost = {}
    for o in M.objects:
        cost[M.id_of(o)] = 0
    for g in M.generators:
        cost[g] = 1
    changed = True
    while changed:
        changed = False
        for (outer, i, inner), whole in M._compose.items():
            if outer in cost and inner in cost:
                c = cost[outer] + cost[inner]
                if whole not in cost:
                    cost[whole] = c
                    changed = True
    missing = [m for m in M.mors if m not in cost]
    if missing:
        raise StructureError(f"generator cost undefined for {missing[:3]}")
    return cost


def tree_degree_cost(shape: XiMultidiagram, costs: dict, x: ChainObject) -> int:
    """Generator-count degree: 3 c(step1) + 2 c(step2) + c(step3).

    Agrees qualitatively with :func:`tree_degree` (same strict
    monotonicity along the four types) and stays correct for trees
    with 0-ary generators.
    """
    M = shape.M
    total = 0
    weights = range(len(x.steps), 0, -1)
    for w, step in zip(weights, x.steps):
        total += w * sum(costs[b] for b in step.blocks)
    return total


def degree_suite(trees, cap: int = DEFAULT_OBJECT_CAP):
    """Check degree properties 1-4 on the four-slot shape of each tree.

    For trees without 0-ary generators the distance degree is used (the
    stated formula); with 0-ary generators the generator-count variant
    is used, since the distance formula provably loses non-negativity
    there.  Properties: non-negative; zero exactly on all-identity
    chains; strict increase along type 4 and strict decrease along
    types 1-3 (for type 4 the source degree is the sum over sources);
    every relation square of generators has a unique maximal and a
    unique minimal corner.
    """
    from ..report import Report
    from .multicat import free_multicategory

    rep = Report("degree")
    for tree in trees:
        M = free_multicategory(tree)
        W = xi_multidiagram(M, "duud", cap, typed_only=True)
        has_nullary = any(len(gs) == 0 for gs, _ in tree.generators)
        if has_nullary:
            costs = _generator_costs(M)
            deg = {lb: tree_degree_cost(W, costs, c)
                   for lb, c in W.objects.items()}
        else:
            deg = {lb: tree_degree(tree, c) for lb, c in W.objects.items()}

        for lb, c in W.objects.items():
            ok = deg[lb] >= 0
            rep.record(ok, None if ok else
                       {"property": "non-negative", "tree": tree.generators,
                        "chain": lb, "degree": deg[lb]})
            allid = all(is_list_identity(M, s) for s in c.steps)
            ok = (deg[lb] == 0) == allid
            rep.record(ok, None if ok else
                       {"property": "zero-iff-identities",
                        "tree": tree.generators, "chain": lb})
        for mid, m in W.mors.items():
            t = W.morphism_type(mid)
            if t not in (1, 2, 3, 4):
                continue
            src_deg = sum(deg[x.label()] for x in m.sources)
            tgt_deg = deg[m.target.label()]
            if t == 4:
                ok = tgt_deg > src_deg
            else:
                ok = tgt_deg < src_deg
            rep.record(ok, None if ok else
                       {"property": "monotone", "type": t,
                        "tree": tree.generators, "morphism": mid,
                        "src": src_deg, "tgt": tgt_deg})
        if len(W.objects) <= 60:
            full = xi_multidiagram(M, "duud", cap)
            gens, squares, missing = generators_relations(full)
            if missing:
                rep.record(False, {"property": "generation",
                                   "tree": tree.generators,
                                   "missing": missing[:3]})
            else:
                rep.record(True)
            squares = relation_squares(W, typed_generators(W))
        else:
            rep.note(f"generation closure skipped for a shape with "
                     f"{len(W.objects)} objects (size gate)")
            squares = relation_squares(W, typed_generators(W))
        for (t1, t2), h, g2, v, g1, composite in squares:
            corners = _square_corner_degrees(W, deg, h, v, composite)
            mx = [k for k, d in corners.items() if d == max(corners.values())]
            mn = [k for k, d in corners.items() if d == min(corners.values())]
            ok = len(mx) == 1 and len(mn) == 1
            rep.record(ok, None if ok else
                       {"property": "square-corners",
                        "tree": tree.generators, "square": (h, g2, v, g1)})
    return rep


def _square_corner_degrees(W, deg, h, v, composite_key):
    """Degrees of the four corners of a generator relation square.

    The square is (g2 then h) = (g1 then v); corners are the common
    target, the two intermediate source tuples, and the composite's
    source tuple (read off the canonical key).
    """
    mh = W.mors[h]
    mv = W.mors[v]
    far = sum(deg[lb] for lb in composite_key[0])
    return {"y": deg[mh.target.label()],
            "via-h": sum(deg[x.label()] for x in mh.sources),
            "via-v": sum(deg[x.label()] for x in mv.sources),
            "w": far}


def unaryize(M: FiniteMulticategory, name: str = "") -> FiniteCategory:
    """Split every multimorphism into its unary legs; 0-ary morphisms
    disappear (they have no legs)."""
    objs = list(M.objects)
    mors = []
    ident = {}
    leg = {}
    for mid, m in M.mors.items():
        for k, s in enumerate(m.sources):
            lb = f"{mid}#{k}"
            mors.append((lb, s, m.target))
            leg[lb] = (mid, k)
    for o in objs:
        ident[o] = f"{M.id_of(o)}#0"
    comp = {}
    by_src = {}
    for lb, s, d in mors:
        by_src.setdefault(s, []).append(lb)
    for lb, s, d in mors:
        mid, k = leg[lb]
        for lb2 in by_src.get(d, ()):
            mid2, k2 = leg[lb2]
            if M.mors[mid2].sources[k2] != d:
                continue
            whole = M.compose_at(mid2, k2, mid)
            comp[(lb, lb2)] = f"{whole}#{k2 + k}"
    return FiniteCategory(objs, mors, ident, comp,
                          name=name or f"{M.name}°")
