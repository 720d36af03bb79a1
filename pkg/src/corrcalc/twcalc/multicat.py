"""Finite multicategories, morphisms between lists, and the ladder
multidiagrams over direction words ending downward.

Multimorphisms are stored extensionally with ids; composition is a
total grafting table.  Morphisms between object lists follow the
cut-point convention: a morphism from a list E to a list F is an
ordered block decomposition of E (empty blocks allowed) together with
one multimorphism per block into the corresponding entry of F.  The
empty-to-empty case has exactly one morphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from ..fincat.core import FiniteCategory, StructureError
from .trees import Tree


@dataclass(frozen=True)
class MultiMor:
    mid: str
    sources: tuple
    target: str

    @property
    def arity(self) -> int:
        return len(self.sources)


class FiniteMulticategory:
    """Objects plus an extensional table of multimorphisms.

    ``compose_at(outer, i, inner)`` grafts ``inner`` into the i-th
    source slot of ``outer``.
    """

    def __init__(self, objects, mors, identity, compose, generators=(),
                 name: str = ""):
        self.objects = tuple(objects)
        self.mors = dict(mors)  # mid -> MultiMor
        self.identity = dict(identity)
        self._compose = dict(compose)  # (outer, i, inner) -> mid
        self.generators = tuple(generators)
        self.name = name
        self._by_target = {}
        for m in self.mors.values():
            self._by_target.setdefault(m.target, []).append(m.mid)

    def mor(self, mid: str) -> MultiMor:
        return self.mors[mid]

    def id_of(self, o: str) -> str:
        return self.identity[o]

    def is_identity(self, mid: str) -> bool:
        m = self.mors[mid]
        return m.sources == (m.target,) and self.identity[m.target] == mid

    def into(self, o: str) -> tuple:
        return tuple(self._by_target.get(o, ()))

    def compose_at(self, outer: str, i: int, inner: str) -> str:
        key = (outer, i, inner)
        if key not in self._compose:
            raise StructureError(f"no graft entry {key!r}")
        return self._compose[key]

    def __repr__(self):
        return (f"<FiniteMulticategory {self.name!r}: {len(self.objects)} objects, "
                f"{len(self.mors)} multimorphisms>")


def free_multicategory(tree: Tree) -> FiniteMulticategory:
    """The free multicategory on a tree, morphisms closed under grafting.

    Multimorphisms of a free tree multicategory are determined by their
    boundary (source list, target), so ids are canonical.
    """
    def mid_of(srcs, tgt):
        return f"({','.join(srcs)};{tgt})"

    mors = {}
    gens = []

    def add(srcs, tgt):
        mid = mid_of(srcs, tgt)
        if mid not in mors:
            mors[mid] = MultiMor(mid, tuple(srcs), tgt)
        return mid

    ident = {}
    for o in tree.objects:
        ident[o] = add((o,), o)
    for gs, t in tree.generators:
        gens.append(add(gs, t))

    # closure under grafting
    changed = True
    while changed:
        changed = False
        current = list(mors.values())
        for outer in current:
            for i, s in enumerate(outer.sources):
                for inner in current:
                    if inner.target != s:
                        continue
                    srcs = outer.sources[:i] + inner.sources + outer.sources[i + 1:]
                    mid = mid_of(srcs, outer.target)
                    if mid not in mors:
                        mors[mid] = MultiMor(mid, srcs, outer.target)
                        changed = True

    compose = {}
    for outer in mors.values():
        for i, s in enumerate(outer.sources):
            for inner in list(mors.values()):
                if inner.target != s:
                    continue
                srcs = outer.sources[:i] + inner.sources + outer.sources[i + 1:]
                compose[(outer.mid, i, inner.mid)] = mid_of(srcs, outer.target)
    return FiniteMulticategory(tree.objects, mors, ident, compose,
                               generators=gens, name=f"free({len(tree.objects)})")


def product_with_category(M: FiniteMulticategory, C: FiniteCategory,
                          name: str = "") -> FiniteMulticategory:
    """The multicategory M x C: multimorphisms are an M-multimorphism
    plus one C-morphism per source slot, all into a common C-target."""
    def ob(o, c):
        return f"{o}@{c}"

    objects = [ob(o, c) for o in M.objects for c in C.objects]
    mors = {}
    ident = {}

    def add(m: MultiMor, phis, cj):
        mid = f"{m.mid}@[{','.join(phis)}]>{cj}"
        srcs = tuple(ob(s, C.src(phis[k])) for k, s in enumerate(m.sources))
        if mid not in mors:
            mors[mid] = MultiMor(mid, srcs, ob(m.target, cj))
        return mid

    for o in M.objects:
        for c in C.objects:
            ident[ob(o, c)] = add(M.mor(M.id_of(o)), (C.id_of(c),), c)
    all_records = []
    for m in M.mors.values():
        for cj in C.objects:
            choices = [[phi for phi in C.morphisms_to(cj)]
                       for _ in range(m.arity)]
            for phis in iproduct(*choices):
                all_records.append((add(m, tuple(phis), cj), m, tuple(phis), cj))

    parse = {mid: (m, phis, cj) for mid, m, phis, cj in all_records}
    compose = {}
    for mid, (m, phis, cj) in parse.items():
        for i in range(len(m.sources)):
            ci = C.src(phis[i])
            for mid2, (m2, phis2, cj2) in parse.items():
                if m2.target != m.sources[i] or cj2 != ci:
                    continue
                new_m = M.compose_at(m.mid, i, m2.mid)
                new_phis = (phis[:i]
                            + tuple(C.then(p, phis[i]) for p in phis2)
                            + phis[i + 1:])
                compose[(mid, i, mid2)] = f"{new_m}@[{','.join(new_phis)}]>{cj}"
    return FiniteMulticategory(objects, mors, ident, compose,
                               name=name or f"{M.name}x{C.name}")


# -- morphisms between lists -------------------------------------------------


@dataclass(frozen=True)
class ListMorphism:
    """A block decomposition of ``src`` with one multimorphism per entry
    of ``dst``; ``blocks[k]`` maps the k-th block onto ``dst[k]``."""

    src: tuple
    dst: tuple
    blocks: tuple  # multimorphism ids, one per dst entry

    def cut_points(self, M: FiniteMulticategory) -> tuple:
        cuts = []
        n = 0
        for mid in self.blocks[:-1] if self.blocks else ():
            n += M.mor(mid).arity
            cuts.append(n)
        return tuple(cuts)


def list_identity(M: FiniteMulticategory, lst: tuple) -> ListMorphism:
    return ListMorphism(tuple(lst), tuple(lst),
                        tuple(M.id_of(o) for o in lst))


def list_morphisms(M: FiniteMulticategory, src: tuple, dst: tuple):
    """All morphisms of lists src -> dst (cut points + block data)."""
    src = tuple(src)
    dst = tuple(dst)
    out = []
    for combo in iproduct(*[M.into(t) for t in dst]):
        srcs = tuple(s for mid in combo for s in M.mor(mid).sources)
        if srcs == src:
            out.append(ListMorphism(src, dst, tuple(combo)))
    return out


def is_list_identity(M: FiniteMulticategory, phi: ListMorphism) -> bool:
    return phi.src == phi.dst and \
        all(M.is_identity(b) for b in phi.blocks)


def compose_lists(M: FiniteMulticategory, phi: ListMorphism,
                  psi: ListMorphism) -> ListMorphism:
    """phi then psi (phi: E -> F, psi: F -> G)."""
    if phi.dst != psi.src:
        raise StructureError("list morphisms not composable")
    blocks = []
    offset = 0
    for k, outer in enumerate(psi.blocks):
        m = M.mor(outer)
        acc = outer
        # graft the phi-blocks feeding this outer morphism, right to left
        inner = phi.blocks[offset:offset + m.arity]
        for i in range(m.arity - 1, -1, -1):
            acc = M.compose_at(acc, i, inner[i])
        offset += m.arity
        blocks.append(acc)
    return ListMorphism(phi.src, psi.dst, tuple(blocks))


def concat_list_morphisms(phis) -> ListMorphism:
    src = tuple(s for p in phis for s in p.src)
    dst = tuple(d for p in phis for d in p.dst)
    blocks = tuple(b for p in phis for b in p.blocks)
    return ListMorphism(src, dst, blocks)
