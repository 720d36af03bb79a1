"""Trees: finite connected multicategories freely generated by
multimorphisms in which every object occurs at most once as a source
and at most once as a target.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..fincat.core import StructureError


@dataclass(frozen=True)
class Tree:
    """A tree presentation: objects plus generating multimorphisms.

    ``generators`` is a tuple of (sources, target) pairs; 0-ary
    generators (empty sources) are allowed.  The root is the unique
    object that is not a source of any generator.
    """

    objects: tuple
    generators: tuple

    def __post_init__(self):
        srcs = [s for gs, _ in self.generators for s in gs]
        tgts = [t for _, t in self.generators]
        if len(set(srcs)) != len(srcs):
            raise StructureError("an object occurs twice as a source")
        if len(set(tgts)) != len(tgts):
            raise StructureError("an object occurs twice as a target")
        for gs, t in self.generators:
            for x in (*gs, t):
                if x not in self.objects:
                    raise StructureError(f"generator uses unknown object {x!r}")
        roots = [o for o in self.objects if o not in set(srcs)]
        if len(roots) != 1:
            raise StructureError(f"tree must have exactly one root, got {roots}")
        # connected and acyclic: every non-root reaches the root via parents
        parent = {}
        for gs, t in self.generators:
            for s in gs:
                parent[s] = t
        for o in self.objects:
            seen = set()
            x = o
            while x != roots[0]:
                if x in seen or x not in parent:
                    raise StructureError("underlying graph is not a rooted tree")
                seen.add(x)
                x = parent[x]

    @property
    def root(self) -> str:
        srcs = {s for gs, _ in self.generators for s in gs}
        return next(o for o in self.objects if o not in srcs)

    @property
    def source_objects(self) -> tuple:
        """Objects that are not targets of generators (the tree inputs)."""
        tgts = {t for _, t in self.generators}
        return tuple(o for o in self.objects if o not in tgts)

    def distance_to_root(self) -> dict:
        parent = {}
        for gs, t in self.generators:
            for s in gs:
                parent[s] = t
        d = {}
        for o in self.objects:
            n, x = 0, o
            while x in parent:
                n += 1
                x = parent[x]
            d[o] = n
        return d

    def generator_into(self, obj):
        for gs, t in self.generators:
            if t == obj:
                return (gs, t)
        return None

    def preorder(self) -> list:
        """Objects root-first, children in generator-source order."""
        out = []

        def walk(o):
            out.append(o)
            gen = self.generator_into(o)
            if gen:
                for s in gen[0]:
                    walk(s)

        walk(self.root)
        return out


def delta_tree(n: int, prefix: str = "") -> Tree:
    """The basic tree with one n-ary generator: sources 1..n, target n+1."""
    if n < 0:
        raise StructureError("arity must be non-negative")
    objs = tuple(f"{prefix}{i}" for i in range(1, n + 2))
    return Tree(objs, ((objs[:n], objs[n]),))


def concat_trees(t2: Tree, i: str, t1: Tree) -> Tree:
    """Graft ``t1`` into the source object ``i`` of ``t2``.

    Objects of ``t1`` are prefixed to keep ids disjoint; its root is
    identified with ``i``.
    """
    if i not in t2.source_objects:
        raise StructureError(f"{i!r} is not a source object of the outer tree")
    ren = {}
    for o in t1.objects:
        ren[o] = i if o == t1.root else f"{i}.{o}"
    objs = t2.objects + tuple(ren[o] for o in t1.objects if o != t1.root)
    gens = t2.generators + tuple(
        (tuple(ren[s] for s in gs), ren[t]) for gs, t in t1.generators)
    return Tree(objs, gens)


def all_trees(max_objects: int):
    """Enumerate all trees with at most ``max_objects`` objects.

    Shapes are ordered rooted trees; each childless node additionally
    may or may not carry a 0-ary generator.  Object ids are assigned by
    preorder traversal.
    """
    shapes = _ordered_shapes(max_objects)
    out = []
    for shape in shapes:
        n_leaves = _count_leaves(shape)
        for mask in range(1 << n_leaves):
            out.append(_shape_to_tree(shape, mask))
    return out


def _ordered_shapes(max_nodes: int):
    # a shape is a nested tuple of child shapes
    from itertools import product as iproduct

    by_size = {1: [()]}
    for n in range(2, max_nodes + 1):
        acc = []
        for parts in _compositions(n - 1):
            child_lists = [by_size[p] for p in parts]
            for combo in iproduct(*child_lists):
                acc.append(tuple(combo))
        by_size[n] = acc
    result = []
    for n in range(1, max_nodes + 1):
        result.extend(by_size[n])
    return result


def _compositions(n):
    """Ordered compositions of n into positive parts."""
    if n == 0:
        return [()]
    out = []
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            out.append((first,) + rest)
    return out


def _count_leaves(shape) -> int:
    if not shape:
        return 1
    return sum(_count_leaves(c) for c in shape)


def _shape_to_tree(shape, leaf_mask: int) -> Tree:
    objs = []
    gens = []
    counter = [0]
    leaf_no = [0]

    def walk(sh):
        name = f"v{counter[0]}"
        counter[0] += 1
        objs.append(name)
        if sh:
            kids = [walk(c) for c in sh]
            gens.append((tuple(kids), name))
        else:
            if leaf_mask >> leaf_no[0] & 1:
                gens.append(((), name))
            leaf_no[0] += 1
        return name

    walk(shape)
    return Tree(tuple(objs), tuple(gens))
