"""Abstract fiber products: labeled unoriented trees that make span
composition strictly associative.

A record holds a finite tree of base objects with a base object on each
edge and a morphism from each endpoint into the edge object, plus
external legs (source slots and one target).  Concatenation glues two
records along a new edge; reduction collapses edges carrying an identity
on one side; realization takes the honest limit.  Reduced records are
put into a canonical form whose serialization is byte-stable, so the
two bracketings of a triple composite are literally equal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..fincat.core import FiniteCategory, StructureError


@dataclass(frozen=True)
class AfpVertex:
    obj: object           # base object


@dataclass(frozen=True)
class AfpEdge:
    v1: int
    v2: int
    obj: object           # base object on the edge
    m1: object            # morphism X_{v1} -> X_e
    m2: object            # morphism X_{v2} -> X_e


@dataclass(frozen=True)
class AbstractFiberProduct:
    """A labeled unoriented tree with external legs.

    ``sources[i]`` is (vertex index, morphism X_v -> S_i); ``target``
    likewise.  ``reduced`` is set by :func:`reduce_afp`.
    """

    vertices: tuple       # of AfpVertex
    edges: tuple          # of AfpEdge
    sources: tuple        # of (vertex, morphism)
    target: tuple         # (vertex, morphism)
    reduced: bool = False

    def validate(self, ops) -> None:
        n = len(self.vertices)
        seen = set()
        adj = {i: [] for i in range(n)}
        for e in self.edges:
            if not (0 <= e.v1 < n and 0 <= e.v2 < n):
                raise StructureError("edge endpoint out of range")
            adj[e.v1].append(e.v2)
            adj[e.v2].append(e.v1)
            if ops.src(e.m1) != self.vertices[e.v1].obj or \
               ops.dst(e.m1) != e.obj:
                raise StructureError("edge morphism 1 mistyped")
            if ops.src(e.m2) != self.vertices[e.v2].obj or \
               ops.dst(e.m2) != e.obj:
                raise StructureError("edge morphism 2 mistyped")
        if len(self.edges) != n - 1:
            raise StructureError("not a tree (wrong edge count)")
        # connectivity
        stack, seen = [0], {0}
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            raise StructureError("not a tree (disconnected)")
        for v, m in (*self.sources, self.target):
            if ops.src(m) != self.vertices[v].obj:
                raise StructureError("external leg mistyped")


def single_vertex(ops, obj, source_maps, target_map) -> AbstractFiberProduct:
    """The record of a plain multicorrespondence (one vertex)."""
    return AbstractFiberProduct(
        (AfpVertex(obj),), (),
        tuple((0, m) for m in source_maps),
        (0, target_map), reduced=True)


def concat_afp(x: AbstractFiberProduct, slot: int, s_obj,
               y: AbstractFiberProduct) -> AbstractFiberProduct:
    """Glue y's target into the given source slot of x along a new edge
    labeled ``s_obj``; y's source slots take the glued slot's place."""
    if not (0 <= slot < len(x.sources)):
        raise StructureError("slot out of range")
    off = len(x.vertices)
    vertices = x.vertices + y.vertices
    edges = list(x.edges)
    for e in y.edges:
        edges.append(AfpEdge(e.v1 + off, e.v2 + off, e.obj, e.m1, e.m2))
    xv, xm = x.sources[slot]
    yv, ym = y.target
    edges.append(AfpEdge(xv, yv + off, s_obj, xm, ym))
    sources = (x.sources[:slot]
               + tuple((v + off, m) for v, m in y.sources)
               + x.sources[slot + 1:])
    return AbstractFiberProduct(vertices, tuple(edges),
                                sources, x.target, reduced=False)


def reduce_afp(x: AbstractFiberProduct, ops) -> AbstractFiberProduct:
    """Collapse identity-adjacent edges until none remain.

    When an edge has an identity on one side, the other endpoint's
    outgoing data is composed through it and the identity vertex is
    removed.  The result is flagged reduced and canonically ordered.
    """
    vertices = list(x.vertices)
    edges = list(x.edges)
    sources = list(x.sources)
    target = x.target

    changed = True
    while changed:
        changed = False
        for k, e in enumerate(edges):
            drop = None
            if ops.is_identity(e.m2):
                keep_v, drop_v, via = e.v1, e.v2, e.m1
            elif ops.is_identity(e.m1):
                keep_v, drop_v, via = e.v2, e.v1, e.m2
            else:
                continue
            # remove edge k, merge drop_v into keep_v, composing the
            # dropped vertex's morphisms with ``via``
            del edges[k]
            new_edges = []
            for e2 in edges:
                m1, m2, v1, v2 = e2.m1, e2.m2, e2.v1, e2.v2
                if v1 == drop_v:
                    v1, m1 = keep_v, ops.then(via, m1)
                if v2 == drop_v:
                    v2, m2 = keep_v, ops.then(via, m2)
                new_edges.append(AfpEdge(v1, v2, e2.obj, m1, m2))
            edges = new_edges
            sources = [(keep_v, ops.then(via, m)) if v == drop_v else (v, m)
                       for v, m in sources]
            if target[0] == drop_v:
                target = (keep_v, ops.then(via, target[1]))
            # reindex after removing drop_v
            remap = {}
            new_vertices = []
            for i, vx in enumerate(vertices):
                if i == drop_v:
                    continue
                remap[i] = len(new_vertices)
                new_vertices.append(vx)
            vertices = new_vertices
            edges = [AfpEdge(remap[e2.v1], remap[e2.v2], e2.obj, e2.m1, e2.m2)
                     for e2 in edges]
            sources = [(remap[v], m) for v, m in sources]
            target = (remap[target[0]], target[1])
            changed = True
            break
    out = AbstractFiberProduct(tuple(vertices), tuple(edges),
                               tuple(sources), target, reduced=True)
    return canonical_form(out, ops)


def canonical_form(x: AbstractFiberProduct, ops) -> AbstractFiberProduct:
    """Renumber vertices by a deterministic traversal from the target
    vertex, ordering children by their serialized subtrees."""
    n = len(x.vertices)
    adj = {i: [] for i in range(n)}
    for e in x.edges:
        adj[e.v1].append((e.v2, e))
        adj[e.v2].append((e.v1, e))

    src_at = {}
    for idx, (v, m) in enumerate(x.sources):
        src_at.setdefault(v, []).append((idx, m))

    def subtree_key(v, parent):
        kids = []
        for w, e in adj[v]:
            if w == parent:
                continue
            kids.append((subtree_key(w, v), w, e))
        kids.sort(key=lambda t: t[0])
        return (repr(x.vertices[v].obj),
                tuple(sorted((i, repr(m)) for i, m in src_at.get(v, ()))),
                tuple((repr(e.obj), repr(e.m1), repr(e.m2), k)
                      for k, w, e in kids))

    order = []

    def walk(v, parent):
        order.append(v)
        kids = []
        for w, e in adj[v]:
            if w == parent:
                continue
            kids.append((subtree_key(w, v), w))
        kids.sort(key=lambda t: t[0])
        for _, w in kids:
            walk(w, v)

    walk(x.target[0], None)
    remap = {old: new for new, old in enumerate(order)}
    vertices = tuple(x.vertices[old] for old in order)
    edges = tuple(sorted(
        (AfpEdge(remap[e.v1], remap[e.v2], e.obj, e.m1, e.m2)
         for e in x.edges),
        key=lambda e: (min(e.v1, e.v2), max(e.v1, e.v2), repr(e.obj))))
    sources = tuple((remap[v], m) for v, m in x.sources)
    target = (remap[x.target[0]], x.target[1])
    return AbstractFiberProduct(vertices, edges, sources, target,
                                reduced=x.reduced)


def afp_bytes(x: AbstractFiberProduct) -> bytes:
    """Deterministic serialization (canonical forms compare as bytes)."""
    payload = {
        "schema": "afp.v1",
        "vertices": [repr(v.obj) for v in x.vertices],
        "edges": [[e.v1, e.v2, repr(e.obj), repr(e.m1), repr(e.m2)]
                  for e in x.edges],
        "sources": [[v, repr(m)] for v, m in x.sources],
        "target": [x.target[0], repr(x.target[1])],
        "reduced": x.reduced,
    }
    return json.dumps(payload, sort_keys=True).encode()


def realize_afp(x: AbstractFiberProduct, ops):
    """The honest limit of the tree diagram, with its external legs.

    Returns (object, source leg maps, target leg map, vertex
    projections).
    """
    shape, values, arrows, vkeys = _tree_diagram(x, ops)
    L, cone = ops.limit(shape, values, arrows)
    projections = {v: cone[vkeys[v]] for v in range(len(x.vertices))}
    sources = tuple(ops.then(projections[v], m) for v, m in x.sources)
    target = ops.then(projections[x.target[0]], x.target[1])
    return L, sources, target, projections


def _tree_diagram(x: AbstractFiberProduct, ops):
    objs = []
    mors = []
    ident = {}
    values = {}
    arrows = {}
    vkeys = {}
    for i, v in enumerate(x.vertices):
        k = f"v{i}"
        objs.append(k)
        values[k] = v.obj
        vkeys[i] = k
    for j, e in enumerate(x.edges):
        k = f"e{j}"
        objs.append(k)
        values[k] = e.obj
        mors.append((f"m{j}a", f"v{e.v1}", k))
        mors.append((f"m{j}b", f"v{e.v2}", k))
        arrows[f"m{j}a"] = e.m1
        arrows[f"m{j}b"] = e.m2
    mors += [(f"id:{o}", o, o) for o in objs]
    ident = {o: f"id:{o}" for o in objs}
    comp = {}
    for m, s, d in mors:
        comp[(f"id:{s}", m)] = m
        comp[(m, f"id:{d}")] = m
    for o in objs:
        comp[(f"id:{o}", f"id:{o}")] = f"id:{o}"
    shape = FiniteCategory(objs, mors, ident, comp, name="afp-shape")
    return shape, values, arrows, vkeys
