"""Morphism-class data for categories with compactifications.

A :class:`CompactificationClasses` bundles a base category (through its
oracle interface), the three morphism predicates (proper, dense
embedding, embedding), a chosen factorization "dense embedding then
proper" for every morphism, and the chosen-limit oracles.

Shipped instances:

* :func:`finset_classes` — finite sets with proper = all maps, dense
  embedding = bijection, embedding = injection, and the trivial
  factorization (identity, f).
* :func:`toy_classes` — a five-object lattice modelled on an open curve
  sitting inside two different compactifications; it has a morphism
  with two genuinely different dense-then-proper factorizations, which
  exercises the refinement machinery.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from ..fincat.core import FiniteCategory, StructureError, poset_category
from ..fincat.schema import category_from_dict, category_to_dict
from ..finset import FinCatOps, FinSetOps

SCHEMA = "classes.v1"


@dataclass
class CompactificationClasses:
    """Base category + (proper, dense, embedding) classes + oracles."""

    ops: object
    is_s0: Callable
    is_s1: Callable
    is_s2: Callable
    factorize: Callable  # f -> (iota in S1, fbar in S0), f = iota then fbar
    name: str = ""

    def class_name(self, f) -> str:
        return "".join(c for c, p in
                       (("0", self.is_s0(f)), ("1", self.is_s1(f)),
                        ("2", self.is_s2(f))) if p) or "-"


def finset_classes() -> CompactificationClasses:
    ops = FinSetOps()
    return CompactificationClasses(
        ops=ops,
        is_s0=lambda f: True,
        is_s1=lambda f: f.is_bijective,
        is_s2=lambda f: f.is_injective,
        factorize=lambda f: (ops.identity(f.src), f),
        name="finset",
    )


# -- the toy lattice -------------------------------------------------------
#
#        U <= W <= M1 <= P
#              <= M2 <= P
#
# U is the open object, M1 and M2 are two compactifications of it, W is
# their intersection; U -> P factors as U >-> M1 ->> P and U >-> M2 ->> P.

_TOY_ORDER = {
    "U": {"U", "W", "M1", "M2", "P"},
    "W": {"W", "M1", "M2", "P"},
    "M1": {"M1", "P"},
    "M2": {"M2", "P"},
    "P": {"P"},
}

_TOY_S1 = {"U<W", "U<M1", "U<M2"}
_TOY_S0 = {"W<M1", "W<M2", "W<P", "M1<P", "M2<P"}


def toy_category() -> FiniteCategory:
    return poset_category(list(_TOY_ORDER),
                          lambda x, y: y in _TOY_ORDER[x], name="toy")


def toy_classes() -> CompactificationClasses:
    cat = toy_category()
    ops = FinCatOps(cat)
    s1 = set(_TOY_S1) | {cat.id_of(o) for o in cat.objects}
    s0 = set(_TOY_S0) | {cat.id_of(o) for o in cat.objects}
    s2 = set(s1)
    fact = {}
    for m in cat.morphisms:
        s, d = cat.src(m), cat.dst(m)
        if m in s0:
            fact[m] = (cat.id_of(s), m)
        elif m in s1:
            fact[m] = (m, cat.id_of(d))
        else:
            # U -> P: choose the M1 route
            mid = "M1"
            fact[m] = (f"{s}<{mid}", f"{mid}<{d}")
    return CompactificationClasses(
        ops=ops,
        is_s0=lambda f: f in s0,
        is_s1=lambda f: f in s1,
        is_s2=lambda f: f in s2,
        factorize=lambda f: fact[f],
        name="toy",
    )


def toy_classes_alt() -> CompactificationClasses:
    """Same base and classes as :func:`toy_classes` but the nontrivial
    factorization routes through M2; used to exercise refinements."""
    base = toy_classes()
    cat = base.ops.cat
    fact = {}
    for m in cat.morphisms:
        s, d = cat.src(m), cat.dst(m)
        if base.is_s0(m):
            fact[m] = (cat.id_of(s), m)
        elif base.is_s1(m):
            fact[m] = (m, cat.id_of(d))
        else:
            fact[m] = (f"{s}<M2", f"M2<{d}")
    return CompactificationClasses(base.ops, base.is_s0, base.is_s1,
                                   base.is_s2, lambda f: fact[f],
                                   name="toy-alt")


# -- declared-class serialization ------------------------------------------


def classes_to_dict(classes: CompactificationClasses) -> dict:
    ops = classes.ops
    if not isinstance(ops, FinCatOps):
        raise StructureError("only explicit finite bases serialize to classes.v1")
    cat = ops.cat
    return {
        "schema": SCHEMA,
        "category": category_to_dict(cat),
        "S0": sorted(m for m in cat.morphisms if classes.is_s0(m)),
        "S1": sorted(m for m in cat.morphisms if classes.is_s1(m)),
        "S2": sorted(m for m in cat.morphisms if classes.is_s2(m)),
        "terminal": ops.terminal(),
        "factorizations": [[m, *classes.factorize(m)] for m in cat.morphisms],
    }


def classes_from_dict(d: dict) -> CompactificationClasses:
    if d.get("schema") != SCHEMA:
        raise StructureError(f"expected schema {SCHEMA!r}")
    cat = category_from_dict(d["category"])
    ops = FinCatOps(cat)
    s0, s1, s2 = set(d["S0"]), set(d["S1"]), set(d["S2"])
    fact = {}
    for row in d["factorizations"]:
        m, iota, fbar = row
        if cat.then(iota, fbar) != m:
            raise StructureError(f"factorization table broken at {m!r}")
        fact[m] = (iota, fbar)
    missing = [m for m in cat.morphisms if m not in fact]
    if missing:
        raise StructureError(f"factorization table incomplete: {missing[:3]}")
    return CompactificationClasses(
        ops=ops,
        is_s0=lambda f: f in s0,
        is_s1=lambda f: f in s1,
        is_s2=lambda f: f in s2,
        factorize=lambda f: fact[f],
        name=d["category"].get("name", "declared"),
    )


def dumps(classes: CompactificationClasses) -> str:
    return json.dumps(classes_to_dict(classes), indent=1)


def loads(text: str) -> CompactificationClasses:
    return classes_from_dict(json.loads(text))
