"""Families of finite-dimensional vector spaces over finite sets.

A family assigns a free module of recorded dimension to each point of a
finite set; all modules carry standard bases, so canonical isomorphisms
(associators, base-change composites) are literal identity matrices.

A map of families records the finite-set base map it lives over.  The
convention follows the fibration over the opposite base category: a
``FamilyMap`` from E (over A) to F (over B) carries ``base: B -> A``
and one matrix E_{base(b)} -> F_b per point b of B.  Maps over the
identity are ordinary point-wise matrix families.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..fincat.core import StructureError
from ..finset import FinMap, FinObj, compose_maps, identity_map
from .field import ExactField


@dataclass(frozen=True)
class VectFamily:
    field: ExactField
    base: FinObj
    dims: tuple

    def __post_init__(self):
        if len(self.dims) != len(self.base.elements):
            raise StructureError("one dimension per base point required")
        if any(d < 0 for d in self.dims):
            raise StructureError("dimensions must be non-negative")

    def dim_at(self, x) -> int:
        return self.dims[self.base.index(x)]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def __repr__(self):
        return f"VectFamily({self.base.elements!r}, dims={self.dims!r})"


def zero_family(field: ExactField, base: FinObj) -> VectFamily:
    return VectFamily(field, base, (0,) * len(base))


def unit_family(field: ExactField, base: FinObj) -> VectFamily:
    return VectFamily(field, base, (1,) * len(base))


@dataclass(frozen=True)
class FamilyMap:
    src: VectFamily
    dst: VectFamily
    base: FinMap                 # dst.base -> src.base
    blocks: tuple                # per dst point b: matrix E_{base(b)} -> F_b

    def __post_init__(self):
        if self.base.src != self.dst.base or self.base.dst != self.src.base:
            raise StructureError("base map must go dst.base -> src.base")
        if len(self.blocks) != len(self.dst.base):
            raise StructureError("one block per destination point required")
        for i, blk in enumerate(self.blocks):
            want_rows = self.dst.dims[i]
            want_cols = self.src.dims[self.base.idx[i]]
            if blk.shape != (want_rows, want_cols):
                raise StructureError(
                    f"block {i} has shape {blk.shape}, wanted "
                    f"({want_rows},{want_cols})")

    @property
    def field(self) -> ExactField:
        return self.src.field

    def block_at(self, b) -> np.ndarray:
        return self.blocks[self.dst.base.index(b)]

    def is_vertical(self) -> bool:
        return self.src.base == self.dst.base and \
            self.base.idx == tuple(range(len(self.src.base)))

    def __eq__(self, other):
        if not isinstance(other, FamilyMap):
            return NotImplemented
        return (self.src == other.src and self.dst == other.dst
                and self.base == other.base
                and len(self.blocks) == len(other.blocks)
                and all(self.field.equal(a, b)
                        for a, b in zip(self.blocks, other.blocks)))

    def __repr__(self):
        return (f"FamilyMap({self.src.dims!r}->{self.dst.dims!r} "
                f"over {self.base.idx!r})")


def compose_family_maps(f: FamilyMap, g: FamilyMap) -> FamilyMap:
    """f then g (f: E -> F over u, g: F -> G over v; composite over u.v)."""
    if f.dst != g.src:
        raise StructureError("family maps not composable")
    field = f.field
    base = compose_maps(g.base, f.base)
    blocks = tuple(
        field.matmul(g.blocks[i], f.blocks[g.base.idx[i]])
        for i in range(len(g.dst.base)))
    return FamilyMap(f.src, g.dst, base, blocks)


def identity_family_map(E: VectFamily) -> FamilyMap:
    return FamilyMap(E, E, identity_map(E.base),
                     tuple(E.field.eye(d) for d in E.dims))


def vertical_map(E: VectFamily, F: VectFamily, blocks) -> FamilyMap:
    """A map over the identity base."""
    if E.base != F.base:
        raise StructureError("vertical maps need a common base")
    return FamilyMap(E, F, identity_map(E.base), tuple(blocks))


def zero_map(E: VectFamily, F: VectFamily, base: FinMap) -> FamilyMap:
    blocks = tuple(E.field.zeros(F.dims[i], E.dims[base.idx[i]])
                   for i in range(len(F.base)))
    return FamilyMap(E, F, base, blocks)


def is_invertible(f: FamilyMap) -> bool:
    """Exact invertibility: bijective base and invertible blocks."""
    if not f.base.is_bijective:
        return False
    return all(f.field.is_invertible(b) for b in f.blocks)


def invert(f: FamilyMap) -> FamilyMap:
    if not is_invertible(f):
        raise StructureError("family map is not invertible")
    field = f.field
    inv_base_idx = [0] * len(f.src.base)
    for i, j in enumerate(f.base.idx):
        inv_base_idx[j] = i
    inv_base = FinMap(f.src.base, f.dst.base, tuple(inv_base_idx))
    blocks = tuple(field.inverse(f.blocks[inv_base_idx[j]])
                   for j in range(len(f.src.base)))
    return FamilyMap(f.dst, f.src, inv_base, blocks)


def random_family(field: ExactField, rng, base: FinObj, max_dim: int) -> VectFamily:
    return VectFamily(field, base,
                      tuple(rng.randrange(max_dim + 1) for _ in base.elements))


def random_vertical_map(rng, E: VectFamily, F: VectFamily) -> FamilyMap:
    field = E.field
    blocks = tuple(field.rand(rng, F.dims[i], E.dims[i])
                   for i in range(len(E.dims)))
    return vertical_map(E, F, blocks)


# -- serialization -----------------------------------------------------------

FAMILY_SCHEMA = "family.v1"
FAMAP_SCHEMA = "famap.v1"


def family_to_dict(E: VectFamily) -> dict:
    return {
        "schema": FAMILY_SCHEMA,
        "base": [repr(x) for x in E.base.elements],
        "field": {"p": E.field.p} if E.field.is_prime_field else {"p": "Q"},
        "dims": list(E.dims),
    }


def famap_to_dict(f: FamilyMap) -> dict:
    return {
        "schema": FAMAP_SCHEMA,
        "src": family_to_dict(f.src),
        "dst": family_to_dict(f.dst),
        "base_idx": list(f.base.idx),
        "blocks": [f.field.entries(b) for b in f.blocks],
    }
