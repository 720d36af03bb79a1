"""The module operations of the concrete instance: pull-back along base
maps, additive push-forward (with both adjunctions), extension by zero,
point-wise tensor and internal hom, and the multi-variable push/pull.

All structure maps are produced as explicit :class:`FamilyMap` records;
adjunction triangle identities and slot adjunctions are exact matrix
identities at these standard bases.
"""

from __future__ import annotations

import numpy as np

from ..fincat.core import StructureError
from ..finset import FinMap, FinObj, identity_map
from .family import (
    FamilyMap,
    VectFamily,
    compose_family_maps,
    identity_family_map,
    unit_family,
    vertical_map,
)


def fiber_positions(u: FinMap, t_pos: int):
    return [s for s, j in enumerate(u.idx) if j == t_pos]


# -- pull-back ---------------------------------------------------------------


def pullback_u(u: FinMap, E: VectFamily) -> VectFamily:
    """(u*E)_s = E_{u(s)}."""
    if E.base != u.dst:
        raise StructureError("family does not live over the map's target")
    return VectFamily(E.field, u.src, tuple(E.dims[j] for j in u.idx))


def pull_vertical(u: FinMap, f: FamilyMap) -> FamilyMap:
    """u* applied to a map over the identity."""
    if not f.is_vertical():
        raise StructureError("pull_vertical expects a vertical map")
    E2, F2 = pullback_u(u, f.src), pullback_u(u, f.dst)
    return vertical_map(E2, F2, tuple(f.blocks[j] for j in u.idx))


def cocart_over(u: FinMap, E: VectFamily) -> FamilyMap:
    """The canonical coCartesian map E -> u*E over u (identity blocks)."""
    tgt = pullback_u(u, E)
    blocks = tuple(E.field.eye(E.dims[j]) for j in u.idx)
    return FamilyMap(E, tgt, u, blocks)


# -- push-forward and extension by zero --------------------------------------


def pushforward_u(u: FinMap, E: VectFamily) -> VectFamily:
    """(u_*E)_t = direct sum of E_s over the fiber, in base order."""
    if E.base != u.src:
        raise StructureError("family does not live over the map's source")
    dims = tuple(sum(E.dims[s] for s in fiber_positions(u, t))
                 for t in range(len(u.dst)))
    return VectFamily(E.field, u.dst, dims)


def push_vertical(u: FinMap, f: FamilyMap) -> FamilyMap:
    if not f.is_vertical():
        raise StructureError("push_vertical expects a vertical map")
    E2, F2 = pushforward_u(u, f.src), pushforward_u(u, f.dst)
    field = f.field
    blocks = []
    for t in range(len(u.dst)):
        fib = fiber_positions(u, t)
        blocks.append(field.direct_sum([f.blocks[s] for s in fib])
                      if fib else field.zeros(0, 0))
    return vertical_map(E2, F2, tuple(blocks))


def iota_shriek(iota: FinMap, E: VectFamily) -> VectFamily:
    """Extension by zero along an injection (coincides with the additive
    push-forward, which has zero summands off the image)."""
    if not iota.is_injective:
        raise StructureError("extension by zero requires an injection")
    return pushforward_u(iota, E)


def shriek_u(u: FinMap, E: VectFamily) -> VectFamily:
    """Left adjoint to pull-back; in this instance equal to the additive
    push-forward on the nose (finite fibers)."""
    return pushforward_u(u, E)


def support_check(E: VectFamily, iota: FinMap) -> bool:
    """True iff E (over the target of iota) vanishes off the image."""
    if E.base != iota.dst:
        raise StructureError("support is checked over the injection's target")
    image = set(iota.idx)
    return all(E.dims[t] == 0 for t in range(len(E.base)) if t not in image)


# units and counits of (u^*, u_*) and (u_!, u^*)


def unit_pull_push(u: FinMap, E: VectFamily) -> FamilyMap:
    """E -> u_* u* E over the identity (stacked identities)."""
    field = E.field
    tgt = pushforward_u(u, pullback_u(u, E))
    blocks = []
    for t in range(len(u.dst)):
        fib = fiber_positions(u, t)
        d = E.dims[t]
        m = field.zeros(d * len(fib), d)
        for k in range(len(fib)):
            m[k * d:(k + 1) * d, :] = field.eye(d)
        blocks.append(m)
    return vertical_map(E, tgt, tuple(blocks))


def counit_pull_push(u: FinMap, F: VectFamily) -> FamilyMap:
    """u* u_* F -> F over the identity (fiber projections)."""
    field = F.field
    src = pullback_u(u, pushforward_u(u, F))
    blocks = []
    for s in range(len(u.src)):
        fib = fiber_positions(u, u.idx[s])
        total = sum(F.dims[x] for x in fib)
        m = field.zeros(F.dims[s], total)
        off = 0
        for x in fib:
            if x == s:
                m[:, off:off + F.dims[s]] = field.eye(F.dims[s])
            off += F.dims[x]
        blocks.append(m)
    return vertical_map(src, F, tuple(blocks))


def unit_shriek_pull(u: FinMap, F: VectFamily) -> FamilyMap:
    """F -> u* u_! F over the identity (fiber inclusions)."""
    field = F.field
    tgt = pullback_u(u, shriek_u(u, F))
    blocks = []
    for s in range(len(u.src)):
        fib = fiber_positions(u, u.idx[s])
        total = sum(F.dims[x] for x in fib)
        m = field.zeros(total, F.dims[s])
        off = 0
        for x in fib:
            if x == s:
                m[off:off + F.dims[s], :] = field.eye(F.dims[s])
            off += F.dims[x]
        blocks.append(m)
    return vertical_map(F, tgt, tuple(blocks))


def counit_shriek_pull(u: FinMap, E: VectFamily) -> FamilyMap:
    """u_! u* E -> E over the identity (codiagonal rows of identities)."""
    field = E.field
    src = shriek_u(u, pullback_u(u, E))
    blocks = []
    for t in range(len(u.dst)):
        fib = fiber_positions(u, t)
        d = E.dims[t]
        m = field.zeros(d, d * len(fib))
        for k in range(len(fib)):
            m[:, k * d:(k + 1) * d] = field.eye(d)
        blocks.append(m)
    return vertical_map(src, E, tuple(blocks))


def cartesian_over(u: FinMap, F: VectFamily) -> FamilyMap:
    """The canonical Cartesian map u_*F -> F over u (fiber projections)."""
    src = pushforward_u(u, F)
    field = F.field
    blocks = []
    for s in range(len(u.src)):
        fib = fiber_positions(u, u.idx[s])
        total = sum(F.dims[x] for x in fib)
        m = field.zeros(F.dims[s], total)
        off = 0
        for x in fib:
            if x == s:
                m[:, off:off + F.dims[s]] = field.eye(F.dims[s])
            off += F.dims[x]
        blocks.append(m)
    return FamilyMap(src, F, u, tuple(blocks))


def ambidexterity_witness(u: FinMap, F: VectFamily) -> FamilyMap:
    """The norm map u_!F -> u_*F of the finite-fiber instance, given by
    matching direct summands; an identity record here."""
    E1 = shriek_u(u, F)
    E2 = pushforward_u(u, F)
    return vertical_map(E1, E2, tuple(F.field.eye(d) for d in E1.dims))


# -- tensor and internal hom -------------------------------------------------


def tensor(E: VectFamily, F: VectFamily) -> VectFamily:
    if E.base != F.base:
        raise StructureError("tensor requires a common base")
    return VectFamily(E.field, E.base,
                      tuple(a * b for a, b in zip(E.dims, F.dims)))


def tensor_vertical(f: FamilyMap, g: FamilyMap) -> FamilyMap:
    if not (f.is_vertical() and g.is_vertical()):
        raise StructureError("tensor_vertical expects vertical maps")
    field = f.field
    src = tensor(f.src, g.src)
    dst = tensor(f.dst, g.dst)
    blocks = tuple(field.kron(a, b) for a, b in zip(f.blocks, g.blocks))
    return vertical_map(src, dst, blocks)


def hom_internal(E: VectFamily, F: VectFamily) -> VectFamily:
    """Point-wise mapping space with basis index f*dim(E)+e."""
    if E.base != F.base:
        raise StructureError("internal hom requires a common base")
    return VectFamily(E.field, E.base,
                      tuple(a * b for a, b in zip(E.dims, F.dims)))


def hom_evaluation(E: VectFamily, F: VectFamily) -> FamilyMap:
    """HOM(E,F) tensor E -> F (point-wise evaluation)."""
    field = E.field
    H = hom_internal(E, F)
    src = tensor(H, E)
    blocks = []
    for p in range(len(E.base)):
        dE, dF = E.dims[p], F.dims[p]
        m = field.zeros(dF, dE * dF * dE)
        for f_i in range(dF):
            for e_i in range(dE):
                col = (f_i * dE + e_i) * dE + e_i
                m[f_i, col] = 1
        blocks.append(m)
    return vertical_map(src, F, tuple(field.normalize(b) for b in blocks))


def curry(phi: FamilyMap, F: VectFamily) -> FamilyMap:
    """Transpose a vertical map E tensor F -> G into E -> HOM(F, G)."""
    if not phi.is_vertical():
        raise StructureError("curry expects a vertical map")
    field = phi.field
    G = phi.dst
    EF = phi.src
    # recover E dims: EF = E tensor F
    dims_E = []
    for p in range(len(F.base)):
        dF = F.dims[p]
        dEF = EF.dims[p]
        if dF == 0:
            if dEF != 0:
                raise StructureError("tensor factor mismatch")
            dims_E.append(0)
        else:
            if dEF % dF:
                raise StructureError("tensor factor mismatch")
            dims_E.append(dEF // dF)
    E = VectFamily(field, F.base, tuple(dims_E))
    H = hom_internal(F, G)
    blocks = []
    for p in range(len(F.base)):
        dE, dF, dG = E.dims[p], F.dims[p], G.dims[p]
        m = field.zeros(dG * dF, dE)
        for g_i in range(dG):
            for f_i in range(dF):
                for e_i in range(dE):
                    m[g_i * dF + f_i, e_i] = phi.blocks[p][g_i, e_i * dF + f_i]
        blocks.append(m)
    return vertical_map(E, H, tuple(blocks))


def uncurry(psi: FamilyMap, F: VectFamily) -> FamilyMap:
    """Inverse transpose: E -> HOM(F, G) into E tensor F -> G."""
    field = psi.field
    E = psi.src
    H = psi.dst
    dims_G = []
    for p in range(len(F.base)):
        dF = F.dims[p]
        dH = H.dims[p]
        if dF == 0:
            dims_G.append(0)
        else:
            if dH % dF:
                raise StructureError("hom factor mismatch")
            dims_G.append(dH // dF)
    G = VectFamily(field, F.base, tuple(dims_G))
    EF = tensor(E, F)
    blocks = []
    for p in range(len(F.base)):
        dE, dF, dG = E.dims[p], F.dims[p], dims_G[p]
        m = field.zeros(dG, dE * dF)
        for g_i in range(dG):
            for e_i in range(dE):
                for f_i in range(dF):
                    m[g_i, e_i * dF + f_i] = psi.blocks[p][g_i * dF + f_i, e_i]
        blocks.append(m)
    return vertical_map(EF, G, tuple(blocks))


# -- multi-variable operations ------------------------------------------------


def multi_pushforward(maps, families) -> VectFamily:
    """Tensor of pull-backs along a multimorphism (u_i: T -> S_i).

    The 0-ary case yields the constant one-dimensional family (the
    instance's unit)."""
    maps = list(maps)
    families = list(families)
    if len(maps) != len(families):
        raise StructureError("arity mismatch")
    if not maps:
        raise StructureError("0-ary push-forward needs an explicit base; "
                             "use unit_family")
    T = maps[0].src
    out = None
    for u, E in zip(maps, families):
        if u.src != T:
            raise StructureError("multimorphism legs must share a source")
        pulled = pullback_u(u, E)
        out = pulled if out is None else tensor(out, pulled)
    return out


def multi_pullback_slot(j: int, maps, families, F: VectFamily) -> VectFamily:
    """Right adjoint in slot j: push HOM(tensor of the other pull-backs, F)
    along u_j."""
    maps = list(maps)
    families = list(families)
    u_j = maps[j]
    rest = None
    field = F.field
    for i, (u, E) in enumerate(zip(maps, families)):
        if i == j:
            continue
        pulled = pullback_u(u, E)
        rest = pulled if rest is None else tensor(rest, pulled)
    if rest is None:
        rest = unit_family(field, u_j.src)
    return pushforward_u(u_j, hom_internal(rest, F))


def hom_space_dim(E: VectFamily, F: VectFamily) -> int:
    """Dimension of the space of vertical maps E -> F."""
    if E.base != F.base:
        raise StructureError("hom spaces need a common base")
    return sum(a * b for a, b in zip(E.dims, F.dims))
