"""Evaluation of multicorrespondences on vector-space families, the
pseudo-functoriality comparison for composition, and the compactified
evaluation (push, extend by zero, pull)."""

from __future__ import annotations

from ..fincat.core import StructureError
from ..finset import FinMap, FinObj, FinSetOps, compose_maps
from ..vectfam.exchange import BaseSquare, base_change
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
    counit_pull_push,
    iota_shriek,
    multi_pushforward,
    pull_vertical,
    pullback_u,
    push_vertical,
    pushforward_u,
    tensor,
    tensor_vertical,
    unit_pull_push,
)
from ..correspondences.corr import MultiCorrespondence

_OPS = FinSetOps()


def eval_corr(xi: MultiCorrespondence, families) -> VectFamily:
    """Push the tensor of the pulled inputs along the target leg."""
    families = list(families)
    if len(families) != xi.arity:
        raise StructureError("arity mismatch")
    if xi.arity == 0:
        field = None
        raise StructureError("0-ary evaluation needs an explicit field; "
                             "use eval_corr_nullary")
    inner = multi_pushforward(xi.source_legs, families)
    return pushforward_u(xi.target_leg, inner)


def eval_corr_nullary(xi: MultiCorrespondence, field) -> VectFamily:
    """0-ary evaluation: push the unit family along the target leg."""
    return pushforward_u(xi.target_leg, unit_family(field, xi.apex))


def eval_corr_on_maps(xi: MultiCorrespondence, maps) -> FamilyMap:
    """Functoriality of evaluation in the inputs (vertical maps)."""
    pulled = [pull_vertical(g, m) for g, m in zip(xi.source_legs, maps)]
    out = pulled[0]
    for m in pulled[1:]:
        out = tensor_vertical(out, m)
    return push_vertical(xi.target_leg, out)


def exchange_projection_multi(f: FinMap, before, mid: VectFamily, after):
    """(tensor before) (x) f_* mid (x) (tensor after)
         -> f_*( f^*(before) (x) mid (x) f^*(after) ),
    built by one unit outside and one counit inside."""
    field = mid.field
    lhs = None
    for B in before:
        lhs = B if lhs is None else tensor(lhs, B)
    pushed = pushforward_u(f, mid)
    lhs = pushed if lhs is None else tensor(lhs, pushed)
    for B in after:
        lhs = tensor(lhs, B)
    eta = unit_pull_push(f, lhs)
    # f^* lhs = (x) f^*(before) (x) f^* f_* mid (x) f^*(after)  (literal)
    eps = counit_pull_push(f, mid)
    inner = None
    for B in before:
        part = identity_family_map(pullback_u(f, B))
        inner = part if inner is None else tensor_vertical(inner, part)
    inner = eps if inner is None else tensor_vertical(inner, eps)
    for B in after:
        inner = tensor_vertical(inner, identity_family_map(pullback_u(f, B)))
    return compose_family_maps(eta, push_vertical(f, inner))


def composition_comparison(outer: MultiCorrespondence, slot: int,
                           inner: MultiCorrespondence, families):
    """The canonical comparison from the nested evaluation to the
    evaluation over the stepwise chosen pullback.

    ``families`` are the inputs of the composite (outer's inputs with
    the slot replaced by inner's inputs).  Returns (chi, lhs_eval,
    rhs_eval) with chi: eval(outer)(..., eval(inner)(...), ...) ->
    eval over the pullback span, built from one base change and one
    multi projection formula.
    """
    families = list(families)
    n_in = inner.arity
    before = families[:slot]
    mids = families[slot:slot + n_in]
    after = families[slot + n_in:]

    g_slot = outer.source_legs[slot]
    P, p_out, p_in = _OPS.pullback(g_slot, inner.target_leg)
    if not families:
        raise StructureError("comparison needs at least one input family")
    field = families[0].field

    # nested evaluation
    inner_val = multi_pushforward(inner.source_legs, mids) if n_in \
        else unit_family(field, inner.apex)
    inner_pushed = pushforward_u(inner.target_leg, inner_val)
    outer_inputs = before + [inner_pushed] + after
    nested = eval_corr(outer, outer_inputs)

    # composite evaluation over the chosen pullback
    comp_legs = ([compose_maps(p_out, g) for g in outer.source_legs[:slot]]
                 + [compose_maps(p_in, g) for g in inner.source_legs]
                 + [compose_maps(p_out, g) for g in outer.source_legs[slot + 1:]])
    comp_f = compose_maps(p_out, outer.target_leg)
    comp_inputs = before + mids + after
    composite = pushforward_u(comp_f, multi_pushforward(comp_legs, comp_inputs))

    # chi: nested -> composite
    # step 1: base change g_slot^* (f_in)_* -> (p_out)_* (p_in)^* inside
    sq = BaseSquare(p_in, p_out, inner.target_leg, g_slot)
    chi_bc = base_change(sq, inner_val)
    pulled_before = [pullback_u(g, B)
                     for g, B in zip(outer.source_legs[:slot], before)]
    pulled_after = [pullback_u(g, B)
                    for g, B in zip(outer.source_legs[slot + 1:], after)]
    step1_inner = None
    for pb in pulled_before:
        part = identity_family_map(pb)
        step1_inner = part if step1_inner is None \
            else tensor_vertical(step1_inner, part)
    step1_inner = chi_bc if step1_inner is None \
        else tensor_vertical(step1_inner, chi_bc)
    for pa in pulled_after:
        step1_inner = tensor_vertical(step1_inner, identity_family_map(pa))
    step1 = push_vertical(outer.target_leg, step1_inner)

    # step 2: multi projection formula around (p_out)_*
    mid_val = multi_pushforward(
        [compose_maps(p_in, g) for g in inner.source_legs], mids) if n_in \
        else unit_family(field, P)
    chi_pf = exchange_projection_multi(p_out, pulled_before, mid_val,
                                       pulled_after)
    step2 = push_vertical(outer.target_leg, chi_pf)
    chi = compose_family_maps(step1, step2)
    if chi.src != nested or chi.dst != composite:
        raise StructureError("comparison endpoints drifted")
    return chi, nested, composite


def sum_reorder_iso(u: FinMap, v: FinMap, E: VectFamily) -> FamilyMap:
    """The canonical permutation (u then v)_* E -> v_*(u_* E)."""
    field = E.field
    lhs = pushforward_u(compose_maps(u, v), E)
    rhs = pushforward_u(v, pushforward_u(u, E))
    blocks = []
    for t in range(len(v.dst)):
        # lhs order: sources s with v(u(s)) = t in source order
        src_positions = [s for s in range(len(u.src))
                         if v.idx[u.idx[s]] == t]
        # rhs order: mids m with v(m) = t, then s with u(s) = m
        rhs_positions = []
        for m in range(len(v.src)):
            if v.idx[m] != t:
                continue
            rhs_positions.extend(s for s in range(len(u.src))
                                 if u.idx[s] == m)
        dim = sum(E.dims[s] for s in src_positions)
        mat = field.zeros(dim, dim)
        offs_l = {}
        off = 0
        for s in src_positions:
            offs_l[s] = off
            off += E.dims[s]
        off = 0
        for s in rhs_positions:
            d = E.dims[s]
            mat[off:off + d, offs_l[s]:offs_l[s] + d] = field.eye(d)
            off += d
        blocks.append(mat)
    return vertical_map(lhs, rhs, tuple(blocks))


def eval_compactified(g_legs, iota: FinMap, fbar: FinMap, families):
    """Compactified evaluation fbar_* iota_! g^*(...), plus the canonical
    isomorphism to the direct evaluation along f = iota then fbar."""
    inner = multi_pushforward(g_legs, families)
    val = pushforward_u(fbar, iota_shriek(iota, inner))
    direct = pushforward_u(compose_maps(iota, fbar), inner)
    comp = sum_reorder_iso(iota, fbar, inner)
    if comp.src != direct or comp.dst != val:
        raise StructureError("compactified comparison endpoints drifted")
    return val, direct, comp
