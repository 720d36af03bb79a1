"""Canonical exchange morphisms, built from adjunction units and
counits only, with exact invertibility decided afterwards.

Square convention: ``BaseSquare(p, q, f, g)`` is the Cartesian square

    P --p--> A          P = A x_C B (the chosen pullback),
    |        |          f: A -> C,  g: B -> C,
    q        f          p, q the projections.
    v        v
    B --g--> C

Base change compares the two ways from data over A to data over B.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..fincat.core import StructureError
from ..finset import FinMap, FinObj, FinSetOps, compose_maps
from .family import FamilyMap, VectFamily, compose_family_maps, invert, is_invertible, vertical_map
from .functors import (
    counit_pull_push,
    counit_shriek_pull,
    curry,
    hom_evaluation,
    hom_internal,
    iota_shriek,
    pull_vertical,
    pullback_u,
    push_vertical,
    pushforward_u,
    shriek_u,
    tensor,
    tensor_vertical,
    unit_pull_push,
    unit_shriek_pull,
)

_OPS = FinSetOps()


@dataclass(frozen=True)
class BaseSquare:
    """A commuting square of finite sets with chosen-pullback comparison."""

    p: FinMap  # P -> A
    q: FinMap  # P -> B
    f: FinMap  # A -> C
    g: FinMap  # B -> C

    def __post_init__(self):
        if compose_maps(self.p, self.f) != compose_maps(self.q, self.g):
            raise StructureError("square does not commute")

    def is_cartesian(self) -> bool:
        P, p1, p2 = _OPS.pullback(self.f, self.g)
        try:
            med = _OPS.mediate_pullback(P, p1, p2, self.p, self.q)
        except StructureError:
            return False
        return med.is_bijective


def cartesian_square(f: FinMap, g: FinMap) -> BaseSquare:
    """The chosen pullback square on a cospan f: A -> C <- B : g."""
    P, p1, p2 = _OPS.pullback(f, g)
    return BaseSquare(p1, p2, f, g)


def base_change(square: BaseSquare, E: VectFamily) -> FamilyMap:
    """g* f_* E -> q_* p* E, via unit of (q*, q_*) and counit of (f*, f_*).

    For f proper this is the exchange of the base-change axiom; for f an
    embedding it is the embedding variant.  Both sides live over B.
    """
    if E.base != square.f.src:
        raise StructureError("family must live over the square's A corner")
    lhs = pullback_u(square.g, pushforward_u(square.f, E))
    step1 = unit_pull_push(square.q, lhs)
    # q* g* f_* E  =  p* f* f_* E  (literal record equality)
    eps = counit_pull_push(square.f, E)
    step2 = push_vertical(square.q, pull_vertical(square.p, eps))
    return compose_family_maps(step1, step2)


def base_change_shriek(square: BaseSquare, E: VectFamily) -> FamilyMap:
    """The mate q_! p^* E -> g^* f_! E of the base change for (-)_!.

    Built as: unit of (f_!, f^*) inside, then the identification of the
    two pull-backs around the square, then counit of (q_!, q^*).
    """
    if E.base != square.f.src:
        raise StructureError("family must live over the square's A corner")
    # q_! p* E -> q_! p* f* f_! E = q_! q* g* f_! E -> g* f_! E
    eta = unit_shriek_pull(square.f, E)           # E -> f* f_! E
    step1 = push_vertical(square.q, pull_vertical(square.p, eta))
    rhs = pullback_u(square.g, shriek_u(square.f, E))
    step2 = counit_shriek_pull(square.q, rhs)
    return compose_family_maps(step1, step2)


def exchange_f4(square: BaseSquare, E: VectFamily) -> FamilyMap:
    """Base change along a proper map (all maps are proper here)."""
    return base_change(square, E)


def exchange_f5(square: BaseSquare, E: VectFamily) -> FamilyMap:
    """Base change along an embedding: the pulled-back side g must be
    injective (and then q is too, for a Cartesian square)."""
    if not square.g.is_injective:
        raise StructureError("embedding base change needs injective g")
    return base_change(square, E)


def exchange_f6(square: BaseSquare, E: VectFamily) -> FamilyMap:
    """The proper/embedding exchange on a Cartesian square with
    embeddings on the g and p sides:

        P --q--> B
        p|        |g        g, p embeddings; q, f arbitrary (proper);
        v        v
        A --f--> C

    For E over P this builds  g_!(q_* E) -> f_*(p_! E)  as the mate of
    the embedding base change: unit of (p_!, p^*) inside, the inverted
    base-change isomorphism, counit of (g_!, g^*) outside.
    """
    if not square.g.is_injective or not square.p.is_injective:
        raise StructureError("mate exchange needs embeddings g and p")
    G = shriek_u(square.p, E)                   # p_! E over A
    chi = base_change(square, G)                # g* f_* p_! E -> q_* p* p_! E
    if not is_invertible(chi):
        raise StructureError("embedding base change failed to invert")
    chi_inv = invert(chi)
    eta = unit_shriek_pull(square.p, E)         # E -> p* p_! E
    step1 = push_vertical(square.q, eta)        # q_* E -> q_* p* p_! E
    lhs0 = compose_family_maps(step1, chi_inv)  # q_* E -> g* f_* p_! E
    gshriek = push_vertical(square.g, lhs0)     # g_! q_* E -> g_! g* f_* p_! E
    rhs = pushforward_u(square.f, G)
    eps = counit_shriek_pull(square.g, rhs)
    return compose_family_maps(gshriek, eps)


def exchange_projection(f: FinMap, E: VectFamily, F: VectFamily) -> FamilyMap:
    """(f_* E) tensor F -> f_*(E tensor f* F), unit outside and counit
    inside (E over the source of f, F over the target)."""
    if E.base != f.src or F.base != f.dst:
        raise StructureError("projection formula typing")
    lhs = tensor(pushforward_u(f, E), F)
    eta = unit_pull_push(f, lhs)
    # f* lhs = f* f_* E tensor f* F  (literal)
    eps = counit_pull_push(f, E)
    inner = tensor_vertical(eps, _identity_vertical(pullback_u(f, F)))
    step2 = push_vertical(f, inner)
    return compose_family_maps(eta, step2)


def exchange_coprojection(iota: FinMap, E: VectFamily, F: VectFamily) -> FamilyMap:
    """iota* HOM(E, F) -> HOM(iota* E, iota* F): the transpose of the
    pulled-back evaluation (E, F over the target of iota)."""
    if E.base != iota.dst or F.base != iota.dst:
        raise StructureError("coprojection formula typing")
    ev = hom_evaluation(E, F)
    pulled = pull_vertical(iota, ev)
    # iota*(HOM(E,F) tensor E) = iota* HOM(E,F) tensor iota* E (literal)
    return curry(pulled, pullback_u(iota, E))


def exchange_multi_f4(square_maps, E_list) -> FamilyMap:
    """g*(tensor of f_{i,*} E_i) -> F_*(tensor of G_i^* E_i) for a multi
    base-change square.

    ``square_maps`` is (g, W, F, f_list, G_list): g: Y -> X_i product
    encoded as per-slot maps g_i: Y -> X_i; W the corner with F: W -> Y
    and G_i: W -> Z_i; f_i: Z_i -> X_i; all squares commuting and the
    total square Cartesian (W = Y x_{prod X} prod Z).
    """
    g_list, F, G_list, f_list = square_maps
    field = E_list[0].field if E_list else None
    Y = F.dst
    lhs = None
    for g_i, f_i, E in zip(g_list, f_list, E_list):
        piece = pullback_u(g_i, pushforward_u(f_i, E))
        lhs = piece if lhs is None else tensor(lhs, piece)
    if lhs is None:
        raise StructureError("nullary multi base change is not formed here")
    eta = unit_pull_push(F, lhs)
    inner = None
    for g_i, f_i, G_i, E in zip(g_list, f_list, G_list, E_list):
        eps = counit_pull_push(f_i, E)       # f* f_* E -> E over Z_i
        piece = pull_vertical(G_i, eps)      # over W
        inner = piece if inner is None else tensor_vertical(inner, piece)
    step2 = push_vertical(F, inner)
    return compose_family_maps(eta, step2)


def exchange_multi_f5(square_maps, E_list) -> FamilyMap:
    """I_!(tensor of G_i^* E_i) -> tensor of g_i^*(iota_{i,!} E_i) for a
    multi square with embeddings iota_i: Z_i -> X_i and I: W -> Y."""
    g_list, I, G_list, iota_list = square_maps
    inner = None
    for G_i, iota_i, E in zip(G_list, iota_list, E_list):
        eta = unit_shriek_pull(iota_i, E)    # E -> iota* iota_! E over Z_i
        piece = pull_vertical(G_i, eta)
        inner = piece if inner is None else tensor_vertical(inner, piece)
    if inner is None:
        raise StructureError("nullary multi exchange is not formed here")
    step1 = push_vertical(I, inner)
    rhs = None
    for g_i, iota_i, E in zip(g_list, iota_list, E_list):
        piece = pullback_u(g_i, iota_shriek(iota_i, E))
        rhs = piece if rhs is None else tensor(rhs, piece)
    eps = counit_shriek_pull(I, rhs)
    return compose_family_maps(step1, eps)


def _identity_vertical(E: VectFamily) -> FamilyMap:
    from .family import identity_family_map
    return identity_family_map(E)
