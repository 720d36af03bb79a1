"""(Op)fibration tests, inverse structure and comma-category fibers.

Everything here is decided by exhaustive search over the finite data:
a lift is (co)Cartesian iff its universal property holds against every
morphism of the source category.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import (
    DegreeFunction,
    FiniteCategory,
    Functor,
    StructureError,
    ValidationReport,
    are_isomorphic,
    full_subcategory,
    poset_category,
)
from .xi import XiCategory, coherent_shape, xi_category, chain_label, ladder_label


def is_cocartesian(F: Functor, psi: str) -> bool:
    """Strict 1-categorical coCartesianity of ``psi`` for ``F``."""
    C, D = F.source, F.target
    a, b = C.src(psi), C.dst(psi)
    fpsi = F.mor_map[psi]
    for psi2 in C.morphisms_from(a):
        fpsi2 = F.mor_map[psi2]
        # all chi with F(psi2) = chi . F(psi)  (diagram order: fpsi then chi)
        for chi in D.hom(D.dst(fpsi), D.dst(fpsi2)):
            if D.then(fpsi, chi) != fpsi2:
                continue
            fills = [t for t in C.hom(b, C.dst(psi2))
                     if F.mor_map[t] == chi and C.then(psi, t) == psi2]
            if len(fills) != 1:
                return False
    return True


def is_cartesian(F: Functor, psi: str) -> bool:
    C, D = F.source, F.target
    a, b = C.src(psi), C.dst(psi)
    fpsi = F.mor_map[psi]
    for psi2 in C.morphisms_to(b):
        fpsi2 = F.mor_map[psi2]
        for chi in D.hom(D.src(fpsi2), D.src(fpsi)):
            if D.then(chi, fpsi) != fpsi2:
                continue
            fills = [t for t in C.hom(C.src(psi2), a)
                     if F.mor_map[t] == chi and C.then(t, psi) == psi2]
            if len(fills) != 1:
                return False
    return True


@dataclass
class FibrationReport:
    is_fibration: bool
    is_opfibration: bool
    cocartesian_lifts: dict  # (object, target-morphism) -> lift morphism
    cartesian_lifts: dict    # (object, target-morphism) -> lift morphism
    failures: tuple = ()


def check_opfibration(F: Functor) -> FibrationReport:
    """Exhaustively decide whether ``F`` is a fibration / opfibration.

    Records a chosen (co)Cartesian lift for every (object, morphism)
    instance; choices are deterministic (first in morphism order).
    """
    C, D = F.source, F.target
    cocart = {}
    cart = {}
    fail = []
    op_ok = True
    fib_ok = True
    for a in C.objects:
        fa = F.obj_map[a]
        for phi in D.morphisms_from(fa):
            lift = None
            for psi in C.morphisms_from(a):
                if F.mor_map[psi] == phi and is_cocartesian(F, psi):
                    lift = psi
                    break
            if lift is None:
                op_ok = False
                fail.append(("no-cocartesian-lift", a, phi))
            else:
                cocart[(a, phi)] = lift
        for phi in D.morphisms_to(fa):
            lift = None
            for psi in C.morphisms_to(a):
                if F.mor_map[psi] == phi and is_cartesian(F, psi):
                    lift = psi
                    break
            if lift is None:
                fib_ok = False
                fail.append(("no-cartesian-lift", a, phi))
            else:
                cart[(a, phi)] = lift
    return FibrationReport(fib_ok, op_ok, cocart, cart, tuple(fail))


def inverse_structure(cat: FiniteCategory) -> Optional[DegreeFunction]:
    """Degree witness that ``cat`` is inverse, or None.

    Uses the longest factorization into non-identities starting at each
    object; fails (returns None) when a non-identity cycle exists.
    """
    # longest path in the non-identity morphism graph
    memo = {}
    onstack = set()

    def longest(o):
        if o in memo:
            return memo[o]
        if o in onstack:
            return None
        onstack.add(o)
        best = 0
        for m in cat.morphisms_from(o):
            if cat.is_identity(m):
                continue
            sub = longest(cat.dst(m))
            if sub is None:
                onstack.discard(o)
                return None
            best = max(best, 1 + sub)
        onstack.discard(o)
        memo[o] = best
        return best

    deg = {}
    for o in cat.objects:
        d = longest(o)
        if d is None:
            return None
        deg[o] = d
    wit = DegreeFunction(cat, deg)
    return wit if wit.validate().ok else None


def comma_under(cat: FiniteCategory, i: str) -> FiniteCategory:
    """The comma category of morphisms out of ``i`` (i over cat)."""
    objs = list(cat.morphisms_from(i))
    mors = []
    comp = {}
    ident = {}

    def lb(f, g, h):
        return f"{f}~{g}~{h}"

    for f in objs:
        for g in objs:
            for h in cat.hom(cat.dst(f), cat.dst(g)):
                if cat.then(f, h) == g:
                    mors.append((lb(f, g, h), f, g))
    for f in objs:
        ident[f] = lb(f, f, cat.id_of(cat.dst(f)))
    by_pair = {}
    for ml, f, g in mors:
        by_pair.setdefault(f, []).append(ml)
    lab = {ml: (f, g) for ml, f, g in mors}
    for ml, f, g in mors:
        h1 = ml.split("~")[2]
        for ml2, f2, g2 in mors:
            if f2 != g:
                continue
            h2 = ml2.split("~")[2]
            comp[(ml, ml2)] = lb(f, g2, cat.then(h1, h2))
    return FiniteCategory(objs, mors, ident, comp, name=f"{i}/{cat.name}")


def matching_category(cat: FiniteCategory, i: str) -> FiniteCategory:
    """Non-identity part of the comma category under ``i``.

    Defined for inverse categories: raises if ``cat`` is not inverse.
    """
    if inverse_structure(cat) is None:
        raise StructureError("matching category requires an inverse category")
    under = comma_under(cat, i)
    keep = [f for f in under.objects if not cat.is_identity(f)]
    return full_subcategory(under, keep, name=f"M_{i}")


def fiber_category(F: Functor, j: str, name: str = "") -> FiniteCategory:
    """Fiber of a functor over an object: morphisms over the identity."""
    C = F.source
    objs = [o for o in C.objects if F.obj_map[o] == j]
    idj = F.target.id_of(j)
    keep_obj = set(objs)
    mors = [(m, C.src(m), C.dst(m)) for m in C.morphisms
            if C.src(m) in keep_obj and C.dst(m) in keep_obj
            and F.mor_map[m] == idj]
    kept = {m for m, _, _ in mors}
    comp = {k: v for k, v in C._compose.items()
            if k[0] in kept and k[1] in kept}
    ident = {o: C.id_of(o) for o in objs}
    return FiniteCategory(objs, mors, ident, comp, name=name or f"fiber[{j}]")


# -- the q1/q2 fiber formulas ---------------------------------------------


def _apply_functor_to_xi(alpha: Functor, shape_src: XiCategory,
                         shape_dst: XiCategory) -> Functor:
    """Functor ^Xi(alpha) between ladder categories of the same word."""
    if shape_src.xi != shape_dst.xi:
        raise StructureError("direction words differ")
    base_s, base_t = alpha.source, alpha.target
    obj_map = {}
    for lb in shape_src.objects:
        objs = tuple(alpha.obj_map[o] for o in shape_src.chain_objs[lb])
        mors = tuple(alpha.mor_map[m] for m in shape_src.chain_mors[lb])
        obj_map[lb] = chain_label(objs, mors)
    mor_map = {}
    for ml in shape_src.morphisms:
        la, lb2, verts = shape_src.ladder[ml]
        new_verts = tuple(alpha.mor_map[v] for v in verts)
        mor_map[ml] = ladder_label(obj_map[la], obj_map[lb2], new_verts)
    f = Functor(shape_src, shape_dst, obj_map, mor_map,
                name=f"^xi({alpha.name})")
    rep = f.validate()
    if not rep.ok:
        raise StructureError(f"xi-image functor invalid: {rep.violations[:3]}")
    return f


def xi_functor(alpha: Functor, xi, size_cap=50_000):
    """Apply ^Xi to a functor; returns (functor, source shape, target shape)."""
    s = xi_category(alpha.source, xi, size_cap)
    t = xi_category(alpha.target, xi, size_cap)
    return _apply_functor_to_xi(alpha, s, t), s, t


@dataclass
class QFiberReport:
    q1_is_opfibration: bool
    q2_is_fibration: bool
    q1_fibers_checked: int
    q2_fibers_checked: int
    failures: tuple = ()

    @property
    def ok(self):
        return self.q1_is_opfibration and self.q2_is_fibration and not self.failures


def double_comma(fib: FiniteCategory, i2: str, push, fib2: FiniteCategory,
                 name: str = "") -> FiniteCategory:
    """Objects (phi: i2 -> x in fib, psi: push(x) -> y in fib2); morphisms
    pairs (h: x -> x', k: y -> y') with phi' = phi.h and psi'.(push h)=psi.k
    — the double comma used by the fiber formulas.

    ``push`` is a pair of dicts (object map, morphism map) fib -> fib2.
    """
    pobj, pmor = push
    objs = []
    data = {}
    for x in fib.objects:
        for phi in fib.hom(i2, x):
            for y in fib2.objects:
                for psi in fib2.hom(pobj[x], y):
                    lb = f"({phi};{psi})"
                    objs.append(lb)
                    data[lb] = (x, phi, y, psi)
    mors = []
    ident = {}
    for lb, (x, phi, y, psi) in data.items():
        for lb2, (x2, phi2, y2, psi2) in data.items():
            for h in fib.hom(x, x2):
                if fib.then(phi, h) != phi2:
                    continue
                for k in fib2.hom(y, y2):
                    if fib2.then(psi, k) != fib2.then(pmor[h], psi2):
                        continue
                    mors.append((f"{lb}->{lb2}#{h},{k}", lb, lb2))
    for lb, (x, phi, y, psi) in data.items():
        ident[lb] = f"{lb}->{lb}#{fib.id_of(x)},{fib2.id_of(y)}"
    comp = {}
    parse = {m: (s, d, m.split("#")[1].split(",")) for m, s, d in mors}
    for m1, s1, d1 in mors:
        for m2, s2, d2 in mors:
            if d1 != s2:
                continue
            h1, k1 = parse[m1][2]
            h2, k2 = parse[m2][2]
            comp[(m1, m2)] = f"{s1}->{d2}#{fib.then(h1, h2)},{fib2.then(k1, k2)}"
    return FiniteCategory(objs, mors, ident, comp, name=name or "double-comma")


def q_fiber_check(alpha: Functor, size_cap: int = 50_000) -> QFiberReport:
    """Verify the fiber description of the two comparison functors built
    from an opfibration alpha: I -> J on 4-chain shapes.

    q1 = (coherent_shape(alpha), pi_123) into the pullback of
    pi_123: ^duud J -> ^duu J against ^duu(alpha); q2 = id x pi_1 into
    the pullback of pi_1: ^duud J -> J against alpha.  Checks that q1 is
    an opfibration whose fiber over ((j1->j2->j3->j4), (i1->i2->i3)) is
    the comma category i4 / I_{j4}, and that q2 is a fibration whose
    fiber is the opposite double comma, with i2, i4 the coCartesian
    push-forwards.
    """
    base_rep = check_opfibration(alpha)
    if not base_rep.is_opfibration:
        raise StructureError("q_fiber_check requires an opfibration")
    I, J = alpha.source, alpha.target
    wI = coherent_shape(I, size_cap)
    wJ = coherent_shape(J, size_cap)
    w_alpha = _apply_functor_to_xi(alpha, wI, wJ)
    from .xi import restriction_functor
    pi123_I = restriction_functor(wI, [1, 2, 3], size_cap)
    pi123_J = restriction_functor(wJ, [1, 2, 3], size_cap)
    duu_alpha = _apply_functor_to_xi(alpha, pi123_I.target, pi123_J.target)
    pi1_shape = restriction_functor(wJ, [1], size_cap)
    pi1_J = pi1_shape.compose_with(_one_slot_to_base(pi1_shape.target, J))

    failures = []

    # P1: objects (w in wJ, u in ^duu I) with pi123(w) = duu_alpha(u)
    from .core import opposite_category, pullback_category
    P1 = pullback_category(pi123_J, duu_alpha, name="P1")
    p1_label = {parts: lb for lb, parts in P1.obj_parts.items()}
    p1_mlabel = {parts: lb for lb, parts in P1.mor_parts.items()}
    q1_obj = {x: p1_label[(w_alpha.obj_map[x], pi123_I.obj_map[x])]
              for x in wI.objects}
    q1_mor = {m: p1_mlabel[(w_alpha.mor_map[m], pi123_I.mor_map[m])]
              for m in wI.morphisms}
    q1 = Functor(wI, P1, q1_obj, q1_mor, name="q1")
    rep = q1.validate()
    if not rep.ok:
        raise StructureError(f"q1 not a functor: {rep.violations[:3]}")
    q1_rep = check_opfibration(q1)

    # q2: P1 -> P2, pairs (w, i1)
    duuI = pi123_I.target
    P2 = pullback_category(pi1_J, alpha, name="P2")
    p2_label = {parts: lb for lb, parts in P2.obj_parts.items()}
    p2_mlabel = {parts: lb for lb, parts in P2.mor_parts.items()}
    q2_obj = {}
    q2_mor = {}
    for o in P1.objects:
        w, u = P1.obj_parts[o]
        q2_obj[o] = p2_label[(w, duuI.chain_objs[u][0])]
    for m in P1.morphisms:
        wm, um = P1.mor_parts[m]
        q2_mor[m] = p2_mlabel[(wm, duuI.ladder[um][2][0])]
    q2 = Functor(P1, P2, q2_obj, q2_mor, name="q2")
    rep = q2.validate()
    if not rep.ok:
        raise StructureError(f"q2 not a functor: {rep.violations[:3]}")
    q2_rep = check_opfibration(q2)

    # fibers of q1 against the comma formula
    n1 = 0
    for p in P1.objects:
        fib = fiber_category(q1, p)
        if not fib.objects:
            continue
        w, u = P1.obj_parts[p]
        jobjs = wJ.chain_objs[w]
        jmors = wJ.chain_mors[w]
        iobjs = duuI.chain_objs[u]
        # i4 = coCartesian push of i3 along j3 -> j4
        i3 = iobjs[2]
        tau34 = jmors[2]
        lift = base_rep.cocartesian_lifts[(i3, tau34)]
        i4 = I.dst(lift)
        fibJ4 = fiber_category(alpha, jobjs[3])
        target = comma_under(fibJ4, i4)
        if not are_isomorphic(fib, target):
            failures.append(("q1-fiber", p, len(fib.objects), len(target.objects)))
        n1 += 1

    # fibers of q2 against the opposite double comma
    n2 = 0
    for p in P2.objects:
        fib = fiber_category(q2, p)
        if not fib.objects:
            continue
        w, i1 = P2.obj_parts[p]
        jobjs = wJ.chain_objs[w]
        jmors = wJ.chain_mors[w]
        lift12 = base_rep.cocartesian_lifts[(i1, jmors[0])]
        i2 = I.dst(lift12)
        fib2cat = fiber_category(alpha, jobjs[1])
        fib3cat = fiber_category(alpha, jobjs[2])
        push = _pushforward_on_fiber(alpha, base_rep, fib2cat, fib3cat, jmors[1])
        dc = double_comma(fib2cat, i2, push, fib3cat)
        target = opposite_category(dc)
        if not are_isomorphic(fib, target):
            failures.append(("q2-fiber", p, len(fib.objects), len(target.objects)))
        n2 += 1

    return QFiberReport(q1_rep.is_opfibration, q2_rep.is_fibration,
                        n1, n2, tuple(failures))


def _one_slot_to_base(shape: XiCategory, base: FiniteCategory) -> Functor:
    """Canonical isomorphism from a one-slot down-shape onto its base."""
    obj_map = {lb: shape.chain_objs[lb][0] for lb in shape.objects}
    mor_map = {ml: shape.ladder[ml][2][0] for ml in shape.morphisms}
    return Functor(shape, base, obj_map, mor_map, name="unchain")


def _pushforward_on_fiber(alpha: Functor, rep, fib_src: FiniteCategory,
                          fib_dst: FiniteCategory, tau: str):
    """CoCartesian push-forward functor between fibers of an opfibration."""
    I = alpha.source
    pobj = {}
    pmor = {}
    lifts = {}
    for x in fib_src.objects:
        lift = rep.cocartesian_lifts[(x, tau)]
        lifts[x] = lift
        pobj[x] = I.dst(lift)
    for h in fib_src.morphisms:
        x, x2 = fib_src.src(h), fib_src.dst(h)
        # unique fill of lift(x2) . ??? against h then lift
        want = I.then(h, lifts[x2])
        fills = [t for t in I.hom(pobj[x], pobj[x2])
                 if alpha.mor_map[t] == alpha.target.id_of(alpha.obj_map[pobj[x]])
                 and I.then(lifts[x], t) == want]
        if len(fills) != 1:
            raise StructureError("coCartesian fill not unique on fiber morphism")
        pmor[h] = fills[0]
    return pobj, pmor
