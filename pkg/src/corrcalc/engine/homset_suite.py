"""The morphism-set configurations for the acceptance run: twenty
point- and arrow-indexed checks at micro scale over the two-element
field, plus the product formula on two-generator trees."""

from __future__ import annotations

from ..comp.classes import finset_classes
from ..correspondences.compactified import TreeCorrespondenceData
from ..finset import FinSetOps, compose_maps, fin_obj, identity_map
from ..report import Report, RunConfig
from ..twcalc.trees import concat_trees, delta_tree
from ..vectfam.family import VectFamily
from ..vectfam.field import ExactField
from ..vectfam.suites import random_map, random_set, trial_rng
from .d1 import LABELS, canonical_d1, trivial_span_base
from .d1check import d1_span_correspondence, hom_set_check_d1
from .homsets import hom_set_check_point

_OPS = FinSetOps()
F2 = ExactField(2)


def _rand_dims(rng, base, cap=2):
    return VectFamily(F2, base, tuple(rng.randrange(cap + 1) for _ in base))


def _point_config(rng, arity: int):
    tree = delta_tree(arity)
    objs = {o: random_set(rng, 2, 1, f"o{o}") for o in tree.objects}
    A = random_set(rng, 2, 0, "a")
    legs = tuple(random_map(rng, A, objs[s]) for s in tree.source_objects)
    tleg = random_map(rng, A, objs[tree.root])
    data = TreeCorrespondenceData(tree, objs, {0: (A, legs, tleg)})
    deg0 = {o: _rand_dims(rng, objs[o]) for o in tree.objects}
    return data, deg0


def _two_generator_config(rng):
    outer = delta_tree(1)
    tree = concat_trees(outer, "1", delta_tree(1, prefix="z"))
    objs = {o: random_set(rng, 2, 1, f"o{o}") for o in tree.objects}
    spans = {}
    for k, (gs, t) in enumerate(tree.generators):
        A = random_set(rng, 2, 0, f"a{k}")
        spans[k] = (A, tuple(random_map(rng, A, objs[s]) for s in gs),
                    random_map(rng, A, objs[t]))
    data = TreeCorrespondenceData(tree, objs, spans)
    deg0 = {o: _rand_dims(rng, objs[o]) for o in tree.objects}
    return data, deg0


def _d1_config(rng):
    def rand_base(tag):
        S0 = random_set(rng, 2, 1, f"{tag}s")
        S1 = random_set(rng, 2, 1, f"{tag}t")
        A = random_set(rng, 2, 0, f"{tag}a")
        return trivial_span_base(S0, A, S1, random_map(rng, A, S0),
                                 random_map(rng, A, S1))

    Y = rand_base("y")
    Z0 = random_set(rng, 2, 0, "z0")
    h0 = random_map(rng, Z0, Y.bases["c0"])
    AZ, pz, pa = _OPS.pullback(h0, Y.t4)
    Z1 = Y.bases["c1"]
    Z = trivial_span_base(Z0, AZ, Z1, pz, compose_maps(pa, Y.t2))
    f_comps = {"c0": h0, "x3": pa, "x2": pa,
               "x1": identity_map(Z1), "c1": identity_map(Z1)}
    g_comps = {lb: identity_map(Z.bases[lb]) for lb in LABELS}
    corr = d1_span_correspondence(Z, Y, Z, g_comps, f_comps)
    E = canonical_d1(Z, _rand_dims(rng, Z.bases["c0"]),
                     _rand_dims(rng, Z.bases["c1"]))
    F = canonical_d1(Y, _rand_dims(rng, Y.bases["c0"]),
                     _rand_dims(rng, Y.bases["c1"]))
    return corr, E, F


def homset_suite(config: RunConfig) -> Report:
    """Twenty mapping-space checks (unary and binary point-indexed,
    unary arrow-indexed) plus the product formula on five two-generator
    trees; every comparison must be a bijection."""
    rep = Report("homsets")
    fc = finset_classes()
    n_cfg = max(config.trials, 20) if config.trials else 20
    n_cfg = min(n_cfg, 20)
    for k in range(n_cfg):
        rng = trial_rng(config.seed, "homsets", k)
        kind = k % 3
        try:
            if kind in (0, 1):
                data, deg0 = _point_config(rng, 1 if kind == 0 else 2)
                w = hom_set_check_point(data, deg0, fc)
            else:
                corr, E, F = _d1_config(rng)
                w = hom_set_check_d1(corr, [E], F)
        except Exception as exc:
            rep.record(False, {"config": k, "error": str(exc)})
            continue
        rep.record(w.comparison_bijective, None if w.comparison_bijective
                   else {"config": k, "m": w.m_count, "hom": w.hom_count})
    for k in range(5):
        rng = trial_rng(config.seed, "homsets-product", k)
        try:
            data, deg0 = _two_generator_config(rng)
            w = hom_set_check_point(data, deg0, fc)
        except Exception as exc:
            rep.record(False, {"product-config": k, "error": str(exc)})
            continue
        rep.record(w.comparison_bijective, None if w.comparison_bijective
                   else {"product-config": k, "m": w.m_count,
                         "hom": w.hom_count})
    return rep
