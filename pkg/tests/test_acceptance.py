"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with: pytest tests/test_acceptance.py -v -s
"""

import itertools
import random
import time

import pytest

from conftest import random_globular_set
from globular.coherators import (
    Bounds,
    build_tower,
    enumerate_parallel_pairs,
    is_pseudo_coherator_up_to,
    theta_zero,
)
from globular.errors import NotAdmissible, NotParallel
from globular.extensions import (
    ParallelPair,
    boundary_of,
    glob_cell,
    identity_term,
    is_admissible,
    make_parallel_pair,
)
from globular.globes import hom_globes, identity, sigma, tau
from globular.models import (
    FiniteGroup,
    ModelMorphism,
    check_morphism,
    check_segal,
    constant_model,
    eval_term,
    group_model,
    homotopy_related,
    is_weak_equivalence,
    one_point_model,
    pi_n,
    relabel,
)
from globular.pasting import (
    automorphisms,
    disk,
    enumerate_tables,
    hom_gs,
    parse_table,
    product_for_table,
    realize,
    render_table,
)
from globular.structural import (
    FreeProvider,
    StructuralCatalog,
    assoc1_pair,
    assoc2_naive_pair,
    assoc2_pair,
    comp_mary_pair,
    comp_pair,
    inverse_constraint_pairs,
    inverse_pair,
    standard_catalog,
    unit_constraint_pairs,
    unit_pair,
)
from globular.wfs import (
    CellularPresentation,
    check_gate,
    omega_layering,
    presentation_of,
    presentation_signatures,
    pushout_all,
    tower_signatures,
)


def report(n, label, elapsed=None):
    timing = f" [{elapsed:.2f}s]" if elapsed is not None else ""
    print(f"\nACCEPTANCE {n}: PASS - {label}{timing}")


def test_criterion_01_globe_hom_formula():
    start = time.time()
    for i in range(7):
        for j in range(7):
            want = 2 if i < j else (1 if i == j else 0)
            assert len(hom_globes(i, j)) == want, (i, j)
    elapsed = time.time() - start
    assert elapsed < 1.0
    report(1, "globe hom-set sizes match the three-case formula for dims <= 6",
           elapsed)


def test_criterion_02_rigidity():
    start = time.time()
    tables = enumerate_tables(3, 4)
    for t in tables:
        auts = automorphisms(t)
        assert len(auts) == 1 and auts[0].is_identity, render_table(t)
    elapsed = time.time() - start
    assert elapsed < 30.0
    report(2, f"identity is the only automorphism for all {len(tables)} "
              "tables with length <= 4, dim <= 3", elapsed)


def test_criterion_03_colimit_universal_property():
    start = time.time()
    rng = random.Random(20240)
    tables = enumerate_tables(2, 3)
    checked = 0
    for _ in range(50):
        t = tables[rng.randrange(len(tables))]
        x = random_globular_set(rng, max_dim=2, max_cells=12)
        homs = hom_gs(realize(t), x)
        tuples = product_for_table(
            t,
            lambda d: list(range(x.n_cells(d))),
            lambda d, c, b: x.boundary_iter(d, c, b, "s"),
            lambda d, c, b: x.boundary_iter(d, c, b, "t"),
        )
        assert len(homs) == len(tuples), (render_table(t), len(homs),
                                          len(tuples))
        checked += 1
    report(3, f"morphism counts equal compatible disk-tuple counts on "
              f"{checked} seeded random (table, target) pairs",
           time.time() - start)


def test_criterion_04_structural_boundaries():
    start = time.time()
    cat = StructuralCatalog(FreeProvider())
    checked = 0
    for i in range(1, 5):
        for l in range(1, i + 1):
            assert boundary_of(cat.comp(l, i)) == \
                (comp_pair(cat, l, i).f, comp_pair(cat, l, i).g)
            checked += 1
            assert boundary_of(cat.inverse(l, i)) == \
                (inverse_pair(cat, l, i).f, inverse_pair(cat, l, i).g)
            checked += 1
        for m in range(2, 5):
            p = comp_mary_pair(i, m)
            assert boundary_of(cat.comp_mary(i, m)) == (p.f, p.g)
            checked += 1
        a1 = assoc1_pair(cat, i)
        assert boundary_of(cat.assoc1(i)) == (a1.f, a1.g)
        checked += 1
        if i >= 2:
            a2 = assoc2_pair(cat, i)
            assert boundary_of(cat.assoc2(i)) == (a2.f, a2.g)
            checked += 1
        lp, rp = unit_constraint_pairs(cat, i)
        left, right = cat.unit_constraints(i)
        assert boundary_of(left) == (lp.f, lp.g)
        assert boundary_of(right) == (rp.f, rp.g)
        checked += 2
        li, ri = inverse_constraint_pairs(cat, i)
        ileft, iright = cat.inverse_constraints(i)
        assert boundary_of(ileft) == (li.f, li.g)
        assert boundary_of(iright) == (ri.f, ri.g)
        checked += 2
    for i in range(0, 5):
        assert boundary_of(cat.unit(i)) == (identity_term(i),
                                            identity_term(i))
        checked += 1
    # spot-check the base displays against raw cells
    t11 = parse_table("(1 1 | 0)")
    assert boundary_of(cat.comp(1, 1)) == (glob_cell(t11, 1, sigma(1)),
                                           glob_cell(t11, 0, tau(1)))
    assert boundary_of(cat.inverse(1, 2)) == (glob_cell(disk(2), 0, tau(2)),
                                              glob_cell(disk(2), 0, sigma(2)))
    report(4, f"{checked} structural boundary equations hold exactly "
              "(1 <= i <= 4, l <= i, m <= 4)", time.time() - start)


def test_criterion_05_negative_parallelism():
    cat = StructuralCatalog(FreeProvider())
    for i in (2, 3):
        with pytest.raises(NotParallel):
            assoc2_naive_pair(cat, i)
        pair = assoc2_pair(cat, i)  # construction validates parallelism
        assert pair.dom_dim == i
    report(5, "naive level-2 associativity pair rejected; corrected pair "
              "accepted")


def _check_equivalence_relation(model, cat, dims):
    for i in dims:
        n = model.gs.n_cells(i)
        related = {}
        for x in range(n):
            for y in range(n):
                related[(x, y)] = homotopy_related(model, x, y, i)
        # reflexivity witnessed by the unit
        unit = cat.unit(i)
        for x in range(n):
            w = eval_term(model, unit, (x,))
            assert model.src(i + 1, w) == x and model.tgt(i + 1, w) == x
            assert related[(x, x)] is not None
        # symmetry witnessed by the inverse one dimension up
        omega = cat.inverse(1, i + 1)
        for (x, y), h in related.items():
            if h is None:
                assert related[(y, x)] is None
                continue
            w = eval_term(model, omega, (h,))
            assert model.src(i + 1, w) == y and model.tgt(i + 1, w) == x
        # transitivity witnessed by composition one dimension up
        comp = cat.comp(1, i + 1)
        for (x, y), h in related.items():
            if h is None:
                continue
            for z in range(n):
                k = related[(y, z)]
                if k is None:
                    continue
                w = eval_term(model, comp, (k, h))
                assert model.src(i + 1, w) == x and model.tgt(i + 1, w) == z
                assert related[(x, z)] is not None


def test_criterion_06_homotopy_equivalence_relation():
    start = time.time()
    cat3, prov3 = standard_catalog(max_i=3)
    tower3 = prov3.as_tower()
    const = constant_model(5, tower3, trunc=3)
    _check_equivalence_relation(const, cat3, dims=(0, 1, 2))
    cat2, prov2 = standard_catalog(max_i=2)
    tower2 = prov2.as_tower()
    for group in (FiniteGroup.cyclic(2), FiniteGroup.cyclic(3),
                  FiniteGroup.symmetric(3)):
        model = group_model(group, tower2)
        _check_equivalence_relation(model, cat2, dims=(0, 1))
    report(6, "homotopy relation is an equivalence relation with "
              "unit/inverse/composition witnesses on the constant and "
              "group models, exhaustively", time.time() - start)


def test_criterion_07_pi1_of_group_models():
    _, prov = standard_catalog(max_i=2)
    tower = prov.as_tower()
    for group in (FiniteGroup.cyclic(2), FiniteGroup.cyclic(3),
                  FiniteGroup.symmetric(3)):
        start = time.time()
        model = group_model(group, tower)
        g = pi_n(model, 0, 1)
        elapsed = time.time() - start
        # the canonical bijection is the identity on cell indices
        assert g.order == group.order
        assert g.table == group.table
        assert g.unit == group.unit
        assert elapsed < 10.0
    report(7, "pi_1 of the strict group models equals the groups "
              "(tables identical under the canonical bijection)")


def test_criterion_08_weak_equivalence_checker():
    start = time.time()
    _, prov = standard_catalog(max_i=2)
    tower = prov.as_tower()
    z2 = group_model(FiniteGroup.cyclic(2), tower)
    # identity accepted
    perms = [list(range(z2.gs.n_cells(k))) for k in range(3)]
    _, ident = relabel(z2, perms)
    assert check_morphism(ident) and is_weak_equivalence(ident).ok
    # collapse to the point rejected through pi_1
    pt = one_point_model(tower)
    collapse = ModelMorphism(z2, pt, ((0,), (0, 0), (0, 0)))
    assert check_morphism(collapse)
    rep = is_weak_equivalence(collapse)
    assert not rep.ok and any("pi_1" in r for r in rep.reasons)
    # relabeled isomorphic models accepted
    z4 = group_model(FiniteGroup.cyclic(4), tower)
    _, iso = relabel(z4, [[0], [3, 0, 1, 2], [3, 0, 1, 2]])
    assert check_morphism(iso) and is_weak_equivalence(iso).ok
    report(8, "weak-equivalence checker accepts identity and relabeling, "
              "rejects the collapse through pi_1", time.time() - start)


def test_criterion_09_coherator_gate():
    start = time.time()
    bounds = Bounds(max_dim=2, max_size=6, max_len=2, levels=3)
    tower = build_tower("groupoid", "canonical", bounds)
    fib = is_pseudo_coherator_up_to(tower, bounds)
    assert fib.passed, fib.summary()
    gate = check_gate(tower, bounds)
    assert gate.cellular and gate.fibrant
    report(9, f"canonical groupoid tower at (dim 2, size 6, 3 levels) is "
              f"cellular and fibrant within bounds "
              f"({fib.total} pairs checked)", time.time() - start)


def test_criterion_10_strategy_properties():
    start = time.time()
    bounds = Bounds(max_dim=2, max_size=6, max_len=2, levels=2)
    bl = build_tower("groupoid", "bl", bounds)
    seen = set()
    for s in bl.symbols():
        assert s.pair not in seen
        seen.add(s.pair)
    red = build_tower("groupoid", "reduced", bounds)
    can = build_tower("groupoid", "canonical", bounds)
    from globular.extensions import pair_signature

    for lv in range(1, 3):
        red_sigs = {pair_signature(s.pair) for s in red.levels[lv].symbols}
        can_sigs = {pair_signature(s.pair) for s in can.levels[lv].symbols}
        assert red_sigs <= can_sigs
    report(10, "no duplicate adjunctions across levels; reduced levels are "
               "subsets of canonical levels at equal bounds",
           time.time() - start)


def test_criterion_11_admissibility_asymmetry():
    start = time.time()
    bounds = Bounds(max_dim=2, max_size=5, max_len=2, levels=0)
    tower = theta_zero(bounds)
    pairs = enumerate_parallel_pairs(tower, 0, bounds)
    witness = None
    for p in pairs:
        if p.f == p.g:
            continue
        if is_admissible(p) and not is_admissible(ParallelPair(p.g, p.f)):
            witness = p
            break
    assert witness is not None
    # the inverse-shaped pair is rejected in the category flavor
    prov = FreeProvider(admissible_only=True)
    cat = StructuralCatalog(prov)
    for i in (1, 2):
        with pytest.raises(NotAdmissible):
            cat.inverse(1, i)
    report(11, "found an admissible pair whose swap is not admissible; "
               "inverse pair rejected in the category flavor",
           time.time() - start)


def test_criterion_12_segal_sensitivity():
    start = time.time()
    _, prov = standard_catalog(max_i=2)
    tower = prov.as_tower()
    model = group_model(FiniteGroup.cyclic(3), tower)
    ok, witness = check_segal(model)
    assert ok, witness
    sym = next(s for s in model.ops if model.gs.n_cells(s.out_dim) > 1)
    table = dict(model.ops[sym])
    key = next(iter(sorted(table)))
    table[key] = (table[key] + 1) % model.gs.n_cells(sym.out_dim)
    model.ops[sym] = table
    bad, witness = check_segal(model)
    assert not bad and witness
    report(12, f"group model satisfies the product/boundary conditions; "
               f"single-entry corruption detected ({witness})",
           time.time() - start)


def test_criterion_13_omega_layering_roundtrip():
    start = time.time()
    # a tower with genuine three-deep dependencies: iterated compositions
    _, prov = standard_catalog(max_i=3)
    tower = prov.as_tower()
    pres = presentation_of(tower)
    assert len(pres.layers) == 3
    rng = random.Random(77)
    for trial in range(5):
        atts = pres.attachments()
        rng.shuffle(atts)
        cut1, cut2 = sorted((rng.randrange(len(atts)),
                             rng.randrange(len(atts))))
        scrambled = CellularPresentation(
            [atts[:cut1], atts[cut1:cut2], atts[cut2:]])
        layered = omega_layering(scrambled)
        assert sorted(presentation_signatures(layered)) == \
            sorted(presentation_signatures(pres))
        rebuilt = pushout_all(layered)
        assert tower_signatures(rebuilt) == tower_signatures(tower)
    report(13, "re-layered scrambles of a 3-layer presentation preserve "
               "the attachment set and push out to the same tower",
           time.time() - start)
