import pytest

from globular.coherators import Bounds, build_tower, theta_zero
from globular.errors import ProviderFailure
from globular.extensions import (
    Level,
    add_liftings,
    boundary_of,
    identity_term,
    make_parallel_pair,
    substitute,
    symbol_term,
)
from globular.models import FiniteGroup, ModelProvider, eval_term, group_model
from globular.structural import FreeProvider, StructuralCatalog, TowerProvider
from globular.wfs import (
    CellularPresentation,
    check_gate,
    lift_into,
    omega_layering,
    presentation_of,
    presentation_signatures,
    pushout_all,
    pushout_layer,
    tower_signatures,
)


BOUNDS = Bounds(max_dim=1, max_size=6, max_len=2, levels=2)


@pytest.fixture(scope="module")
def tower():
    return build_tower("groupoid", "canonical", BOUNDS)


def test_pushout_layer_empty_is_identity_step():
    base = Level(0, ())
    lvl = pushout_layer([base], [])
    assert lvl.symbols == ()


def test_pushout_layer_single_pair():
    base = Level(0, ())
    p = make_parallel_pair(identity_term(0), identity_term(0))
    lvl = pushout_layer([base], [p])
    assert len(lvl.symbols) == 1


def test_layered_pushouts_match_sequential(tower):
    # a layer of independent pairs equals sequential single-pair pushouts
    pres = presentation_of(tower)
    flat = CellularPresentation([[att] for att in pres.layers[0]]
                                + [pres.layers[1]])
    seq = pushout_all(flat)
    assert tower_signatures(seq) == tower_signatures(tower)


def test_presentation_roundtrip(tower):
    rebuilt = pushout_all(presentation_of(tower))
    assert tower_signatures(rebuilt) == tower_signatures(tower)


def test_omega_layering_fixed_point():
    # duplicate-free towers are already layered by dependency depth
    bl = build_tower("groupoid", "bl", Bounds(2, 6, 2, 2))
    pres = presentation_of(bl)
    layered = omega_layering(pres)
    assert [len(l) for l in layered.layers] == [len(l) for l in pres.layers]
    assert [[a.ref for a in l] for l in layered.layers] == \
        [[a.ref for a in l] for l in pres.layers]
    assert presentation_signatures(layered) == presentation_signatures(pres)


def test_omega_layering_moves_late_attachments(tower):
    pres = presentation_of(tower)
    # push a dependency-free attachment into the last layer
    early = pres.layers[0][0]
    scrambled = CellularPresentation(
        [pres.layers[0][1:], pres.layers[1] + [early]])
    layered = omega_layering(scrambled)
    assert early.ref in [a.ref for a in layered.layers[0]]
    rebuilt = pushout_all(layered)
    assert tower_signatures(rebuilt) == tower_signatures(tower)


def test_omega_layering_respects_dependencies(tower):
    pres = omega_layering(presentation_of(tower))
    seen: set[int] = set()
    for layer in pres.layers:
        for att in layer:
            from globular.extensions import symbols_of

            for s in symbols_of(att.pair.f) | symbols_of(att.pair.g):
                assert s.uid in seen
        seen.update(a.ref for a in layer)


def test_gate_on_canonical(tower):
    rep = check_gate(tower)
    assert rep.cellular and rep.fibrant and rep.is_coherator_within_bounds


def test_gate_bare_base_cellular_but_not_fibrant():
    rep = check_gate(theta_zero(Bounds(1, 4, 2, 0)))
    assert rep.cellular
    assert not rep.fibrant


def test_gate_truncated_tower_fails_with_witnesses():
    from globular.coherators import Tower

    bounds = Bounds(max_dim=2, max_size=6, max_len=2, levels=2)
    full = build_tower("groupoid", "canonical", bounds)
    damaged = Tower(full.flavor, full.strategy, bounds,
                    full.levels[:-1] + [Level(2, full.levels[2].symbols[:3])])
    rep = check_gate(damaged)
    assert not rep.fibrant
    assert rep.fibrancy.failures


def test_lift_into_self_is_identity_like():
    # with no duplicate adjunctions the self-morphism fixes every symbol
    bl = build_tower("groupoid", "bl", BOUNDS)
    assignment = lift_into(bl, TowerProvider(bl))
    assert all(assignment[s] == symbol_term(s) for s in bl.symbols())


def test_lift_into_self_collapses_duplicates(tower):
    # re-adjoined pairs land on the first adjunction of the same pair
    assignment = lift_into(tower, TowerProvider(tower))
    index = tower.pair_index()
    assert all(assignment[s] == symbol_term(index[s.pair])
               for s in tower.symbols())


def test_lift_into_model_provider(catalog, z3_model):
    _, _, cat_tower = catalog
    assignment = lift_into(cat_tower, ModelProvider(z3_model))
    assert set(assignment) == set(cat_tower.symbols())
    for sym, term in assignment.items():
        assert boundary_of(term) == boundary_of(symbol_term(sym)) \
            if sym.out_dim >= 1 else True


def test_lift_interpretation_commutes_with_eval(catalog, z3_model):
    cat, _, cat_tower = catalog
    assignment = lift_into(cat_tower, ModelProvider(z3_model))
    nabla = cat.comp(1, 1)
    interp = substitute(nabla, assignment)
    for a in range(3):
        for b in range(3):
            assert eval_term(z3_model, interp, (a, b)) == \
                eval_term(z3_model, nabla, (a, b))


def test_category_tower_lifts_into_admissible_provider():
    bounds = Bounds(max_dim=1, max_size=6, max_len=2, levels=1)
    cat_tower = build_tower("category", "canonical", bounds)
    provider = FreeProvider(admissible_only=True)
    assignment = lift_into(cat_tower, provider)
    assert len(assignment) == len(cat_tower.symbols())


def test_lift_into_fails_on_missing_pairs(tower, catalog):
    _, _, cat_tower = catalog
    # the bare base provider cannot resolve anything
    class Nothing:
        def resolve(self, pair):
            raise ProviderFailure(pair)

    with pytest.raises(ProviderFailure):
        lift_into(cat_tower, Nothing())
