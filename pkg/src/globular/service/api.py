"""Pure handlers behind the service endpoints.

Each takes a request model and returns a response model; the FastAPI app
and the command line both dispatch through these, so a local run and a
remote call see identical behaviour.
"""

from __future__ import annotations

from ..coherators import (
    Bounds,
    Tower,
    build_tower,
    is_pseudo_coherator_up_to,
)
from ..errors import EvalError, GlobularError
from ..extensions import (
    boundary_of,
    dom_dim,
    parse_term,
    render_table,
    render_term,
    symbol_signature,
    symbols_of,
)
from ..models import (
    ModelMorphism,
    check_morphism,
    eval_term,
    is_weak_equivalence,
    pi0,
    pi_n,
)
from ..pasting import (
    enumerate_tables,
    hom_theta0,
    parse_table,
    realize,
    render_table as table_text,
    render_tree,
    table_to_tree,
)
from ..serialize import (
    gs_to_dict,
    model_from_dict,
    presentation_from_dict,
    presentation_to_dict,
    tower_from_dict,
    tower_to_dict,
)
from ..structural import FreeProvider, StructuralCatalog, TowerProvider
from ..wfs import check_gate, lift_into, omega_layering
from . import schemas as s


def enumerate_tables_handler(req: s.EnumerateTablesRequest) -> s.EnumerateTablesResponse:
    tables = enumerate_tables(req.max_dim, req.max_len)
    trees = [render_tree(table_to_tree(t)) for t in tables] if req.trees else None
    return s.EnumerateTablesResponse(tables=[table_text(t) for t in tables],
                                     trees=trees)


def hom_handler(req: s.HomRequest) -> s.HomResponse:
    src = parse_table(req.src)
    dst = parse_table(req.dst)
    morphisms = hom_theta0(src, dst)
    return s.HomResponse(
        count=len(morphisms),
        morphisms=[[list(row) for row in m.mapping] for m in morphisms],
    )


def realize_handler(req: s.RealizeRequest) -> s.RealizeResponse:
    gs = realize(parse_table(req.table), req.trunc)
    return s.RealizeResponse(**gs_to_dict(gs))


def build_coherator_handler(req: s.BuildCoheratorRequest) -> s.BuildCoheratorResponse:
    bounds = Bounds(req.max_dim, req.max_size, req.max_len, req.levels)
    tower = build_tower(req.flavor, req.strategy, bounds)
    return s.BuildCoheratorResponse(
        tower=tower_to_dict(tower),
        level_sizes=[len(lv.symbols) for lv in tower.levels],
    )


_OP_ARGS = {
    "comp": ("l", "i"),
    "comp_mary": ("i", "m"),
    "assoc1": ("i",),
    "assoc2": ("i",),
    "unit": ("i",),
    "unit_constraints": ("i",),
    "inverse": ("l", "i"),
    "inverse_constraints": ("i",),
}


def parse_op(spec: str) -> tuple[str, dict[str, int]]:
    """Parse an operation spec like 'comp:l=2,i=3' or 'unit:i=0'."""
    name, _, rest = spec.partition(":")
    name = name.strip()
    if name not in _OP_ARGS:
        raise GlobularError(f"unknown operation {name!r}")
    kwargs: dict[str, int] = {}
    if rest:
        for piece in rest.split(","):
            key, _, val = piece.partition("=")
            kwargs[key.strip()] = int(val)
    missing = [a for a in _OP_ARGS[name] if a not in kwargs]
    if missing:
        raise GlobularError(f"operation {name} needs parameters {missing}")
    return name, kwargs


def derive_handler(req: s.DeriveRequest) -> s.DeriveResponse:
    name, kwargs = parse_op(req.op)
    if req.tower is not None:
        provider = TowerProvider(tower_from_dict(req.tower))
    else:
        provider = FreeProvider()
    catalog = StructuralCatalog(provider)
    entry = getattr(catalog, name)(**{k: kwargs[k]
                                      for k in _OP_ARGS[name]})
    terms = entry if isinstance(entry, tuple) else (entry,)
    rendered = " ; ".join(render_term(t) for t in terms)
    boundary = None
    if req.print_boundary:
        parts = []
        for t in terms:
            bf, bg = boundary_of(t)
            parts.append({"src": render_term(bf), "tgt": render_term(bg)})
        boundary = parts[0] if len(parts) == 1 else {"entries": parts}
    symbols = {}
    for t in terms:
        for sym in sorted(symbols_of(t), key=lambda x: x.uid):
            symbols[sym.name] = {
                "dim": sym.out_dim,
                "codomain": render_table(sym.codomain),
                "pair": {"f": render_term(sym.pair.f),
                         "g": render_term(sym.pair.g)},
                "signature": symbol_signature(sym),
            }
    return s.DeriveResponse(op=req.op, term=rendered, boundary=boundary,
                            symbols=symbols)


def eval_handler(req: s.EvalRequest) -> s.EvalResponse:
    model = model_from_dict(req.model)
    term = parse_term(req.term, model.tower.symbol_by_name())
    out = eval_term(model, term, tuple(req.args))
    dim = dom_dim(term)
    return s.EvalResponse(dim=dim, cell=out, label=model.gs.cells[dim][out])


def pi_handler(req: s.PiRequest) -> s.PiResponse:
    model = model_from_dict(req.model)
    if req.i == 0:
        comps = pi0(model)
        return s.PiResponse(i=0, base=req.base, order=len(comps),
                            names=[str(list(c)) for c in comps],
                            table=[], unit=0)
    group = pi_n(model, req.base, req.i)
    return s.PiResponse(i=req.i, base=req.base, order=group.order,
                        names=list(group.names),
                        table=[list(row) for row in group.table],
                        unit=group.unit)


def weq_handler(req: s.WeqRequest) -> s.WeqResponse:
    dom = model_from_dict(req.src_model)
    # both models must live over one symbol universe for table comparison
    cod_model = model_from_dict(req.dst_model, tower=dom.tower)
    morph = ModelMorphism(dom, cod_model,
                          tuple(tuple(int(x) for x in row)
                                for row in req.mapping))
    valid = check_morphism(morph)
    if not valid:
        return s.WeqResponse(weak_equivalence=False, valid_morphism=False,
                             bound=0, reasons=["not a morphism of models"])
    rep = is_weak_equivalence(morph)
    return s.WeqResponse(weak_equivalence=rep.ok, valid_morphism=True,
                         bound=rep.bound, reasons=rep.reasons)


def check_fibrant_handler(req: s.CheckFibrantRequest) -> s.CheckFibrantResponse:
    tower = tower_from_dict(req.tower)
    b = tower.bounds
    bounds = Bounds(
        req.max_dim if req.max_dim is not None else b.max_dim,
        req.max_size if req.max_size is not None else b.max_size,
        req.max_len if req.max_len is not None else b.max_len,
        b.levels,
    )
    report = check_gate(tower, bounds, req.pair_level)
    failures = [{"f": render_term(p.f), "g": render_term(p.g),
                 "codomain": render_table(p.codomain)}
                for p in report.fibrancy.failures[:50]]
    return s.CheckFibrantResponse(
        cellular=report.cellular,
        fibrant=report.fibrant,
        coherator_within_bounds=report.is_coherator_within_bounds,
        pair_level=report.fibrancy.pair_level,
        pairs_checked=report.fibrancy.total,
        failures=failures,
        summary=report.summary(),
    )


def relayer_handler(req: s.RelayerRequest) -> s.RelayerResponse:
    pres = presentation_from_dict(req.presentation)
    out = omega_layering(pres)
    return s.RelayerResponse(presentation=presentation_to_dict(out),
                             layer_sizes=[len(l) for l in out.layers])


def lift_handler(req: s.LiftRequest) -> s.LiftResponse:
    tower = tower_from_dict(req.tower)
    model = model_from_dict(req.model)
    from ..models import ModelProvider

    assignment = lift_into(tower, ModelProvider(model))
    return s.LiftResponse(assignment={
        sym.name: render_term(term) for sym, term in assignment.items()
    })
