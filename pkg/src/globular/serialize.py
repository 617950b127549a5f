"""JSON import/export for globular sets, towers, models and presentations.

Serialization is deterministic: keys are sorted and all collections keep
their construction order, so identical inputs produce byte-identical
output.
"""

from __future__ import annotations

import json

from .coherators import Bounds, Tower
from .extensions import (
    Level,
    LiftingSymbol,
    ParallelPair,
    parse_term,
    render_table,
    render_term,
)
from .models import Model, ModelMorphism
from .pasting import GlobularSet, parse_table
from .wfs import Attachment, CellularPresentation, GenCofibration


def dumps(obj, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2) + "\n"
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# -- globular sets -----------------------------------------------------------------

def gs_to_dict(gs: GlobularSet) -> dict:
    return {
        "trunc": gs.trunc,
        "cells": [list(row) for row in gs.cells],
        "src": [list(row) for row in gs.src],
        "tgt": [list(row) for row in gs.tgt],
    }


def gs_from_dict(data: dict) -> GlobularSet:
    return GlobularSet(
        int(data["trunc"]),
        tuple(tuple(row) for row in data["cells"]),
        tuple(tuple(int(x) for x in row) for row in data["src"]),
        tuple(tuple(int(x) for x in row) for row in data["tgt"]),
    )


# -- towers ------------------------------------------------------------------------

def tower_to_dict(tower: Tower) -> dict:
    levels = []
    for level in tower.levels:
        levels.append({
            "index": level.index,
            "symbols": [
                {
                    "id": sym.uid,
                    "dim": sym.out_dim,
                    "codomain": render_table(sym.codomain),
                    "pair": {"f": render_term(sym.pair.f),
                             "g": render_term(sym.pair.g)},
                }
                for sym in level.symbols
            ],
        })
    b = tower.bounds
    return {
        "flavor": tower.flavor,
        "strategy": tower.strategy,
        "bounds": {"max_dim": b.max_dim, "max_size": b.max_size,
                   "max_len": b.max_len, "levels": b.levels},
        "levels": levels,
    }


def tower_from_dict(data: dict) -> Tower:
    b = data["bounds"]
    bounds = Bounds(int(b["max_dim"]), int(b["max_size"]),
                    int(b["max_len"]), int(b["levels"]))
    tower = Tower(data["flavor"], data["strategy"], bounds, [])
    names: dict[str, LiftingSymbol] = {}
    for level_data in data["levels"]:
        symbols = []
        for sd in level_data["symbols"]:
            f = parse_term(sd["pair"]["f"], names)
            g = parse_term(sd["pair"]["g"], names)
            sym = LiftingSymbol(int(sd["id"]), int(level_data["index"]),
                                ParallelPair(f, g))
            names[sym.name] = sym
            symbols.append(sym)
        tower.levels.append(Level(int(level_data["index"]), tuple(symbols)))
    return tower


# -- models ------------------------------------------------------------------------

def model_to_dict(model: Model) -> dict:
    ops = {}
    for sym, table in model.ops.items():
        ops[sym.name] = [{"args": list(args), "out": out}
                         for args, out in sorted(table.items())]
    out = gs_to_dict(model.gs)
    out["ops"] = ops
    out["tower"] = tower_to_dict(model.tower)
    return out


def model_from_dict(data: dict, tower: Tower | None = None) -> Model:
    if tower is None:
        tower = tower_from_dict(data["tower"])
    gs = gs_from_dict(data)
    model = Model(tower, gs.trunc, gs)
    names = tower.symbol_by_name()
    for name, entries in data.get("ops", {}).items():
        sym = names.get(name)
        if sym is None:
            raise ValueError(f"model references unknown symbol {name}")
        model.ops[sym] = {tuple(int(x) for x in e["args"]): int(e["out"])
                          for e in entries}
    return model


def morphism_to_dict(m: ModelMorphism) -> dict:
    return {"mapping": [list(row) for row in m.mapping]}


def morphism_from_dict(data: dict, dom: Model, cod: Model) -> ModelMorphism:
    return ModelMorphism(dom, cod,
                         tuple(tuple(int(x) for x in row)
                               for row in data["mapping"]))


# -- presentations ------------------------------------------------------------------

def presentation_to_dict(pres: CellularPresentation) -> dict:
    return {
        "layers": [
            [
                {
                    "ref": att.ref,
                    "table": render_table(att.cof.table),
                    "dim": att.cof.dim,
                    "pair": {"f": render_term(att.pair.f),
                             "g": render_term(att.pair.g)},
                }
                for att in layer
            ]
            for layer in pres.layers
        ]
    }


def presentation_from_dict(data: dict) -> CellularPresentation:
    names: dict[str, LiftingSymbol] = {}
    layers: list[list[Attachment]] = []
    for li, layer_data in enumerate(data["layers"]):
        layer = []
        for ad in layer_data:
            f = parse_term(ad["pair"]["f"], names)
            g = parse_term(ad["pair"]["g"], names)
            pair = ParallelPair(f, g)
            ref = int(ad["ref"])
            att = Attachment(ref,
                             GenCofibration(parse_table(ad["table"]),
                                            int(ad["dim"])),
                             pair)
            sym = LiftingSymbol(ref, li + 1, pair)
            names[sym.name] = sym
            layer.append(att)
        layers.append(layer)
    return CellularPresentation(layers)
