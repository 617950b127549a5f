"""Cellular presentations, the fibrant-and-cellular gate, morphisms into
lifting providers, and finite re-layering of presentations.

Retracts and transfinite constructions have no finite decision procedure;
everything here works with explicit finite witnesses (layered presentations
and bounded fibrancy reports).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coherators import Bounds, FibrancyReport, Tower, is_pseudo_coherator_up_to
from .errors import InvalidPair
from .extensions import (
    Level,
    LiftingSymbol,
    ParallelPair,
    Term,
    add_liftings,
    boundary_of,
    compose_sum,
    make_parallel_pair,
    pair_signature,
    precompose,
    rename_symbols,
    substitute,
    symbols_of,
    symbol_signature,
)
from .pasting import Table


@dataclass(frozen=True)
class GenCofibration:
    """The free adjunction shape: a parallel pair of arrows D_dim -> table,
    then its lifting."""

    table: Table
    dim: int


@dataclass(frozen=True)
class Attachment:
    ref: int  # stable id used by later layers to reference this adjunction
    cof: GenCofibration
    pair: ParallelPair


@dataclass
class CellularPresentation:
    layers: list[list[Attachment]] = field(default_factory=list)

    def attachments(self) -> list[Attachment]:
        return [a for layer in self.layers for a in layer]


def pushout_layer(levels: list[Level], layer: list[ParallelPair]) -> Level:
    """One stage: the pushout along the sum of the layer's generating
    arrows, realized as the formal adjunction of one lifting per pair."""
    return add_liftings(levels, layer)


def presentation_of(tower: Tower) -> CellularPresentation:
    """The cellularity witness carried by the tower's own layering."""
    layers = []
    for level in tower.levels[1:]:
        layers.append([
            Attachment(sym.uid,
                       GenCofibration(sym.codomain, sym.pair.dom_dim),
                       sym.pair)
            for sym in level.symbols
        ])
    return CellularPresentation(layers)


def pushout_all(pres: CellularPresentation, flavor: str = "groupoid",
                strategy: str = "rebuilt") -> Tower:
    """Rebuild a tower from a presentation by sequential pushouts.  Pairs in
    later layers reference earlier adjunctions through their attachment ids
    and are renamed onto the fresh symbols as the rebuild proceeds."""
    ref_to_new: dict[int, LiftingSymbol] = {}
    levels = [Level(0, ())]
    max_dim = 0
    max_len = 1
    for layer in pres.layers:
        pairs = []
        for att in layer:
            old_syms = symbols_of(att.pair.f) | symbols_of(att.pair.g)
            mapping = {}
            for s in old_syms:
                if s.uid not in ref_to_new:
                    raise InvalidPair(
                        f"attachment {att.ref} references later adjunction {s.uid}")
                mapping[s] = ref_to_new[s.uid]
            pairs.append(make_parallel_pair(
                rename_symbols(att.pair.f, mapping),
                rename_symbols(att.pair.g, mapping)))
        level = pushout_layer(levels, pairs)
        for att, sym in zip(layer, level.symbols):
            ref_to_new[att.ref] = sym
            max_dim = max(max_dim, sym.out_dim)
            max_len = max(max_len, sym.codomain.length)
        levels.append(level)
    bounds = Bounds(max_dim, 0, max_len, len(pres.layers))
    return Tower(flavor, strategy, bounds, levels)


def tower_signatures(tower: Tower) -> list[str]:
    """Renaming-invariant signatures of all adjoined symbols."""
    return sorted(symbol_signature(s) for s in tower.symbols())


def presentation_signatures(pres: CellularPresentation) -> list[str]:
    return sorted(pair_signature(a.pair) for a in pres.attachments())


# -- re-layering ------------------------------------------------------------------

def omega_layering(pres: CellularPresentation) -> CellularPresentation:
    """Re-layer a presentation by dependency depth: each attachment moves to
    the earliest layer after everything its pair references.  The set of
    attachments (and hence the pushed-out tower) is unchanged."""
    by_ref = {a.ref: a for a in pres.attachments()}
    depth: dict[int, int] = {}

    def depth_of(ref: int) -> int:
        if ref in depth:
            return depth[ref]
        att = by_ref[ref]
        syms = symbols_of(att.pair.f) | symbols_of(att.pair.g)
        d = 0 if not syms else 1 + max(depth_of(s.uid) for s in syms)
        depth[ref] = d
        return d

    order: dict[int, tuple[int, int]] = {}
    for li, layer in enumerate(pres.layers):
        for pi, att in enumerate(layer):
            order[att.ref] = (li, pi)

    max_depth = max((depth_of(a.ref) for a in pres.attachments()), default=-1)
    layers: list[list[Attachment]] = [[] for _ in range(max_depth + 1)]
    for att in sorted(pres.attachments(), key=lambda a: order[a.ref]):
        layers[depth_of(att.ref)].append(att)
    return CellularPresentation(layers)


# -- the fibrant-and-cellular gate ---------------------------------------------------

@dataclass
class GateReport:
    cellular: bool
    fibrancy: FibrancyReport
    bounds: Bounds

    @property
    def fibrant(self) -> bool:
        return self.fibrancy.passed

    @property
    def is_coherator_within_bounds(self) -> bool:
        return self.cellular and self.fibrant

    def summary(self) -> str:
        return (f"cellular: {self.cellular}; {self.fibrancy.summary()}; "
                f"coherator within bounds: {self.is_coherator_within_bounds}")


def check_gate(tower: Tower, bounds: Bounds | None = None,
               pair_level: int | None = None) -> GateReport:
    """Both directions of the fibrant-and-cellular characterization, as a
    bounded consistency check: the tower must be reproducible from its own
    cellular presentation, and bounded-fibrant."""
    bounds = bounds or tower.bounds
    rebuilt = pushout_all(presentation_of(tower))
    cellular = tower_signatures(rebuilt) == tower_signatures(tower)
    fib = is_pseudo_coherator_up_to(tower, bounds, pair_level)
    return GateReport(cellular, fib, bounds)


# -- morphisms out of a tower -----------------------------------------------------

def lift_into(tower: Tower, provider) -> dict[LiftingSymbol, Term]:
    """A morphism of extensions out of the tower: assign to each adjoined
    symbol a lifting of its (translated) pair in the provider's world,
    level by level."""
    assignment: dict[LiftingSymbol, Term] = {}
    for level in tower.levels[1:]:
        for sym in level.symbols:
            f = substitute(sym.pair.f, assignment)
            g = substitute(sym.pair.g, assignment)
            assignment[sym] = provider.resolve(make_parallel_pair(f, g))
    return assignment


def interpret(term: Term, assignment: dict[LiftingSymbol, Term]) -> Term:
    """Transport a term along a lift_into assignment."""
    return substitute(term, assignment)
