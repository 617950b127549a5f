"""Bounded construction of coherator towers.

A tower starts from the bare pasting site (level 0, no symbols) and grows by
formally adjoining liftings for the parallel pairs enumerable within the
bounds.  Three adjunction strategies are supported: adjoin everything,
adjoin only pairs never seen before, or adjoin only pairs that do not
already have a lifting within the search bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import GlobularError
from .extensions import (
    Glob,
    Level,
    LiftApplied,
    LiftingSymbol,
    ParallelPair,
    SumArrow,
    Term,
    add_liftings,
    boundary_of,
    identity_term,
    is_admissible,
    precompose,
    render_term,
    symbol_term,
    symbol_weight,
    term_size,
)
from .globes import identity, sigma_to, tau_to
from .pasting import CellRef, Table, enumerate_tables, realization

FLAVOR_GROUPOID = "groupoid"
FLAVOR_CATEGORY = "category"
STRATEGY_CANONICAL = "canonical"
STRATEGY_BL = "bl"
STRATEGY_REDUCED = "reduced"

FLAVORS = (FLAVOR_GROUPOID, FLAVOR_CATEGORY)
STRATEGIES = (STRATEGY_CANONICAL, STRATEGY_BL, STRATEGY_REDUCED)


@dataclass(frozen=True)
class Bounds:
    """Enumeration bounds: output dimension, unfolded term size, codomain
    table length, and number of adjunction stages above the base."""

    max_dim: int
    max_size: int
    max_len: int
    levels: int

    def __post_init__(self):
        if min(self.max_dim, self.max_size, self.max_len, self.levels) < 0:
            raise GlobularError("bounds must be non-negative")


@dataclass
class Tower:
    flavor: str
    strategy: str
    bounds: Bounds
    levels: list[Level] = field(default_factory=lambda: [Level(0, ())])

    def symbols(self) -> list[LiftingSymbol]:
        return [s for lv in self.levels for s in lv.symbols]

    def symbols_up_to(self, level: int) -> list[LiftingSymbol]:
        return [s for lv in self.levels[: level + 1] for s in lv.symbols]

    def symbol_by_name(self) -> dict[str, LiftingSymbol]:
        return {s.name: s for s in self.symbols()}

    def pair_index(self) -> dict[ParallelPair, LiftingSymbol]:
        """First symbol adjoined for each pair (cached per tower size)."""
        n = sum(len(lv.symbols) for lv in self.levels)
        cached = getattr(self, "_pair_index_cache", None)
        if cached is not None and cached[0] == n:
            return cached[1]
        out: dict[ParallelPair, LiftingSymbol] = {}
        for s in self.symbols():
            out.setdefault(s.pair, s)
        self._pair_index_cache = (n, out)
        return out

    @property
    def top_level(self) -> int:
        return len(self.levels) - 1


def theta_zero(bounds: Bounds | None = None) -> Tower:
    """The bare base: a tower with no adjoined liftings."""
    return Tower(FLAVOR_GROUPOID, STRATEGY_CANONICAL,
                 bounds or Bounds(0, 0, 1, 0))


# -- term enumeration ----------------------------------------------------------

class TermEnumerator:
    """Deterministic enumeration of normal-form terms over a fixed symbol
    set, with memoization per (dimension, codomain, size budget)."""

    def __init__(self, symbols):
        self.symbols = list(symbols)
        self._terms: dict = {}
        self._sums: dict = {}

    def terms(self, i: int, table: Table, smax: int) -> list[Term]:
        key = (i, table, smax)
        cached = self._terms.get(key)
        if cached is not None:
            return cached
        out: list[Term] = []
        if smax >= 1 and i <= table.dimension:
            for idx in range(realization(table).n_cells(i)):
                out.append(Glob(table, CellRef(i, idx)))
        for sym in self.symbols:
            if sym.out_dim != i:
                continue
            w = symbol_weight(sym)
            if w + sym.codomain.length > smax:
                continue
            for post in self.sum_arrows(sym.codomain, table, smax - w):
                out.append(LiftApplied(sym, post, identity(i)))
        out.sort(key=lambda t: (term_size(t), render_term(t)))
        self._terms[key] = out
        return out

    def sum_arrows(self, domain: Table, table: Table, budget: int) -> list[SumArrow]:
        key = (domain, table, budget)
        cached = self._sums.get(key)
        if cached is not None:
            return cached
        out: list[SumArrow] = []
        m = domain.length

        def rec(k: int, acc: list[Term], left: int):
            if k == m:
                out.append(SumArrow(domain, table, tuple(acc)))
                return
            remaining_min = m - k - 1  # later components need >= 1 node each
            for cand in self.terms(domain.tops[k], table, left - remaining_min):
                if k > 0:
                    b = domain.bottoms[k - 1]
                    lhs = precompose(acc[-1], sigma_to(domain.tops[k - 1], b))
                    rhs = precompose(cand, tau_to(domain.tops[k], b))
                    if lhs != rhs:
                        continue
                acc.append(cand)
                rec(k + 1, acc, left - term_size(cand))
                acc.pop()

        rec(0, [], budget)
        self._sums[key] = out
        return out


def enumerate_parallel_pairs(tower: Tower, level: int, bounds: Bounds | None = None,
                             flavor: str | None = None) -> list[ParallelPair]:
    """All parallel pairs formable at a tower level within the bounds, in a
    reproducible order; the category flavor keeps only admissible pairs."""
    bounds = bounds or tower.bounds
    flavor = flavor or tower.flavor
    if level > tower.top_level:
        raise GlobularError(f"level {level} not built")
    enum = TermEnumerator(tower.symbols_up_to(level))
    pairs: list[ParallelPair] = []
    for table in enumerate_tables(bounds.max_dim, bounds.max_len):
        for i in range(bounds.max_dim):
            terms = enum.terms(i, table, bounds.max_size)
            if i == 0:
                group_list = [terms] if terms else []
            else:
                groups: dict = {}
                for t in terms:
                    groups.setdefault(boundary_of(t), []).append(t)
                group_list = list(groups.values())
            for group in group_list:
                for f in group:
                    for g in group:
                        pairs.append(ParallelPair(f, g))
    if flavor == FLAVOR_CATEGORY:
        pairs = [p for p in pairs if is_admissible(p)]
    return pairs


# -- lifting search -------------------------------------------------------------

def has_lifting(tower: Tower, pair: ParallelPair,
                search_bound: int | None = None) -> Term | None:
    """A term one dimension up whose boundary is the pair, if one exists:
    first by direct symbol lookup, then by bounded term search."""
    sym = tower.pair_index().get(pair)
    if sym is not None:
        return symbol_term(sym)
    bound = search_bound if search_bound is not None else tower.bounds.max_size
    enum = TermEnumerator(tower.symbols())
    target = (pair.f, pair.g)
    for t in enum.terms(pair.dom_dim + 1, pair.codomain, bound):
        if boundary_of(t) == target:
            return t
    return None


# -- tower construction ----------------------------------------------------------

def build_tower(flavor: str, strategy: str, bounds: Bounds,
                progress=None) -> Tower:
    if flavor not in FLAVORS:
        raise GlobularError(f"unknown flavor {flavor!r}")
    if strategy not in STRATEGIES:
        raise GlobularError(f"unknown strategy {strategy!r}")
    tower = Tower(flavor, strategy, bounds)
    adjoined: set[ParallelPair] = set()
    for step in range(bounds.levels):
        pairs = enumerate_parallel_pairs(tower, step, bounds, flavor)
        if strategy == STRATEGY_BL:
            pairs = [p for p in pairs if p not in adjoined]
        elif strategy == STRATEGY_REDUCED:
            pairs = [p for p in pairs
                     if has_lifting(tower, p, bounds.max_size) is None]
        level = add_liftings(tower.levels, pairs)
        tower.levels.append(level)
        adjoined.update(pairs)
        if progress is not None:
            progress(step + 1, len(level.symbols))
    if flavor == FLAVOR_CATEGORY and bounds.levels >= 1:
        _check_identity_pairs(tower, bounds)
    return tower


def _check_identity_pairs(tower: Tower, bounds: Bounds) -> None:
    """The category flavor relies on identity pairs being adjoined first;
    enforce that the first stage contains them."""
    level1 = {s.pair for s in tower.levels[1].symbols}
    for i in range(bounds.max_dim):
        ident = identity_term(i)
        if ParallelPair(ident, ident) not in level1:
            raise GlobularError(
                f"category-flavor tower lacks the identity pair at D_{i}"
            )


# -- bounded fibrancy -------------------------------------------------------------

@dataclass
class FibrancyReport:
    passed: bool
    pair_level: int
    total: int
    failures: list[ParallelPair]
    bounds: Bounds

    def summary(self) -> str:
        status = "fibrant" if self.passed else "not fibrant"
        return (f"{status} within bounds {self.bounds} "
                f"(pairs at level {self.pair_level}: {self.total}, "
                f"failures: {len(self.failures)})")


def is_pseudo_coherator_up_to(tower: Tower, bounds: Bounds | None = None,
                              pair_level: int | None = None,
                              search_bound: int | None = None) -> FibrancyReport:
    """Check that every pair enumerable at ``pair_level`` has a lifting
    somewhere in the tower.  The verdict is always relative to the bounds."""
    bounds = bounds or tower.bounds
    if pair_level is None:
        pair_level = max(0, tower.top_level - 1)
    pairs = enumerate_parallel_pairs(tower, pair_level, bounds)
    index = tower.pair_index()
    failures = [p for p in pairs
                if p not in index and has_lifting(tower, p, search_bound) is None]
    return FibrancyReport(not failures, pair_level, len(pairs), failures, bounds)
