"""Named structural operations, built over a lifting provider.

A provider resolves parallel pairs to lifting terms: a tower resolves by
symbol lookup and bounded search, the free provider adjoins fresh symbols
on demand, and a model resolves through its operation tables.  The catalog
memoizes one chosen lifting per named operation and exposes the pair
builders so the boundary displays can be checked independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coherators import Bounds, Tower, has_lifting
from .errors import NotAdmissible, ProviderFailure
from .extensions import (
    GlobularArrow,
    Level,
    LiftingSymbol,
    ParallelPair,
    Term,
    boundary_of,
    compose_sum,
    glob_cell,
    globe_arrow,
    globe_sum_arrow,
    identity_term,
    inclusion_arrow,
    is_admissible,
    level_of_term,
    make_parallel_pair,
    make_sum_arrow,
    push,
    summand_component,
    symbol_term,
)
from .globes import sigma, tau
from .pasting import Table, disk


class FreeProvider:
    """Resolves every valid pair by adjoining a fresh lifting symbol.

    One symbol is memoized per pair; ``fresh`` forces a second, distinct
    adjunction of the same pair.  In the category flavor, pairs outside the
    admissible class are rejected.
    """

    def __init__(self, admissible_only: bool = False):
        self.admissible_only = admissible_only
        self._memo: dict[ParallelPair, LiftingSymbol] = {}
        self._symbols: list[LiftingSymbol] = []

    def _adjoin(self, pair: ParallelPair) -> LiftingSymbol:
        pair = make_parallel_pair(pair.f, pair.g)
        if self.admissible_only and not is_admissible(pair):
            raise NotAdmissible(
                f"pair of D_{pair.dom_dim} arrows into "
                f"{pair.codomain} is not admissible"
            )
        level = 1 + max(level_of_term(pair.f), level_of_term(pair.g))
        sym = LiftingSymbol(len(self._symbols), level, pair)
        self._symbols.append(sym)
        return sym

    def resolve(self, pair: ParallelPair) -> Term:
        sym = self._memo.get(pair)
        if sym is None:
            sym = self._adjoin(pair)
            self._memo[pair] = sym
        return symbol_term(sym)

    def fresh(self, pair: ParallelPair) -> Term:
        return symbol_term(self._adjoin(pair))

    def as_tower(self) -> Tower:
        """Package the adjoined symbols as a tower, layered by dependency."""
        depth = max((s.level for s in self._symbols), default=0)
        max_dim = max((s.out_dim for s in self._symbols), default=0)
        max_len = max((s.codomain.length for s in self._symbols), default=1)
        bounds = Bounds(max_dim, 0, max_len, depth)
        levels = [Level(0, ())]
        for n in range(1, depth + 1):
            levels.append(Level(n, tuple(s for s in self._symbols
                                         if s.level == n)))
        flavor = "category" if self.admissible_only else "groupoid"
        return Tower(flavor, "on-demand", bounds, levels)


class TowerProvider:
    """Resolves pairs against an existing tower; fails rather than extend."""

    def __init__(self, tower: Tower, search_bound: int | None = None):
        self.tower = tower
        self.search_bound = search_bound

    def resolve(self, pair: ParallelPair) -> Term:
        pair = make_parallel_pair(pair.f, pair.g)
        if self.tower.flavor == "category" and not is_admissible(pair):
            raise NotAdmissible("pair is not admissible in the category flavor")
        term = has_lifting(self.tower, pair, self.search_bound)
        if term is None:
            raise ProviderFailure(pair)
        return term


# -- pair builders -------------------------------------------------------------

def binary_table(i: int, l: int) -> Table:
    """D_i glued to D_i along D_{i-l}."""
    return Table((i, i), (i - l,))


def mary_table(i: int, m: int) -> Table:
    return Table((i,) * m, ((i - 1),) * (m - 1))


def triple_table(i: int, l: int) -> Table:
    return Table((i, i, i), (i - l, i - l))


def comp_pair(catalog: "StructuralCatalog", l: int, i: int) -> ParallelPair:
    """Boundary pair of the level-l binary composition at dimension i."""
    if l < 1 or i < l:
        raise ValueError("need 1 <= l <= i")
    t = binary_table(i, l)
    if l == 1:
        f = glob_cell(t, 1, sigma(i))
        g = glob_cell(t, 0, tau(i))
        return make_parallel_pair(f, g)
    lower = catalog.comp(l - 1, i - 1)
    dom = binary_table(i - 1, l - 1)
    up_s = globe_sum_arrow(dom, t, [sigma(i), sigma(i)])
    up_t = globe_sum_arrow(dom, t, [tau(i), tau(i)])
    return make_parallel_pair(push(up_s, lower), push(up_t, lower))


def comp_mary_pair(i: int, m: int) -> ParallelPair:
    if i < 1 or m < 2:
        raise ValueError("need i >= 1 and m >= 2")
    t = mary_table(i, m)
    f = glob_cell(t, m - 1, sigma(i))
    g = glob_cell(t, 0, tau(i))
    return make_parallel_pair(f, g)


def assoc1_pair(catalog: "StructuralCatalog", i: int) -> ParallelPair:
    """((comp + id) . comp, (id + comp) . comp) into the triple sum."""
    if i < 1:
        raise ValueError("need i >= 1")
    t2 = binary_table(i, 1)
    t3 = triple_table(i, 1)
    nabla = catalog.comp(1, i)
    left_sum = make_sum_arrow(
        t2, [push(inclusion_arrow(t3, 0, 2), nabla), summand_component(t3, 2)])
    right_sum = make_sum_arrow(
        t2, [summand_component(t3, 0), push(inclusion_arrow(t3, 1, 2), nabla)])
    return make_parallel_pair(compose_sum(left_sum, nabla),
                              compose_sum(right_sum, nabla))


def assoc2_naive_pair(catalog: "StructuralCatalog", i: int) -> ParallelPair:
    """The level-2 analogue of the associativity pair, formed naively; its
    construction fails because the two arrows are not parallel."""
    if i < 2:
        raise ValueError("need i >= 2")
    t2 = binary_table(i, 2)
    t3 = triple_table(i, 2)
    n2 = catalog.comp(2, i)
    left_sum = make_sum_arrow(
        t2, [push(inclusion_arrow(t3, 0, 2), n2), summand_component(t3, 2)])
    right_sum = make_sum_arrow(
        t2, [summand_component(t3, 0), push(inclusion_arrow(t3, 1, 2), n2)])
    return make_parallel_pair(compose_sum(left_sum, n2),
                              compose_sum(right_sum, n2))


def assoc2_pair(catalog: "StructuralCatalog", i: int) -> ParallelPair:
    """The corrected level-2 associativity pair: both sides are whiskered
    through the level-1 composition, with the level-1 constraint absorbing
    the boundary discrepancy."""
    if i < 2:
        raise ValueError("need i >= 2")
    t2_l1 = binary_table(i, 1)
    t2_l2 = binary_table(i, 2)
    t3 = triple_table(i, 2)
    s3_low = triple_table(i - 1, 1)

    nabla1 = catalog.comp(1, i)
    nabla2 = catalog.comp(2, i)
    a_low = catalog.assoc1(i - 1)

    up_t = globe_sum_arrow(s3_low, t3, [tau(i)] * 3)
    up_s = globe_sum_arrow(s3_low, t3, [sigma(i)] * 3)

    nested_left = compose_sum(
        make_sum_arrow(t2_l2, [push(inclusion_arrow(t3, 0, 2), nabla2),
                               summand_component(t3, 2)]),
        nabla2)
    nested_right = compose_sum(
        make_sum_arrow(t2_l2, [summand_component(t3, 0),
                               push(inclusion_arrow(t3, 1, 2), nabla2)]),
        nabla2)

    f = compose_sum(make_sum_arrow(t2_l1, [push(up_t, a_low), nested_left]),
                    nabla1)
    g = compose_sum(make_sum_arrow(t2_l1, [nested_right, push(up_s, a_low)]),
                    nabla1)
    return make_parallel_pair(f, g)


def unit_pair(i: int) -> ParallelPair:
    ident = identity_term(i)
    return make_parallel_pair(ident, ident)


def unit_constraint_pairs(catalog: "StructuralCatalog",
                          i: int) -> tuple[ParallelPair, ParallelPair]:
    """Left and right unit constraint pairs at dimension i."""
    if i < 1:
        raise ValueError("need i >= 1")
    t2 = binary_table(i, 1)
    kappa = catalog.unit(i - 1)
    ident = identity_term(i)
    tk = push(globe_arrow_tau(i), kappa)
    sk = push(globe_arrow_sigma(i), kappa)
    left = compose_sum(make_sum_arrow(t2, [tk, ident]), catalog.comp(1, i))
    right = compose_sum(make_sum_arrow(t2, [ident, sk]), catalog.comp(1, i))
    return (make_parallel_pair(left, ident), make_parallel_pair(right, ident))


def globe_arrow_sigma(i: int) -> GlobularArrow:
    return globe_arrow(sigma(i))


def globe_arrow_tau(i: int) -> GlobularArrow:
    return globe_arrow(tau(i))


def inverse_pair(catalog: "StructuralCatalog", l: int, i: int) -> ParallelPair:
    if l < 1 or i < l:
        raise ValueError("need 1 <= l <= i")
    if l == 1:
        f = glob_cell(disk(i), 0, tau(i))
        g = glob_cell(disk(i), 0, sigma(i))
        return make_parallel_pair(f, g)
    lower = catalog.inverse(l - 1, i - 1)
    return make_parallel_pair(push(globe_arrow_sigma(i), lower),
                              push(globe_arrow_tau(i), lower))


def inverse_constraint_pairs(catalog: "StructuralCatalog",
                             i: int) -> tuple[ParallelPair, ParallelPair]:
    if i < 1:
        raise ValueError("need i >= 1")
    t2 = binary_table(i, 1)
    omega = catalog.inverse(1, i)
    kappa = catalog.unit(i - 1)
    ident = identity_term(i)
    sk = push(globe_arrow_sigma(i), kappa)
    tk = push(globe_arrow_tau(i), kappa)
    left = make_parallel_pair(
        compose_sum(make_sum_arrow(t2, [omega, ident]), catalog.comp(1, i)), sk)
    right = make_parallel_pair(
        compose_sum(make_sum_arrow(t2, [ident, omega]), catalog.comp(1, i)), tk)
    return left, right


# -- the catalog ----------------------------------------------------------------

@dataclass
class StructuralCatalog:
    """Memoized named operations over a provider.  Each entry is one chosen
    lifting; alternatives can be requested through the provider directly."""

    provider: object
    _memo: dict = field(default_factory=dict)

    def _resolve(self, key, pair: ParallelPair) -> Term:
        term = self._memo.get(key)
        if term is None:
            term = self.provider.resolve(pair)
            if boundary_of(term) != (pair.f, pair.g):
                raise ProviderFailure(pair, "provider returned a non-lifting")
            self._memo[key] = term
        return term

    def comp(self, l: int, i: int) -> Term:
        """Level-l binary composition at dimension i."""
        key = ("comp", l, i)
        if key not in self._memo:
            pair = comp_pair(self, l, i)
            return self._resolve(key, pair)
        return self._memo[key]

    def comp_mary(self, i: int, m: int) -> Term:
        key = ("comp_mary", i, m)
        if key not in self._memo:
            return self._resolve(key, comp_mary_pair(i, m))
        return self._memo[key]

    def assoc1(self, i: int) -> Term:
        key = ("assoc1", i)
        if key not in self._memo:
            return self._resolve(key, assoc1_pair(self, i))
        return self._memo[key]

    def assoc2(self, i: int) -> Term:
        key = ("assoc2", i)
        if key not in self._memo:
            return self._resolve(key, assoc2_pair(self, i))
        return self._memo[key]

    def unit(self, i: int) -> Term:
        key = ("unit", i)
        if key not in self._memo:
            return self._resolve(key, unit_pair(i))
        return self._memo[key]

    def unit_constraints(self, i: int) -> tuple[Term, Term]:
        key = ("unit_constraints", i)
        if key not in self._memo:
            lp, rp = unit_constraint_pairs(self, i)
            left = self._resolve(("unit_left", i), lp)
            right = self._resolve(("unit_right", i), rp)
            self._memo[key] = (left, right)
        return self._memo[key]

    def inverse(self, l: int, i: int) -> Term:
        key = ("inverse", l, i)
        if key not in self._memo:
            return self._resolve(key, inverse_pair(self, l, i))
        return self._memo[key]

    def inverse_constraints(self, i: int) -> tuple[Term, Term]:
        key = ("inverse_constraints", i)
        if key not in self._memo:
            lp, rp = inverse_constraint_pairs(self, i)
            left = self._resolve(("inverse_left", i), lp)
            right = self._resolve(("inverse_right", i), rp)
            self._memo[key] = (left, right)
        return self._memo[key]


def standard_catalog(max_i: int = 2, with_inverses: bool = True,
                     mary_max: int = 4) -> tuple[StructuralCatalog, FreeProvider]:
    """A catalog populated with the operations a finite model of truncation
    ``max_i`` interprets: compositions, units, m-ary compositions, the
    level-1 associativity constraint, and (for groupoids) inverses with
    their constraints."""
    provider = FreeProvider(admissible_only=not with_inverses)
    cat = StructuralCatalog(provider)
    for i in range(max_i):
        cat.unit(i)
    for i in range(1, max_i + 1):
        for l in range(1, i + 1):
            cat.comp(l, i)
        if with_inverses:
            for l in range(1, i + 1):
                cat.inverse(l, i)
    if max_i >= 1:
        for m in range(2, mary_max + 1):
            cat.comp_mary(1, m)
        cat.assoc1(1)
        cat.unit_constraints(1)
        if with_inverses:
            cat.inverse_constraints(1)
    return cat, provider
