"""The term language of disk-sourced arrows in a free globular extension.

An arrow D_j -> T is either a cell of the realized codomain (a globular
arrow, by Yoneda) or a formal lifting symbol applied under a tuple of
arrows out of its codomain sum.  The lifting equations and the colimit
compatibilities are oriented rewrites; terms are kept in normal form by
the smart constructors, so definitional equality is structural equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    DimensionMismatch,
    InvalidPair,
    NotParallel,
)
from .globes import (
    SRC,
    TGT,
    GlobeMap,
    compose_globe,
    identity,
    parse_globe,
    render_globe,
    sigma_to,
    tau_to,
)
from .pasting import (
    CellRef,
    GsMorphism,
    Table,
    cell_morphism,
    cosource_cotarget,
    disk,
    enumerate_tables,
    globe_arrow_morphism,
    gs_identity,
    hom_theta0,
    realization,
    render_table,
    summand_inclusion,
)


# -- terms --------------------------------------------------------------------

@dataclass(frozen=True)
class Glob:
    """A globular arrow D_{cell.dim} -> table, i.e. a cell of the codomain."""

    table: Table
    cell: CellRef


@dataclass(frozen=True)
class SumArrow:
    """An arrow out of a globular sum: one disk-sourced component per summand,
    agreeing on the amalgamation boundaries."""

    domain: Table
    codomain: Table
    components: tuple


@dataclass(frozen=True, eq=False)
class LiftingSymbol:
    """A formal lifting adjoined for a parallel pair.  Identity semantics:
    two adjunctions of the same pair are distinct symbols."""

    uid: int
    level: int
    pair: "ParallelPair"

    @property
    def name(self) -> str:
        return f"h#{self.uid}"

    @property
    def out_dim(self) -> int:
        return dom_dim(self.pair.f) + 1

    @property
    def codomain(self) -> Table:
        return codomain(self.pair.f)

    def __repr__(self):
        return f"LiftingSymbol({self.name}, level={self.level})"


@dataclass(frozen=True)
class LiftApplied:
    """post . symbol . pre — in normal form ``pre`` is an identity."""

    symbol: LiftingSymbol
    post: SumArrow
    pre: GlobeMap


Term = object  # Glob | LiftApplied


@dataclass(frozen=True)
class ParallelPair:
    f: Term
    g: Term

    @property
    def dom_dim(self) -> int:
        return dom_dim(self.f)

    @property
    def codomain(self) -> Table:
        return codomain(self.f)


@dataclass(frozen=True)
class Level:
    """One stage of a tower: the symbols adjoined at this index."""

    index: int
    symbols: tuple[LiftingSymbol, ...]


# -- basic accessors ----------------------------------------------------------

def dom_dim(t: Term) -> int:
    if isinstance(t, Glob):
        return t.cell.dim
    if isinstance(t, LiftApplied):
        return t.pre.src_dim
    if isinstance(t, SumArrow):
        raise DimensionMismatch("sum arrows have no disk domain")
    raise TypeError(f"not a term: {t!r}")


def codomain(t: Term) -> Table:
    if isinstance(t, Glob):
        return t.table
    if isinstance(t, LiftApplied):
        return t.post.codomain
    if isinstance(t, SumArrow):
        return t.codomain
    raise TypeError(f"not a term: {t!r}")


def identity_term(i: int) -> Glob:
    """The identity of D_i as an arrow into the one-summand table (i)."""
    return Glob(disk(i), realization(disk(i)).top_cell(0))


def summand_component(t: Table, k: int) -> Glob:
    """The canonical inclusion of the k-th summand disk."""
    return Glob(t, realization(t).top_cell(k))


def glob_cell(t: Table, summand: int, gm: GlobeMap) -> Glob:
    """The globular arrow picking out summand/globe-arrow in the realization."""
    return Glob(t, realization(t).find_cell(summand, gm))


def identity_sum(t: Table) -> SumArrow:
    return SumArrow(t, t, tuple(summand_component(t, k) for k in range(t.length)))


# -- normalization ------------------------------------------------------------

def precompose(t: Term, g: GlobeMap) -> Term:
    """t . g, normalized.  Precomposition by a cosource/cotarget unfolds the
    lifting equations of every symbol it reaches."""
    if g.is_identity:
        if dom_dim(t) != g.src_dim:
            raise DimensionMismatch("identity dimension mismatch")
        return t
    if dom_dim(t) != g.tgt_dim:
        raise DimensionMismatch(f"cannot precompose {g} into domain D_{dom_dim(t)}")
    if isinstance(t, Glob):
        return Glob(t.table, realization(t.table).cell_action(t.cell, g))
    g2 = compose_globe(t.pre, g)
    sym = t.symbol
    out = sym.out_dim
    side = sym.pair.f if g2.polarity == SRC else sym.pair.g
    reduced = compose_sum(t.post, side)
    if g2.src_dim == out - 1:
        return reduced
    return precompose(reduced, GlobeMap(g2.src_dim, out - 1, g2.polarity))


def compose_sum(post: SumArrow, t: Term) -> Term:
    """post . t for t a disk-sourced arrow into post's domain."""
    if codomain(t) != post.domain:
        raise DimensionMismatch("component does not land in the sum domain")
    if isinstance(t, Glob):
        k, gm = realization(t.table).rep(t.cell)
        return precompose(post.components[k], gm)
    return LiftApplied(t.symbol, compose_sums(post, t.post), t.pre)


def compose_sums(post: SumArrow, inner: SumArrow) -> SumArrow:
    """Composition of arrows out of sums, componentwise."""
    if inner.codomain != post.domain:
        raise DimensionMismatch("sum arrows not composable")
    return SumArrow(inner.domain, post.codomain,
                    tuple(compose_sum(post, c) for c in inner.components))


def normalize(t: Term) -> Term:
    """Rebuild a term through the normalizing constructors (idempotent on
    terms produced by this module; folds away any non-identity pre)."""
    if isinstance(t, Glob):
        return t
    if isinstance(t, SumArrow):
        return SumArrow(t.domain, t.codomain,
                        tuple(normalize(c) for c in t.components))
    post = SumArrow(t.post.domain, t.post.codomain,
                    tuple(normalize(c) for c in t.post.components))
    head = LiftApplied(t.symbol, post, identity(t.symbol.out_dim))
    return precompose(head, t.pre)


def equal(t1: Term, t2: Term) -> bool:
    """Definitional equality: structural equality of normal forms."""
    return t1 == t2


@lru_cache(maxsize=None)
def boundary_of(t: Term) -> tuple[Term, Term]:
    """(t . cosource, t . cotarget) of the domain disk."""
    j = dom_dim(t)
    if j < 1:
        raise DimensionMismatch("0-dimensional arrows have no boundary")
    return (precompose(t, GlobeMap(j - 1, j, SRC)),
            precompose(t, GlobeMap(j - 1, j, TGT)))


def is_parallel(f: Term, g: Term) -> bool:
    if dom_dim(f) != dom_dim(g) or codomain(f) != codomain(g):
        return False
    if dom_dim(f) == 0:
        return True
    return boundary_of(f) == boundary_of(g)


def make_parallel_pair(f: Term, g: Term) -> ParallelPair:
    if dom_dim(f) != dom_dim(g) or codomain(f) != codomain(g):
        raise NotParallel("arrows do not share domain disk and codomain")
    if dom_dim(f) > 0 and boundary_of(f) != boundary_of(g):
        raise NotParallel(
            f"boundaries differ: {render_term(f)} vs {render_term(g)}"
        )
    return ParallelPair(f, g)


def make_sum_arrow(domain: Table, components) -> SumArrow:
    """Validated arrow out of a sum: adjacent components must agree after
    restriction to the shared boundary globe."""
    components = tuple(components)
    if len(components) != domain.length:
        raise DimensionMismatch("one component per summand required")
    cod = codomain(components[0])
    for k, c in enumerate(components):
        if dom_dim(c) != domain.tops[k]:
            raise DimensionMismatch(f"component {k} has wrong domain dimension")
        if codomain(c) != cod:
            raise DimensionMismatch("components land in different codomains")
    for k, b in enumerate(domain.bottoms):
        left = precompose(components[k], sigma_to(domain.tops[k], b))
        right = precompose(components[k + 1], tau_to(domain.tops[k + 1], b))
        if left != right:
            raise DimensionMismatch(
                f"components {k}, {k + 1} disagree on the shared D_{b}"
            )
    return SumArrow(domain, cod, components)


# -- size ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def term_size(t: Term) -> int:
    """Node count of the fully unfolded term tree.  A symbol contributes one
    node plus the size of its defining pair, so bounded enumeration saturates
    as towers grow."""
    if isinstance(t, Glob):
        return 1
    if isinstance(t, SumArrow):
        return sum(term_size(c) for c in t.components)
    return symbol_weight(t.symbol) + term_size(t.post)


@lru_cache(maxsize=None)
def symbol_weight(sym: LiftingSymbol) -> int:
    return 1 + term_size(sym.pair.f) + term_size(sym.pair.g)


# -- symbols and levels -------------------------------------------------------

def symbols_of(t: Term) -> set[LiftingSymbol]:
    out: set[LiftingSymbol] = set()

    def walk(x):
        if isinstance(x, Glob):
            return
        if isinstance(x, SumArrow):
            for c in x.components:
                walk(c)
            return
        out.add(x.symbol)
        walk(x.post)

    walk(t)
    return out


def level_of_term(t: Term) -> int:
    syms = symbols_of(t)
    return max((s.level for s in syms), default=0)


def add_liftings(levels: list[Level], pairs, uid_start: int | None = None) -> Level:
    """Adjoin one fresh symbol per pair: the pushout step of a tower.

    Fresh symbols are numbered in pair order, so towers are reproducible."""
    index = len(levels)
    known = {s for lv in levels for s in lv.symbols}
    if uid_start is None:
        uid_start = sum(len(lv.symbols) for lv in levels)
    symbols = []
    for offset, pair in enumerate(pairs):
        for s in symbols_of(pair.f) | symbols_of(pair.g):
            if s not in known:
                raise InvalidPair(f"pair references unknown symbol {s.name}")
        if dom_dim(pair.f) > 0 and boundary_of(pair.f) != boundary_of(pair.g):
            raise InvalidPair("pair is not parallel")
        symbols.append(LiftingSymbol(uid_start + offset, index, pair))
    return Level(index, tuple(symbols))


def symbol_term(sym: LiftingSymbol) -> LiftApplied:
    """The bare symbol as an arrow D_out -> codomain."""
    return LiftApplied(sym, identity_sum(sym.codomain), identity(sym.out_dim))


# -- globular arrows acting on terms ------------------------------------------

@dataclass(frozen=True)
class GlobularArrow:
    """An arrow of the base globular site, with domain/codomain tables kept
    alongside the cell mapping so it can push and factor terms."""

    dom: Table
    cod: Table
    morphism: GsMorphism

    @property
    def is_identity(self) -> bool:
        return self.dom == self.cod and self.morphism.is_identity

    def apply_cell(self, ref: CellRef) -> CellRef:
        return CellRef(ref.dim, self.morphism.mapping[ref.dim][ref.index])


def identity_arrow(t: Table) -> GlobularArrow:
    return GlobularArrow(t, t, gs_identity(realization(t).gs))


def cosource_arrow(t: Table) -> GlobularArrow:
    from .pasting import boundary

    return GlobularArrow(boundary(t), t, cosource_cotarget(t)[0])


def cotarget_arrow(t: Table) -> GlobularArrow:
    from .pasting import boundary

    return GlobularArrow(boundary(t), t, cosource_cotarget(t)[1])


def inclusion_arrow(t: Table, start: int, count: int) -> GlobularArrow:
    sub = Table(t.tops[start : start + count], t.bottoms[start : start + count - 1])
    return GlobularArrow(sub, t, summand_inclusion(t, start, count))


def globe_arrow(g: GlobeMap) -> GlobularArrow:
    return GlobularArrow(disk(g.src_dim), disk(g.tgt_dim), globe_arrow_morphism(g))


def cell_arrow(t: Table, ref: CellRef) -> GlobularArrow:
    return GlobularArrow(disk(ref.dim), t, cell_morphism(t, ref))


def globe_sum_arrow(dom: Table, cod: Table, maps: list[GlobeMap]) -> GlobularArrow:
    """Summand-wise globe postcomposition dom -> cod (e.g. sigma + sigma)."""
    if dom.length != cod.length or dom.bottoms != cod.bottoms:
        raise DimensionMismatch("tables must share length and gluing dims")
    rd, rc = realization(dom), realization(cod)
    rows = []
    for j in range(dom.dimension + 1):
        rows.append(tuple(rc.find_cell(k, compose_globe(maps[k], gm)).index
                          for (k, gm) in rd._reps[j]))
    gsm = GsMorphism(rd.gs, rc.gs, tuple(rows))
    return GlobularArrow(dom, cod, gsm)


def push(arrow: GlobularArrow, t: Term) -> Term:
    """Postcompose a term with a globular arrow."""
    if isinstance(t, SumArrow):
        if t.codomain != arrow.dom:
            raise DimensionMismatch("term does not land in the arrow's domain")
        return SumArrow(t.domain, arrow.cod,
                        tuple(push(arrow, c) for c in t.components))
    if codomain(t) != arrow.dom:
        raise DimensionMismatch("term does not land in the arrow's domain")
    if isinstance(t, Glob):
        return Glob(arrow.cod, arrow.apply_cell(t.cell))
    return LiftApplied(t.symbol, push(arrow, t.post), t.pre)


def factor_through(t: Term, arrow: GlobularArrow) -> Term | None:
    """The unique t' with arrow . t' == t, when the arrow is injective on
    cells and t's cells all lie in its image; None otherwise."""
    inverse: list[dict[int, int]] = []
    for k, row in enumerate(arrow.morphism.mapping):
        inv: dict[int, int] = {}
        for j, y in enumerate(row):
            if y in inv:
                return None  # not injective: no canonical factorization
            inv[y] = j
        inverse.append(inv)

    def walk(x):
        if isinstance(x, Glob):
            if x.cell.dim >= len(inverse):
                return None
            j = inverse[x.cell.dim].get(x.cell.index)
            if j is None:
                return None
            return Glob(arrow.dom, CellRef(x.cell.dim, j))
        if isinstance(x, SumArrow):
            comps = []
            for c in x.components:
                fc = walk(c)
                if fc is None:
                    return None
                comps.append(fc)
            return SumArrow(x.domain, arrow.dom, tuple(comps))
        post = walk(x.post)
        if post is None:
            return None
        return LiftApplied(x.symbol, post, x.pre)

    return walk(t)


# -- algebraic arrows and admissibility ---------------------------------------

def _candidate_arrows(t: Table) -> list[GlobularArrow]:
    """Non-identity globular arrows into t through which terms could factor.

    Candidate domains are bounded by the codomain's cell counts; arrows of
    the base site never enlarge a pasting scheme."""
    target = realization(t).gs
    budget = target.total_cells()
    out = []
    for s in enumerate_tables(t.dimension, min(t.length + 2, budget)):
        source = realization(s).gs
        if source.total_cells() > budget:
            continue
        if any(source.n_cells(k) > target.n_cells(k)
               for k in range(source.trunc + 1)):
            continue
        for m in hom_theta0(s, t):
            if s == t and m.is_identity:
                continue
            out.append(GlobularArrow(s, t, m))
    return out


@lru_cache(maxsize=None)
def _candidates_cached(t: Table) -> tuple[GlobularArrow, ...]:
    return tuple(_candidate_arrows(t))


@lru_cache(maxsize=None)
def is_algebraic(t: Term) -> bool:
    """No decomposition t == gamma . t' with gamma a non-identity globular
    arrow."""
    for arrow in _candidates_cached(codomain(t)):
        if factor_through(t, arrow) is not None:
            return False
    return True


def algebraic_decompose(t: Term) -> tuple[GlobularArrow, Term]:
    """Split t as (globular part, algebraic part), maximizing the globular
    factor (i.e. choosing the smallest domain it can factor through)."""
    best: tuple[GlobularArrow, Term] | None = None
    for arrow in _candidates_cached(codomain(t)):
        res = factor_through(t, arrow)
        if res is None:
            continue
        size = realization(arrow.dom).gs.total_cells()
        if best is None or size < realization(best[0].dom).gs.total_cells():
            best = (arrow, res)
    if best is None:
        return identity_arrow(codomain(t)), t
    arrow, res = best
    if not is_algebraic(res):
        # peel further: the residue may still admit a globular factor
        inner_arrow, inner_res = algebraic_decompose(res)
        lifted = GlobularArrow(
            inner_arrow.dom, arrow.cod,
            _compose_gsm(arrow.morphism, inner_arrow.morphism))
        return lifted, inner_res
    return arrow, res


def _compose_gsm(outer: GsMorphism, inner: GsMorphism) -> GsMorphism:
    from .pasting import gs_compose

    return gs_compose(outer, inner)


def is_admissible(pair: ParallelPair) -> bool:
    """Both components algebraic, or the first factors through the
    generalized cosource and the second through the generalized cotarget,
    with algebraic residues."""
    f, g = pair.f, pair.g
    if is_algebraic(f) and is_algebraic(g):
        return True
    t = codomain(f)
    if t.dimension == 0:
        return False
    fp = factor_through(f, cosource_arrow(t))
    if fp is None or not is_algebraic(fp):
        return False
    gp = factor_through(g, cotarget_arrow(t))
    return gp is not None and is_algebraic(gp)


# -- substitution --------------------------------------------------------------

def substitute(t: Term, assignment: dict[LiftingSymbol, Term]) -> Term:
    """Replace symbols by their assigned terms (a morphism of extensions on
    the term level); symbols not in the assignment are left alone."""
    if isinstance(t, Glob):
        return t
    if isinstance(t, SumArrow):
        return SumArrow(t.domain, t.codomain,
                        tuple(substitute(c, assignment) for c in t.components))
    post = SumArrow(t.post.domain, t.post.codomain,
                    tuple(substitute(c, assignment) for c in t.post.components))
    target = assignment.get(t.symbol)
    if target is None:
        return precompose(LiftApplied(t.symbol, post,
                                      identity(t.symbol.out_dim)), t.pre)
    return precompose(compose_sum(post, target), t.pre)


def rename_symbols(t: Term, mapping: dict[LiftingSymbol, LiftingSymbol]) -> Term:
    if isinstance(t, Glob):
        return t
    if isinstance(t, SumArrow):
        return SumArrow(t.domain, t.codomain,
                        tuple(rename_symbols(c, mapping) for c in t.components))
    post = rename_symbols(t.post, mapping)
    return LiftApplied(mapping.get(t.symbol, t.symbol), post, t.pre)


# -- rendering / parsing -------------------------------------------------------

def render_term(t: Term) -> str:
    if isinstance(t, Glob):
        return f"(glob {render_table(t.table)} {t.cell.dim} {t.cell.index})"
    if isinstance(t, SumArrow):
        return "[" + " ".join(render_term(c) for c in t.components) + "]"
    return (f"(lift {t.symbol.name} "
            f"{render_term(t.post)} {render_globe(t.pre)})")


@lru_cache(maxsize=None)
def signature(t: Term) -> str:
    """Rendering with symbols replaced by their recursive pair signatures:
    stable across renumbering, used to compare towers."""
    if isinstance(t, Glob):
        return f"(glob {render_table(t.table)} {t.cell.dim} {t.cell.index})"
    if isinstance(t, SumArrow):
        return "[" + " ".join(signature(c) for c in t.components) + "]"
    return (f"(lift {symbol_signature(t.symbol)} "
            f"{signature(t.post)} {render_globe(t.pre)})")


@lru_cache(maxsize=None)
def symbol_signature(sym: LiftingSymbol) -> str:
    return (f"<{sym.out_dim} {render_table(sym.codomain)} "
            f"{signature(sym.pair.f)} {signature(sym.pair.g)}>")


def pair_signature(pair: ParallelPair) -> str:
    return f"({signature(pair.f)} {signature(pair.g)})"


_TOKEN = re.compile(r"\(|\)|\[|\]|\||[^\s()\[\]|]+")


def _tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text)


def parse_term(text: str, symbols: dict[str, LiftingSymbol]) -> Term:
    """Parse the s-expression term syntax; symbol names resolve through the
    supplied table (e.g. a tower's symbol index).  The result is normalized."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of term")
        tok = tokens[pos]
        pos += 1
        if expected is not None and tok != expected:
            raise ValueError(f"expected {expected!r}, got {tok!r}")
        return tok

    def parse_table_tokens() -> Table:
        take("(")
        tops: list[int] = []
        bots: list[int] = []
        cur = tops
        while True:
            tok = take()
            if tok == ")":
                break
            if tok == "|":
                cur = bots
            else:
                cur.append(int(tok))
        return Table(tuple(tops), tuple(bots))

    def parse_one() -> Term:
        take("(")
        head = take()
        if head == "glob":
            table = parse_table_tokens()
            dim = int(take())
            idx = int(take())
            take(")")
            if dim > table.dimension or idx >= realization(table).n_cells(dim):
                raise ValueError("cell reference out of range")
            return Glob(table, CellRef(dim, idx))
        if head == "lift":
            name = take()
            if name not in symbols:
                raise ValueError(f"unknown lifting symbol {name}")
            sym = symbols[name]
            take("[")
            comps = []
            while peek() != "]":
                comps.append(parse_one())
            take("]")
            pre = parse_globe(take())
            take(")")
            post = make_sum_arrow(sym.codomain, comps)
            return precompose(
                LiftApplied(sym, post, identity(sym.out_dim)), pre)
        raise ValueError(f"unknown term head {head!r}")

    term = parse_one()
    if pos != len(tokens):
        raise ValueError("trailing tokens after term")
    return term
