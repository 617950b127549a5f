"""Finite presheaf models: evaluation, homotopy, quotient groupoids, and
weak equivalences.

A model is a truncated carrier together with one finite operation table per
lifting symbol of its tower, each table defined on exactly the globular
product of the symbol's input shape.  Everything downstream (homotopy
classes, quotient groupoids, homotopy groups, equivalence checks) is an
exhaustive scan of these tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .coherators import Tower
from .errors import CoherenceFailure, DimensionMismatch, EvalError, ProviderFailure
from .extensions import (
    Glob,
    LiftingSymbol,
    ParallelPair,
    SumArrow,
    Term,
    codomain,
    symbol_term,
)
from .pasting import (
    CellRef,
    GlobularSet,
    Table,
    check_globular,
    product_for_table,
    realization,
)


# -- finite groups (test generators and pi-group results) ----------------------

@dataclass(frozen=True)
class FiniteGroup:
    """A finite group as a multiplication table over element names."""

    names: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]  # table[a][b] = a * b
    unit: int

    @property
    def order(self) -> int:
        return len(self.names)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        for b in range(self.order):
            if self.table[a][b] == self.unit:
                return b
        raise ValueError("not a group")

    @staticmethod
    def cyclic(n: int) -> "FiniteGroup":
        names = tuple(str(k) for k in range(n))
        table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
        return FiniteGroup(names, table, 0)

    @staticmethod
    def symmetric(n: int) -> "FiniteGroup":
        perms = sorted(itertools.permutations(range(n)))
        index = {p: k for k, p in enumerate(perms)}
        names = tuple("".join(str(x) for x in p) for p in perms)
        # (a * b)(x) = a(b(x)): composition as functions, right factor first
        table = tuple(
            tuple(index[tuple(a[b[x]] for x in range(n))] for b in perms)
            for a in perms)
        unit = index[tuple(range(n))]
        return FiniteGroup(names, table, unit)


def groups_isomorphic_by(f, g: FiniteGroup, h: FiniteGroup) -> bool:
    """Does the bijection f: indices of g -> indices of h carry the table?"""
    if g.order != h.order:
        return False
    return all(f(g.mul(a, b)) == h.mul(f(a), f(b))
               for a in range(g.order) for b in range(g.order))


# -- models ---------------------------------------------------------------------

@dataclass
class Model:
    """Operation tables over a tower, with a truncated carrier."""

    tower: Tower
    trunc: int
    gs: GlobularSet
    ops: dict[LiftingSymbol, dict[tuple[int, ...], int]] = field(default_factory=dict)

    def cells(self, k: int) -> range:
        return range(self.gs.n_cells(k))

    def src(self, k: int, x: int) -> int:
        return self.gs.src[k][x]

    def tgt(self, k: int, x: int) -> int:
        return self.gs.tgt[k][x]

    def boundary_iter(self, k: int, x: int, down_to: int, side: str) -> int:
        return self.gs.boundary_iter(k, x, down_to, side)


def product_tuples(model: Model, table: Table) -> list[tuple[int, ...]]:
    """The globular product of carrier cells shaped by a table."""
    if table.dimension > model.trunc:
        raise DimensionMismatch("table exceeds the model truncation")
    return product_for_table(
        table,
        lambda d: list(model.cells(d)),
        lambda d, x, b: model.boundary_iter(d, x, b, "s"),
        lambda d, x, b: model.boundary_iter(d, x, b, "t"),
    )


def eval_term(model: Model, term: Term, args: tuple[int, ...]) -> int:
    """Evaluate a disk-sourced arrow on a tuple in the globular product of
    its codomain shape."""
    table = codomain(term)
    if len(args) != table.length:
        raise EvalError(f"expected {table.length} arguments, got {len(args)}")
    return _eval(model, term, tuple(args))


def _eval(model: Model, term: Term, args: tuple[int, ...]) -> int:
    if isinstance(term, Glob):
        k, gm = realization(term.table).rep(term.cell)
        x = args[k]
        if gm.is_identity:
            return x
        return model.boundary_iter(term.table.tops[k], x, gm.src_dim, gm.polarity)
    if isinstance(term, SumArrow):
        raise EvalError("sum arrows evaluate componentwise; evaluate a component")
    sym = term.symbol
    if not term.pre.is_identity:
        raise EvalError("term is not in normal form")
    table = model.ops.get(sym)
    if table is None:
        raise EvalError(f"model has no table for {sym.name}")
    inner = tuple(_eval(model, c, args) for c in term.post.components)
    try:
        return table[inner]
    except KeyError:
        raise EvalError(f"arguments {inner} are not composable for {sym.name}")


def eval_sum(model: Model, arrow: SumArrow, args: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(_eval(model, c, args) for c in arrow.components)


def check_segal(model: Model) -> tuple[bool, str | None]:
    """Each table must be total on exactly the globular product of its input
    shape, respect the boundary operations of its pair, and the carrier must
    be globular.  Returns the first violation as a witness string."""
    if not check_globular(model.gs):
        return False, "carrier violates the globular relations"
    for sym, table in model.ops.items():
        expected = set(product_tuples(model, sym.codomain))
        got = set(table.keys())
        if got != expected:
            missing = sorted(expected - got)
            extra = sorted(got - expected)
            which = missing[0] if missing else extra[0]
            return False, f"{sym.name}: table domain mismatch at {which}"
        out_dim = sym.out_dim
        for args, out in table.items():
            if out not in range(model.gs.n_cells(out_dim)):
                return False, f"{sym.name}: output out of range at {args}"
            if out_dim >= 1:
                want_s = _eval(model, sym.pair.f, args)
                want_t = _eval(model, sym.pair.g, args)
                if model.src(out_dim, out) != want_s:
                    return False, f"{sym.name}: source clash at {args}"
                if model.tgt(out_dim, out) != want_t:
                    return False, f"{sym.name}: target clash at {args}"
    return True, None


# -- model providers --------------------------------------------------------------

class ModelProvider:
    """Resolves a pair through the model's tables: the pair must match a
    symbol the model interprets."""

    def __init__(self, model: Model):
        self.model = model
        self._index: dict[ParallelPair, LiftingSymbol] = {}
        for sym in model.ops:
            self._index.setdefault(sym.pair, sym)

    def resolve(self, pair: ParallelPair) -> Term:
        sym = self._index.get(pair)
        if sym is None:
            raise ProviderFailure(pair)
        return symbol_term(sym)


def _comp_term(model: Model, i: int) -> Term:
    from .structural import StructuralCatalog

    cat = StructuralCatalog(ModelProvider(model))
    return cat.comp(1, i)


def _unit_term(model: Model, i: int) -> Term:
    from .structural import StructuralCatalog

    cat = StructuralCatalog(ModelProvider(model))
    return cat.unit(i)


def _inverse_term(model: Model, i: int) -> Term:
    from .structural import StructuralCatalog

    cat = StructuralCatalog(ModelProvider(model))
    return cat.inverse(1, i)


# -- homotopy ---------------------------------------------------------------------

def homotopy_related(model: Model, x: int, y: int, i: int) -> int | None:
    """A witness (i+1)-cell from x to y, or None."""
    if i >= model.trunc:
        raise DimensionMismatch("no cells above the truncation to witness with")
    for h in model.cells(i + 1):
        if model.src(i + 1, h) == x and model.tgt(i + 1, h) == y:
            return h
    return None


def homotopy_classes(model: Model, i: int) -> list[tuple[int, ...]]:
    """Equivalence classes of i-cells under the homotopy relation."""
    n = model.gs.n_cells(i)
    related = {(x, y) for x in range(n) for y in range(n)
               if x == y or (i < model.trunc and
                             homotopy_related(model, x, y, i) is not None)}
    # transitive closure guard: on shipped models the relation is already
    # transitive, but the quotient must not depend on that silently
    changed = True
    while changed:
        changed = False
        for x, y in list(related):
            for z in range(n):
                if (y, z) in related and (x, z) not in related:
                    related.add((x, z))
                    changed = True
    classes: list[tuple[int, ...]] = []
    seen: set[int] = set()
    for x in range(n):
        if x in seen:
            continue
        cls = tuple(sorted(y for y in range(n) if (x, y) in related))
        seen.update(cls)
        classes.append(cls)
    return classes


def pi0(model: Model) -> list[tuple[int, ...]]:
    """Connected components: 0-cells modulo homotopy."""
    return homotopy_classes(model, 0)


@dataclass
class PiGroupoid:
    """The quotient groupoid at dimension i: objects are (i-1)-cells, arrows
    are homotopy classes of i-cells."""

    i: int
    objects: list[int]
    classes: list[tuple[int, ...]]
    class_of: dict[int, int]
    src: list[int]
    tgt: list[int]
    compose: dict[tuple[int, int], int]  # (a, b) -> a . b, when composable
    identity: dict[int, int]             # object -> identity class
    inverse: dict[int, int]

    def check_axioms(self) -> bool:
        for (a, b), c in self.compose.items():
            if self.src[c] != self.src[b] or self.tgt[c] != self.tgt[a]:
                return False
        for obj, e in self.identity.items():
            if self.src[e] != obj or self.tgt[e] != obj:
                return False
        for a in range(len(self.classes)):
            ia = self.inverse[a]
            if self.compose[(ia, a)] != self.identity[self.src[a]]:
                return False
            if self.compose[(a, ia)] != self.identity[self.tgt[a]]:
                return False
        # associativity over all composable triples
        for a in range(len(self.classes)):
            for b in range(len(self.classes)):
                if (a, b) not in self.compose:
                    continue
                for c in range(len(self.classes)):
                    if (b, c) not in self.compose:
                        continue
                    if (self.compose[(self.compose[(a, b)], c)]
                            != self.compose[(a, self.compose[(b, c)])]):
                        return False
        return True


def varpi(model: Model, i: int, comp_term: Term | None = None) -> PiGroupoid:
    """The groupoid of (i-1)-cells and homotopy classes of i-cells."""
    if i < 1 or i > model.trunc - 1:
        raise DimensionMismatch(
            "need cells one dimension above i to form the quotient")
    comp = comp_term if comp_term is not None else _comp_term(model, i)
    unit = _unit_term(model, i - 1)
    inv = _inverse_term(model, i)
    classes = homotopy_classes(model, i)
    class_of = {x: ci for ci, cls in enumerate(classes) for x in cls}
    src = [model.src(i, cls[0]) for cls in classes]
    tgt = [model.tgt(i, cls[0]) for cls in classes]
    # homotopic cells share boundaries; verify rather than assume
    for cls in classes:
        for x in cls:
            if model.src(i, x) != model.src(i, cls[0]):
                raise CoherenceFailure(None, x, "homotopic cells with distinct sources")
            if model.tgt(i, x) != model.tgt(i, cls[0]):
                raise CoherenceFailure(None, x, "homotopic cells with distinct targets")
    compose: dict[tuple[int, int], int] = {}
    for a, ca in enumerate(classes):
        for b, cb in enumerate(classes):
            if src[a] != tgt[b]:
                continue
            out = eval_term(model, comp, (ca[0], cb[0]))
            compose[(a, b)] = class_of[out]
    identity = {}
    for obj in range(model.gs.n_cells(i - 1)):
        identity[obj] = class_of[eval_term(model, unit, (obj,))]
    inverse = {a: class_of[eval_term(model, inv, (cls[0],))]
               for a, cls in enumerate(classes)}
    objects = list(range(model.gs.n_cells(i - 1)))
    return PiGroupoid(i, objects, classes, class_of, src, tgt,
                      compose, identity, inverse)


def pi_n(model: Model, base: int, i: int,
         comp_term: Term | None = None) -> FiniteGroup:
    """The homotopy group at a 0-cell: loop classes at the iterated unit."""
    if i < 1 or i + 1 > model.trunc:
        raise DimensionMismatch("truncation too low for this homotopy group")
    point = base
    for j in range(i - 1):
        point = eval_term(model, _unit_term(model, j), (point,))
    g = varpi(model, i, comp_term)
    loops = [a for a in range(len(g.classes))
             if g.src[a] == point and g.tgt[a] == point]
    index = {a: k for k, a in enumerate(loops)}
    table = tuple(tuple(index[g.compose[(a, b)]] for b in loops) for a in loops)
    unit = index[g.identity[point]]
    names = tuple(f"[{g.classes[a][0]}]" for a in loops)
    return FiniteGroup(names, table, unit)


# -- morphisms and weak equivalences ------------------------------------------------

@dataclass
class ModelMorphism:
    dom: Model
    cod: Model
    mapping: tuple[tuple[int, ...], ...]

    def apply(self, k: int, x: int) -> int:
        return self.mapping[k][x]


def check_morphism(m: ModelMorphism) -> bool:
    """Commutes with boundaries and with every shared operation table."""
    for k in range(1, min(m.dom.trunc, m.cod.trunc) + 1):
        for x in m.dom.cells(k):
            if m.cod.src(k, m.apply(k, x)) != m.apply(k - 1, m.dom.src(k, x)):
                return False
            if m.cod.tgt(k, m.apply(k, x)) != m.apply(k - 1, m.dom.tgt(k, x)):
                return False
    for sym, table in m.dom.ops.items():
        cod_table = m.cod.ops.get(sym)
        if cod_table is None:
            return False
        dims = sym.codomain.tops
        for args, out in table.items():
            mapped = tuple(m.apply(d, a) for d, a in zip(dims, args))
            if cod_table.get(mapped) != m.apply(sym.out_dim, out):
                return False
    return True


@dataclass
class WeqReport:
    ok: bool
    bound: int
    reasons: list[str]

    def summary(self) -> str:
        verdict = "weak equivalence" if self.ok else "not a weak equivalence"
        return (f"{verdict} (checked pi_0 and pi_i for 1 <= i <= {self.bound}; "
                f"the check is truncation-bounded)")


def is_weak_equivalence(m: ModelMorphism) -> WeqReport:
    """Bijective on components, isomorphism on every homotopy group at every
    base 0-cell, up to the shared truncation bound."""
    bound = min(m.dom.trunc, m.cod.trunc) - 1
    reasons: list[str] = []

    c_dom = pi0(m.dom)
    c_cod = pi0(m.cod)
    comp_of_dom = {x: k for k, cls in enumerate(c_dom) for x in cls}
    comp_of_cod = {x: k for k, cls in enumerate(c_cod) for x in cls}
    induced = {}
    for k, cls in enumerate(c_dom):
        images = {comp_of_cod[m.apply(0, x)] for x in cls}
        if len(images) != 1:
            reasons.append("component map ill-defined")
            return WeqReport(False, bound, reasons)
        induced[k] = images.pop()
    if len(set(induced.values())) != len(c_dom) or len(c_dom) != len(c_cod):
        reasons.append("pi_0 is not a bijection")

    for i in range(1, bound + 1):
        for base in m.dom.cells(0):
            g_dom = pi_n(m.dom, base, i)
            g_cod = pi_n(m.cod, m.apply(0, base), i)
            # the induced map on loop classes
            gd = varpi(m.dom, i)
            gc = varpi(m.cod, i)
            point = base
            image_point = m.apply(0, base)
            for j in range(i - 1):
                point = eval_term(m.dom, _unit_term(m.dom, j), (point,))
                image_point = eval_term(m.cod, _unit_term(m.cod, j),
                                        (image_point,))
            loops_dom = [a for a in range(len(gd.classes))
                         if gd.src[a] == point and gd.tgt[a] == point]
            loops_cod = [a for a in range(len(gc.classes))
                         if gc.src[a] == image_point and gc.tgt[a] == image_point]
            idx_d = {a: k for k, a in enumerate(loops_dom)}
            idx_c = {a: k for k, a in enumerate(loops_cod)}
            fmap = {}
            for a in loops_dom:
                img = gc.class_of[m.apply(i, gd.classes[a][0])]
                fmap[idx_d[a]] = idx_c[img]
            bijective = (len(set(fmap.values())) == g_dom.order ==
                         g_cod.order)
            homo = groups_isomorphic_by(lambda k: fmap[k], g_dom, g_cod) \
                if bijective else False
            if not (bijective and homo):
                reasons.append(
                    f"pi_{i} at base {base} is not an isomorphism")
    return WeqReport(not reasons, bound, reasons)


# -- concrete models -----------------------------------------------------------------

def _one_object_carrier(n_arrows: int, names: tuple[str, ...]) -> GlobularSet:
    """One 0-cell, the given 1-cells (all endo), and one 2-cell per 1-cell."""
    return GlobularSet(
        2,
        (("*",), names, tuple(f"w[{x}]" for x in names)),
        ((), (0,) * n_arrows, tuple(range(n_arrows))),
        ((), (0,) * n_arrows, tuple(range(n_arrows))),
    )


def _edge_value(args: tuple[int, ...], summand: int) -> int:
    # valid for the strict one-object carrier only: a 1-dim summand's edge is
    # the argument itself, and a 2-dim summand's boundary edges equal the
    # 2-cell's own label because s2 = t2 = id there
    return args[summand]


def _path_value(group: FiniteGroup, table: Table,
                args: tuple[int, ...], a_ref, b_ref) -> int:
    """The unique composite along the 1-skeleton of the input shape from
    vertex a to vertex b, valued in the group (reverse edges invert)."""
    r = realization(table)
    gs = r.gs
    n0 = gs.n_cells(0)
    edges = []  # (src0, tgt0, value index in the group)
    for j in range(gs.n_cells(1)):
        k, _ = r.rep(CellRef(1, j))
        edges.append((gs.src[1][j], gs.tgt[1][j], _edge_value(args, k)))
    start, goal = a_ref.index, b_ref.index
    # breadth-first search over the (undirected) skeleton, deterministic order
    prev: dict[int, tuple[int, int, bool]] = {start: None}  # v -> (u, val, fwd)
    frontier = [start]
    while frontier and goal not in prev:
        nxt = []
        for u in frontier:
            for (s0, t0, val) in edges:
                if s0 == u and t0 not in prev:
                    prev[t0] = (u, val, True)
                    nxt.append(t0)
                if t0 == u and s0 not in prev:
                    prev[s0] = (u, val, False)
                    nxt.append(s0)
        frontier = nxt
    if goal not in prev:
        raise EvalError("input shape skeleton is not connected")
    acc = group.unit
    v = goal
    while prev[v] is not None:
        u, val, fwd = prev[v]
        # walking goal -> start, so each step is earlier along the path and
        # multiplies on the right; reverse traversal inverts
        acc = group.mul(acc, val) if fwd else group.mul(acc, group.inv(val))
        v = u
    return acc


def group_model(group: FiniteGroup, tower: Tower, trunc: int = 2) -> Model:
    """The strict one-object groupoid on a finite group, as operation tables:
    1-cells are group elements, and a 2-cell from x to y exists only when
    x == y.  Liftings of 0-dimensional pairs are interpreted by the unique
    path composite in the input shape; higher tables are forced by their
    boundary pair, and any pointwise disagreement is surfaced."""
    if trunc != 2:
        raise DimensionMismatch("the strict group model is 2-truncated")
    gs = _one_object_carrier(group.order, group.names)
    model = Model(tower, trunc, gs)
    for sym in sorted(tower.symbols(), key=lambda s: (s.level, s.uid)):
        if sym.out_dim > trunc:
            continue
        shape = sym.codomain
        if shape.dimension > trunc:
            continue
        table: dict[tuple[int, ...], int] = {}
        if sym.out_dim == 1:
            f, g = sym.pair.f, sym.pair.g
            if not (isinstance(f, Glob) and isinstance(g, Glob)):
                raise CoherenceFailure(sym.pair, None,
                                       "0-dimensional pair is not globular")
            for args in product_tuples(model, shape):
                table[args] = _path_value(group, shape, args, f.cell, g.cell)
        else:
            for args in product_tuples(model, shape):
                left = _eval(model, sym.pair.f, args)
                right = _eval(model, sym.pair.g, args)
                if left != right:
                    raise CoherenceFailure(sym.pair, args)
                table[args] = left  # the witness 2-cell over that 1-cell
        model.ops[sym] = table
    return model


def constant_model(n: int, tower: Tower, trunc: int = 2,
                   names: tuple[str, ...] | None = None) -> Model:
    """The constant carrier: every boundary map is the identity, every
    operation returns the common value of its (diagonal) arguments."""
    names = names or tuple(f"c{k}" for k in range(n))
    ident = tuple(range(n))
    gs = GlobularSet(
        trunc,
        tuple(names for _ in range(trunc + 1)),
        ((),) + tuple(ident for _ in range(trunc)),
        ((),) + tuple(ident for _ in range(trunc)),
    )
    model = Model(tower, trunc, gs)
    for sym in tower.symbols():
        if sym.out_dim > trunc or sym.codomain.dimension > trunc:
            continue
        table = {}
        for args in product_tuples(model, sym.codomain):
            table[args] = args[0]
        model.ops[sym] = table
    return model


def one_point_model(tower: Tower, trunc: int = 2) -> Model:
    return constant_model(1, tower, trunc, names=("*",))


def disjoint_union(a: Model, b: Model) -> Model:
    """Cellwise disjoint union; operation tables stay within each part."""
    if a.tower is not b.tower or a.trunc != b.trunc:
        raise DimensionMismatch("models must share tower and truncation")
    offs = [a.gs.n_cells(k) for k in range(a.trunc + 1)]
    cells = tuple(a.gs.cells[k] + tuple(f"r.{x}" for x in b.gs.cells[k])
                  for k in range(a.trunc + 1))
    src = tuple(a.gs.src[k] + tuple(x + offs[k - 1] for x in b.gs.src[k])
                for k in range(a.trunc + 1))
    tgt = tuple(a.gs.tgt[k] + tuple(x + offs[k - 1] for x in b.gs.tgt[k])
                for k in range(a.trunc + 1))
    gs = GlobularSet(a.trunc, cells, src, tgt)
    model = Model(a.tower, a.trunc, gs)
    for sym in a.ops:
        if sym not in b.ops:
            continue
        dims = sym.codomain.tops
        table = dict(a.ops[sym])
        for args, out in b.ops[sym].items():
            shifted = tuple(x + offs[d] for d, x in zip(dims, args))
            table[shifted] = out + offs[sym.out_dim]
        model.ops[sym] = table
    return model


def relabel(model: Model, perms: list[list[int]]) -> tuple[Model, ModelMorphism]:
    """Transport a model along per-dimension permutations; the permutation
    itself is returned as an isomorphism onto the new model."""
    inv = [[0] * len(p) for p in perms]
    for k, p in enumerate(perms):
        for old, new in enumerate(p):
            inv[k][new] = old
    cells = tuple(tuple(model.gs.cells[k][inv[k][j]]
                        for j in range(len(perms[k])))
                  for k in range(model.trunc + 1))
    src = []
    tgt = []
    for k in range(model.trunc + 1):
        if k == 0:
            src.append(())
            tgt.append(())
            continue
        srow = tuple(perms[k - 1][model.gs.src[k][inv[k][j]]]
                     for j in range(len(perms[k])))
        trow = tuple(perms[k - 1][model.gs.tgt[k][inv[k][j]]]
                     for j in range(len(perms[k])))
        src.append(srow)
        tgt.append(trow)
    gs = GlobularSet(model.trunc, cells, tuple(src), tuple(tgt))
    out = Model(model.tower, model.trunc, gs)
    for sym, table in model.ops.items():
        dims = sym.codomain.tops
        out.ops[sym] = {
            tuple(perms[d][x] for d, x in zip(dims, args)):
                perms[sym.out_dim][res]
            for args, res in table.items()
        }
    morphism = ModelMorphism(model, out,
                             tuple(tuple(p) for p in perms))
    return out, morphism
