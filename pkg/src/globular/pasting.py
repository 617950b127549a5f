"""Tables of dimensions and their realization as finite globular sets.

A table (i1 ... im | i'1 ... i'm-1) indexes an amalgamated sum of disks,
glued along shared boundary globes.  Realizations are computed once per
table by an explicit union-find amalgamation and cached; everything above
(hom-sets, generalized cosource/cotarget maps, products) is brute force
over the finite cell sets.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import DimensionMismatch, InvalidTable
from .globes import (
    SRC,
    TGT,
    GlobeMap,
    compose_globe,
    disk_cells,
    identity,
    polarity_rank,
    render_globe,
    sigma,
    sigma_to,
    tau,
    tau_to,
)


@dataclass(frozen=True)
class Table:
    """A table of dimensions: top dims and strictly smaller gluing dims."""

    tops: tuple[int, ...]
    bottoms: tuple[int, ...]

    def __post_init__(self):
        if len(self.tops) < 1:
            raise InvalidTable("a table needs at least one summand")
        if len(self.bottoms) != len(self.tops) - 1:
            raise InvalidTable("bottom row must be one shorter than top row")
        if any(t < 0 for t in self.tops) or any(b < 0 for b in self.bottoms):
            raise InvalidTable("dimensions must be non-negative")
        for k, b in enumerate(self.bottoms):
            if not (b < self.tops[k] and b < self.tops[k + 1]):
                raise InvalidTable(
                    f"bottom {b} must be strictly below tops "
                    f"{self.tops[k]}, {self.tops[k + 1]}"
                )

    @property
    def length(self) -> int:
        return len(self.tops)

    @property
    def dimension(self) -> int:
        return max(self.tops)

    def __str__(self) -> str:
        return render_table(self)


def disk(i: int) -> Table:
    return Table((i,), ())


def render_table(t: Table) -> str:
    if t.length == 1:
        return f"({t.tops[0]})"
    tops = " ".join(str(x) for x in t.tops)
    bots = " ".join(str(x) for x in t.bottoms)
    return f"({tops} | {bots})"


_TABLE_RE = re.compile(r"^\(([\d\s]+)(?:\|([\d\s]*))?\)$")


def parse_table(text: str) -> Table:
    m = _TABLE_RE.match(text.strip())
    if not m:
        raise InvalidTable(f"cannot parse table {text!r}")
    tops = tuple(int(x) for x in m.group(1).split())
    bots = tuple(int(x) for x in (m.group(2) or "").split())
    return Table(tops, bots)


def dimension(t: Table) -> int:
    return t.dimension


def enumerate_tables(max_dim: int, max_len: int) -> list[Table]:
    """All valid tables within the bounds, length-major then lexicographic."""
    if max_dim < 0 or max_len < 0:
        raise InvalidTable("bounds must be non-negative")
    out: list[Table] = []
    for m in range(1, max_len + 1):
        for tops in itertools.product(range(max_dim + 1), repeat=m):
            choices = []
            ok = True
            for k in range(m - 1):
                lim = min(tops[k], tops[k + 1])
                if lim < 1:
                    ok = False
                    break
                choices.append(range(lim))
            if not ok and m > 1:
                continue
            for bots in itertools.product(*choices):
                out.append(Table(tuple(tops), tuple(bots)))
    return out


# -- planar-tree re-encoding (display only) ---------------------------------

def table_to_tree(t: Table, base: int = 0):
    """Nested-tuple planar tree encoding of a table."""

    def build(tops, bots, level):
        # split the run at gluings equal to the current level
        segments = []
        start = 0
        for k, b in enumerate(bots):
            if b == level:
                segments.append((tops[start : k + 1], bots[start:k]))
                start = k + 1
        segments.append((tops[start:], bots[start:]))
        children = []
        for seg_tops, seg_bots in segments:
            if len(seg_tops) == 1 and seg_tops[0] == level:
                children.append(())
            else:
                children.append(build(seg_tops, seg_bots, level + 1))
        return tuple(children)

    return build(t.tops, t.bottoms, base)


def tree_to_table(tree, base: int = 0) -> Table:
    def walk(node, level):
        # leaf children of a node at `level` denote dim-`level` summands
        tops: list[int] = []
        bots: list[int] = []
        for idx, child in enumerate(node):
            if idx > 0:
                bots.append(level)
            if child == ():
                tops.append(level)
            else:
                t, b = walk(child, level + 1)
                tops.extend(t)
                bots.extend(b)
        return tops, bots

    tops, bots = walk(tree, base)
    return Table(tuple(tops), tuple(bots))


def render_tree(tree) -> str:
    if tree == ():
        return "*"
    return "(" + " ".join(render_tree(c) for c in tree) + ")"


# -- realization -------------------------------------------------------------

@dataclass(frozen=True)
class CellRef:
    """Position of a cell in a realization: (dimension, index)."""

    dim: int
    index: int


@dataclass(frozen=True)
class GlobularSet:
    """A finite truncated globular set.

    ``cells[k]`` lists the k-cell labels; ``src[k][j]``/``tgt[k][j]`` give the
    boundary indices of the j-th k-cell (k >= 1).
    """

    trunc: int
    cells: tuple[tuple[str, ...], ...]
    src: tuple[tuple[int, ...], ...]
    tgt: tuple[tuple[int, ...], ...]

    def n_cells(self, k: int) -> int:
        if k < 0 or k > self.trunc:
            return 0
        return len(self.cells[k])

    def total_cells(self) -> int:
        return sum(len(c) for c in self.cells)

    def src_of(self, k: int, j: int) -> int:
        return self.src[k][j]

    def tgt_of(self, k: int, j: int) -> int:
        return self.tgt[k][j]

    def boundary_iter(self, k: int, j: int, down_to: int, side: str) -> int:
        """Iterated source (side 's') or target (side 't') down to dimension
        ``down_to``."""
        cur = j
        for d in range(k, down_to, -1):
            cur = self.src[d][cur] if side == SRC else self.tgt[d][cur]
        return cur


def check_globular(gs: GlobularSet) -> bool:
    """src.src == src.tgt and tgt.src == tgt.tgt at every dimension."""
    for k in range(2, gs.trunc + 1):
        for j in range(gs.n_cells(k)):
            s, t = gs.src[k][j], gs.tgt[k][j]
            if gs.src[k - 1][s] != gs.src[k - 1][t]:
                return False
            if gs.tgt[k - 1][s] != gs.tgt[k - 1][t]:
                return False
    return True


def _cell_key(raw: tuple[int, GlobeMap]):
    k, gm = raw
    return (k, polarity_rank(gm), gm.src_dim)


class Realization:
    """The globular sum of disks prescribed by a table, with the amalgamation
    bookkeeping (summand, globe-arrow) <-> cell index kept around."""

    def __init__(self, table: Table):
        self.table = table
        tops = table.tops
        m = table.length
        d = table.dimension

        raw = [(k, gm) for k in range(m) for j in range(tops[k] + 1)
               for gm in disk_cells(tops[k], j)]
        parent: dict[tuple[int, GlobeMap], tuple[int, GlobeMap]] = {x: x for x in raw}

        def find(x):
            root = x
            while parent[root] != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra == rb:
                return
            lo, hi = sorted((ra, rb), key=_cell_key)
            parent[hi] = lo

        for k in range(m - 1):
            b = table.bottoms[k]
            left_in = sigma_to(tops[k], b)
            right_in = tau_to(tops[k + 1], b)
            for j in range(b + 1):
                for gm in disk_cells(b, j):
                    union((k, compose_globe(left_in, gm)),
                          (k + 1, compose_globe(right_in, gm)))

        self._find = find
        reps_by_dim: list[list[tuple[int, GlobeMap]]] = [[] for _ in range(d + 1)]
        seen = set()
        for x in raw:
            r = find(x)
            if r not in seen:
                seen.add(r)
                reps_by_dim[r[1].src_dim].append(r)
        for lst in reps_by_dim:
            lst.sort(key=_cell_key)
        self._reps = [tuple(lst) for lst in reps_by_dim]
        self._index = {r: CellRef(j, i)
                       for j, lst in enumerate(self._reps)
                       for i, r in enumerate(lst)}

        cells = tuple(tuple(f"{k}:{render_globe(gm)}" for (k, gm) in lst)
                      for lst in self._reps)
        src_rows: list[tuple[int, ...]] = [()]
        tgt_rows: list[tuple[int, ...]] = [()]
        for j in range(1, d + 1):
            srow, trow = [], []
            for (k, gm) in self._reps[j]:
                srow.append(self._index[find((k, compose_globe(gm, sigma(j))))].index)
                trow.append(self._index[find((k, compose_globe(gm, tau(j))))].index)
            src_rows.append(tuple(srow))
            tgt_rows.append(tuple(trow))
        self.gs = GlobularSet(d, cells, tuple(src_rows), tuple(tgt_rows))

    def find_cell(self, summand: int, gm: GlobeMap) -> CellRef:
        return self._index[self._find((summand, gm))]

    def rep(self, ref: CellRef) -> tuple[int, GlobeMap]:
        return self._reps[ref.dim][ref.index]

    def n_cells(self, k: int) -> int:
        return self.gs.n_cells(k)

    def cell_action(self, ref: CellRef, gm: GlobeMap) -> CellRef:
        """Presheaf action: restrict a cell along a globe arrow into its disk."""
        if gm.tgt_dim != ref.dim:
            raise DimensionMismatch("globe arrow does not match cell dimension")
        if gm.is_identity:
            return ref
        idx = self.gs.boundary_iter(ref.dim, ref.index, gm.src_dim, gm.polarity)
        return CellRef(gm.src_dim, idx)

    def top_cell(self, summand: int) -> CellRef:
        return self.find_cell(summand, identity(self.table.tops[summand]))


@lru_cache(maxsize=None)
def realization(table: Table) -> Realization:
    return Realization(table)


def realize(table: Table, trunc: int | None = None) -> GlobularSet:
    """The globular sum as a globular set, truncated at ``trunc``."""
    d = table.dimension
    if trunc is None:
        trunc = d
    if trunc < d:
        raise DimensionMismatch(f"truncation {trunc} below table dimension {d}")
    gs = realization(table).gs
    if trunc == d:
        return gs
    pad = trunc - d
    return GlobularSet(
        trunc,
        gs.cells + ((),) * pad,
        gs.src + ((),) * pad,
        gs.tgt + ((),) * pad,
    )


# -- morphisms of globular sets ----------------------------------------------

@dataclass(frozen=True)
class GsMorphism:
    """Dimension-wise cell assignment commuting with src and tgt."""

    dom: GlobularSet
    cod: GlobularSet
    mapping: tuple[tuple[int, ...], ...]

    def apply(self, k: int, j: int) -> int:
        return self.mapping[k][j]

    @property
    def is_identity(self) -> bool:
        return self.dom == self.cod and all(
            row == tuple(range(len(row))) for row in self.mapping
        )

    def is_bijective(self) -> bool:
        if self.dom.trunc != self.cod.trunc:
            return False
        return all(
            sorted(self.mapping[k]) == list(range(self.cod.n_cells(k)))
            and len(self.mapping[k]) == self.cod.n_cells(k)
            for k in range(self.dom.trunc + 1)
        )


def gs_identity(gs: GlobularSet) -> GsMorphism:
    return GsMorphism(gs, gs, tuple(tuple(range(gs.n_cells(k)))
                                    for k in range(gs.trunc + 1)))


def gs_compose(g2: GsMorphism, g1: GsMorphism) -> GsMorphism:
    if g1.cod != g2.dom:
        raise DimensionMismatch("morphisms not composable")
    return GsMorphism(g1.dom, g2.cod,
                      tuple(tuple(g2.mapping[k][j] for j in row)
                            for k, row in enumerate(g1.mapping)))


def check_gs_morphism(m: GsMorphism) -> bool:
    for k in range(1, m.dom.trunc + 1):
        for j in range(m.dom.n_cells(k)):
            y = m.mapping[k][j]
            if m.cod.src[k][y] != m.mapping[k - 1][m.dom.src[k][j]]:
                return False
            if m.cod.tgt[k][y] != m.mapping[k - 1][m.dom.tgt[k][j]]:
                return False
    return True


def hom_gs(dom: GlobularSet, cod: GlobularSet) -> list[GsMorphism]:
    """All morphisms dom -> cod, by backtracking with boundary propagation.

    Cells are assigned top dimension first so that each choice forces its
    whole boundary.
    """
    order = [(k, j) for k in range(dom.trunc, -1, -1)
             for j in range(dom.n_cells(k))]
    amap: dict[tuple[int, int], int] = {}
    results: list[GsMorphism] = []

    def cod_cells(k: int) -> int:
        return cod.n_cells(k) if k <= cod.trunc else 0

    def assign(k: int, j: int, y: int, added: list) -> bool:
        stack = [(k, j, y)]
        while stack:
            ck, cj, cy = stack.pop()
            cur = amap.get((ck, cj))
            if cur is not None:
                if cur != cy:
                    return False
                continue
            amap[(ck, cj)] = cy
            added.append((ck, cj))
            if ck >= 1:
                stack.append((ck - 1, dom.src[ck][cj], cod.src[ck][cy]))
                stack.append((ck - 1, dom.tgt[ck][cj], cod.tgt[ck][cy]))
        return True

    def rec(pos: int):
        while pos < len(order) and order[pos] in amap:
            pos += 1
        if pos == len(order):
            mapping = tuple(tuple(amap[(k, j)] for j in range(dom.n_cells(k)))
                            for k in range(dom.trunc + 1))
            results.append(GsMorphism(dom, cod, mapping))
            return
        k, j = order[pos]
        for y in range(cod_cells(k)):
            added: list = []
            if assign(k, j, y, added):
                rec(pos + 1)
            for key in added:
                del amap[key]

    rec(0)
    return results


def hom_theta0(s: Table, t: Table) -> list[GsMorphism]:
    """All globular-set morphisms realize(s) -> realize(t)."""
    return hom_gs(realization(s).gs, realization(t).gs)


def automorphisms(t: Table) -> list[GsMorphism]:
    return [m for m in hom_theta0(t, t) if m.is_bijective()]


def is_rigid(t: Table) -> bool:
    auts = automorphisms(t)
    return len(auts) == 1 and auts[0].is_identity


# -- generalized cosource and cotarget ---------------------------------------

def _boundary_groups(t: Table):
    """Group summands that collapse when the maximal tops are lowered.

    Returns (lowered tops per group, bottoms between groups, groups,
    per-group flag 'was maximal')."""
    i = t.dimension
    lowered = [i - 1 if x == i else x for x in t.tops]
    groups: list[list[int]] = [[0]]
    for k in range(1, t.length):
        b = t.bottoms[k - 1]
        if b == lowered[k] == lowered[groups[-1][-1]]:
            groups[-1].append(k)
        else:
            groups.append([k])
    tops = tuple(lowered[g[0]] for g in groups)
    bots = tuple(t.bottoms[groups[j][-1]] for j in range(len(groups) - 1))
    maximal = tuple(t.tops[g[0]] == i for g in groups)
    return tops, bots, groups, maximal


def boundary(t: Table) -> Table:
    """Lower the maximal tops by one; amalgamations that become gluings along
    a full disk collapse to a single summand."""
    if t.dimension == 0:
        raise DimensionMismatch("a 0-dimensional table has no boundary")
    tops, bots, _, _ = _boundary_groups(t)
    return Table(tops, bots)


def cosource_cotarget(t: Table) -> tuple[GsMorphism, GsMorphism]:
    """The two maps realize(boundary(t)) -> realize(t): identity on
    non-maximal summands, cosource/cotarget on maximal ones.  On a collapsed
    group of maximal summands the cosource lands in the last member and the
    cotarget in the first, matching the boundary of iterated composition."""
    if t.dimension == 0:
        raise DimensionMismatch("a 0-dimensional table has no boundary maps")
    i = t.dimension
    bt = boundary(t)
    _, _, groups, maximal = _boundary_groups(t)
    rb, rt = realization(bt), realization(t)

    def build(side: str) -> GsMorphism:
        rows = []
        for j in range(bt.dimension + 1):
            row = []
            for (pj, gm) in rb._reps[j]:
                if maximal[pj]:
                    summand = groups[pj][-1] if side == SRC else groups[pj][0]
                    arrow = GlobeMap(i - 1, i, side)
                    row.append(rt.find_cell(summand, compose_globe(arrow, gm)).index)
                else:
                    row.append(rt.find_cell(groups[pj][0], gm).index)
            rows.append(tuple(row))
        return GsMorphism(rb.gs, rt.gs, tuple(rows))

    return build(SRC), build(TGT)


def summand_inclusion(t: Table, start: int, count: int) -> GsMorphism:
    """Inclusion of the sub-sum spanning summands [start, start+count)."""
    if not (0 <= start and count >= 1 and start + count <= t.length):
        raise InvalidTable("summand range out of bounds")
    sub = Table(t.tops[start : start + count],
                t.bottoms[start : start + count - 1])
    rs, rt = realization(sub), realization(t)
    rows = []
    for j in range(sub.dimension + 1):
        rows.append(tuple(rt.find_cell(start + k, gm).index
                          for (k, gm) in rs._reps[j]))
    return GsMorphism(rs.gs, rt.gs, tuple(rows))


def globe_arrow_morphism(g: GlobeMap) -> GsMorphism:
    """A globe arrow as a morphism of realized disks."""
    rs, rt = realization(disk(g.src_dim)), realization(disk(g.tgt_dim))
    rows = []
    for j in range(g.src_dim + 1):
        rows.append(tuple(rt.find_cell(0, compose_globe(g, gm)).index
                          for (_, gm) in rs._reps[j]))
    return GsMorphism(rs.gs, rt.gs, tuple(rows))


def cell_morphism(t: Table, ref: CellRef) -> GsMorphism:
    """The morphism realize(disk(ref.dim)) -> realize(t) classifying a cell."""
    rs, rt = realization(disk(ref.dim)), realization(t)
    rows = []
    for j in range(ref.dim + 1):
        rows.append(tuple(rt.cell_action(ref, gm).index for (_, gm) in rs._reps[j]))
    return GsMorphism(rs.gs, rt.gs, tuple(rows))


# -- globular products --------------------------------------------------------

def globular_product(values, glue) -> list[tuple]:
    """The iterated fiber product: tuples (x_1, ..., x_m) with
    left_map(x_k) == right_map(x_{k+1}) at every gluing.

    ``glue[k]`` is a pair (left_map, right_map); maps may be callables or
    dicts.  Order is lexicographic in the given value orders.
    """
    values = [list(v) for v in values]
    if len(glue) != len(values) - 1:
        raise DimensionMismatch("need one glue pair per adjacent summand pair")

    def as_fn(m):
        return m if callable(m) else (lambda x, _m=m: _m[x])

    maps = [(as_fn(l), as_fn(r)) for (l, r) in glue]
    out: list[tuple] = []

    def rec(k: int, acc: list):
        if k == len(values):
            out.append(tuple(acc))
            return
        for x in values[k]:
            if k > 0:
                left, right = maps[k - 1]
                if left(acc[-1]) != right(x):
                    continue
            acc.append(x)
            rec(k + 1, acc)
            acc.pop()

    rec(0, [])
    return out


def product_for_table(t: Table, sets, src_iter, tgt_iter) -> list[tuple]:
    """Globular product shaped by a table.

    ``sets(d)`` yields the value set at dimension d; ``src_iter(d, x, b)``
    and ``tgt_iter(d, x, b)`` iterate boundaries of x from dimension d down
    to b.
    """
    values = [sets(d) for d in t.tops]
    glue = []
    for k, b in enumerate(t.bottoms):
        dl, dr = t.tops[k], t.tops[k + 1]
        glue.append((lambda x, d=dl, b=b: src_iter(d, x, b),
                     lambda x, d=dr, b=b: tgt_iter(d, x, b)))
    return globular_product(values, glue)
