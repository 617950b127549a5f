"""The category of globes: canonical-form arrows and their composition.

Arrows between disks collapse, under the cosource/cotarget relations, to at
most two arrows per hom-set.  An arrow D_i -> D_j is therefore stored as a
triple (i, j, polarity); composites are normalized on construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import DimensionMismatch

IDENT = "id"
SRC = "s"
TGT = "t"

_POLARITY_RANK = {SRC: 0, TGT: 1, IDENT: 2}


@dataclass(frozen=True, order=True)
class GlobeMap:
    """Canonical arrow D_src_dim -> D_tgt_dim."""

    src_dim: int
    tgt_dim: int
    polarity: str

    def __post_init__(self):
        if self.src_dim < 0 or self.tgt_dim < 0:
            raise DimensionMismatch(f"negative dimension in {self}")
        if self.polarity == IDENT:
            if self.src_dim != self.tgt_dim:
                raise DimensionMismatch("identity arrow must be an endo-arrow")
        elif self.polarity in (SRC, TGT):
            if self.src_dim >= self.tgt_dim:
                raise DimensionMismatch(
                    f"{self.polarity}-arrow needs src_dim < tgt_dim, got {self}"
                )
        else:
            raise ValueError(f"unknown polarity {self.polarity!r}")

    @property
    def is_identity(self) -> bool:
        return self.polarity == IDENT

    def __str__(self) -> str:
        return render_globe(self)


def identity(i: int) -> GlobeMap:
    return GlobeMap(i, i, IDENT)


def sigma(i: int) -> GlobeMap:
    """The cosource D_{i-1} -> D_i."""
    return GlobeMap(i - 1, i, SRC)


def tau(i: int) -> GlobeMap:
    """The cotarget D_{i-1} -> D_i."""
    return GlobeMap(i - 1, i, TGT)


def sigma_to(j: int, i: int) -> GlobeMap:
    """Iterated cosource D_i -> D_j (identity when i == j)."""
    return identity(i) if i == j else GlobeMap(i, j, SRC)


def tau_to(j: int, i: int) -> GlobeMap:
    return identity(i) if i == j else GlobeMap(i, j, TGT)


def hom_globes(i: int, j: int) -> list[GlobeMap]:
    """All arrows D_i -> D_j, in canonical form.

    Two arrows if i < j, one if i == j, none otherwise.
    """
    if i < 0 or j < 0:
        raise DimensionMismatch("dimensions must be non-negative")
    if i < j:
        return [GlobeMap(i, j, SRC), GlobeMap(i, j, TGT)]
    if i == j:
        return [identity(i)]
    return []


def compose_globe(g2: GlobeMap, g1: GlobeMap) -> GlobeMap:
    """g2 after g1.  The polarity of a composite is the polarity of its
    lowest-dimensional non-identity factor."""
    if g1.tgt_dim != g2.src_dim:
        raise DimensionMismatch(f"cannot compose {g2} after {g1}")
    if g1.is_identity:
        return g2
    if g2.is_identity:
        return g1
    return GlobeMap(g1.src_dim, g2.tgt_dim, g1.polarity)


def disk_cells(d: int, k: int) -> list[GlobeMap]:
    """The k-cells of the d-disk, i.e. arrows D_k -> D_d."""
    return hom_globes(k, d)


def render_globe(g: GlobeMap) -> str:
    if g.is_identity:
        return f"id_{g.src_dim}"
    return f"{g.polarity}^{g.tgt_dim}_{g.src_dim}"


_GLOBE_RE = re.compile(r"^(?:id_(\d+)|([st])\^(\d+)_(\d+))$")


def parse_globe(text: str) -> GlobeMap:
    m = _GLOBE_RE.match(text.strip())
    if not m:
        raise ValueError(f"cannot parse globe arrow {text!r}")
    if m.group(1) is not None:
        return identity(int(m.group(1)))
    pol, j, i = m.group(2), int(m.group(3)), int(m.group(4))
    return GlobeMap(i, j, pol)


def polarity_rank(g: GlobeMap) -> int:
    return _POLARITY_RANK[g.polarity]
