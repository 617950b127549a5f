import random

import pytest

from globular.models import FiniteGroup, group_model
from globular.pasting import GlobularSet
from globular.structural import standard_catalog


@pytest.fixture(scope="session")
def catalog():
    cat, prov = standard_catalog(max_i=2)
    return cat, prov, prov.as_tower()


@pytest.fixture(scope="session")
def catalog3():
    cat, prov = standard_catalog(max_i=3)
    return cat, prov, prov.as_tower()


@pytest.fixture(scope="session")
def z2_model(catalog):
    _, _, tower = catalog
    return group_model(FiniteGroup.cyclic(2), tower)


@pytest.fixture(scope="session")
def z3_model(catalog):
    _, _, tower = catalog
    return group_model(FiniteGroup.cyclic(3), tower)


@pytest.fixture(scope="session")
def s3_model(catalog):
    _, _, tower = catalog
    return group_model(FiniteGroup.symmetric(3), tower)


def random_globular_set(rng: random.Random, max_dim: int = 2,
                        max_cells: int = 12) -> GlobularSet:
    """A random finite globular set: cells get random boundaries consistent
    with the globular relations (2-cell boundaries are parallel 1-cells)."""
    n0 = rng.randint(1, max(1, max_cells // 3))
    remaining = max_cells - n0
    n1 = rng.randint(0, max(0, remaining // 2))
    remaining -= n1
    cells0 = tuple(f"v{i}" for i in range(n0))
    src1, tgt1 = [], []
    for _ in range(n1):
        src1.append(rng.randrange(n0))
        tgt1.append(rng.randrange(n0))
    cells1 = tuple(f"e{i}" for i in range(n1))
    parallel = [(a, b) for a in range(n1) for b in range(n1)
                if src1[a] == src1[b] and tgt1[a] == tgt1[b]]
    src2, tgt2 = [], []
    if max_dim >= 2 and parallel:
        n2 = rng.randint(0, remaining)
        for _ in range(n2):
            a, b = parallel[rng.randrange(len(parallel))]
            src2.append(a)
            tgt2.append(b)
    cells2 = tuple(f"f{i}" for i in range(len(src2)))
    cells = (cells0, cells1) + ((cells2,) if max_dim >= 2 else ())
    src = ((), tuple(src1)) + ((tuple(src2),) if max_dim >= 2 else ())
    tgt = ((), tuple(tgt1)) + ((tuple(tgt2),) if max_dim >= 2 else ())
    return GlobularSet(max_dim, cells, src, tgt)
