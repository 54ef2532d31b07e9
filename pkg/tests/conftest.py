from __future__ import annotations

import pytest

from torichodge.hilbert import surface_cone
from torichodge.toric import Cone, cone_over_polytope

DEL_PEZZO = {
    "P2": [(1, 0), (0, 1), (-1, -1)],
    "P1xP1": [(1, 0), (0, 1), (-1, 0), (0, -1)],
    "F1": [(1, 0), (1, 1), (0, 1), (-1, -1)],
    "Bl2": [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1)],
    "dP6": [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)],
}

OCTAHEDRON = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]


def conifold() -> Cone:
    return Cone([(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)])


def del_pezzo(name: str) -> Cone:
    return cone_over_polytope(DEL_PEZZO[name])


def octahedron_cone() -> Cone:
    return cone_over_polytope(OCTAHEDRON)


def an_cone(n: int) -> Cone:
    return surface_cone(n + 1, n)


@pytest.fixture
def a1():
    return surface_cone(2, 1)


@pytest.fixture
def square():
    return conifold()


def random_isolated_threefold(rng):
    """Cone over a random lattice polygon at height 1, smooth away from the apex."""
    from torichodge.toric import ConeError

    while True:
        pts = [(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(rng.randint(3, 6))]
        try:
            C = Cone([(x, y, 1) for x, y in pts])
        except ConeError:
            continue
        if C.smooth_codimension >= 2 and C.N >= 3:
            return C


def random_cone(rng, n):
    """Random pointed cone over a height-1 polytope in dimension ``n``."""
    from torichodge.toric import ConeError

    while True:
        pts = [tuple(rng.randint(-2, 2) for _ in range(n - 1)) for _ in range(rng.randint(n, n + 2))]
        try:
            return Cone([p + (1,) for p in pts])
        except ConeError:
            continue
