from __future__ import annotations

import random

import pytest

from conftest import DEL_PEZZO, conifold, del_pezzo
from torichodge.exactlin import dot
from torichodge.toric import (
    Cone,
    ConeError,
    Face,
    cone_over_polytope,
    dual_cone,
    faces,
    gorenstein_data,
    is_reflexive,
    is_smooth_face,
    smooth_codimension,
    split_torus,
)


def test_orthant_is_self_dual():
    C = Cone([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert set(dual_cone(C).rays) == set(C.rays)
    assert C.is_smooth


@pytest.mark.parametrize("n", range(1, 7))
def test_an_dual(n):
    C = Cone([(1, 0), (-n, n + 1)])
    assert set(C.dual_rays) == {(0, 1), (n + 1, n)}


def _random_pointed_3d(rng):
    while True:
        rays = [(rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(rng.randint(3, 6))]
        try:
            return Cone(rays)
        except ConeError:
            continue


def test_double_dual():
    rng = random.Random(3)
    for _ in range(20):
        C = _random_pointed_3d(rng)
        assert set(C.dual().dual().rays) == set(C.rays)


def test_square_faces():
    C = Cone([(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)])
    assert [f.ray_indices for f in faces(C, 2)] == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert [f.ray_indices for f in faces(C, 1)] == [(0,), (1,), (2,), (3,)]
    assert faces(C, 0) == [Face((), 0)]
    assert smooth_codimension(C) == 2


def test_faces_match_supporting_functionals():
    rng = random.Random(5)
    for _ in range(10):
        C = _random_pointed_3d(rng)
        for f in C.faces(2):
            # some dual vector vanishes exactly on the rays of the face
            witness = [sum(c) for c in zip(*(u for u in C.dual_rays if all(dot(u, C.rays[j]) == 0 for j in f.ray_indices)))]
            zero = {j for j, a in enumerate(C.rays) if dot(witness, a) == 0}
            assert zero == set(f.ray_indices)


def test_smoothness():
    C = Cone([(1, 0), (-1, 2)])
    assert is_smooth_face(C, Face((0,), 1))
    assert not is_smooth_face(C, Face((0, 1), 2))
    assert smooth_codimension(C) == 1
    orthant = Cone([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert is_smooth_face(orthant, Face((0, 1), 2))
    assert smooth_codimension(orthant) == 3


@pytest.mark.parametrize("name", sorted(DEL_PEZZO))
def test_reflexive_cones_are_gorenstein(name):
    gd = gorenstein_data(del_pezzo(name))
    assert gd.canonical_degree == (0, 0, 1)
    assert gd.gor_index == 1


@pytest.mark.parametrize("n", range(1, 6))
def test_an_gorenstein(n):
    gd = gorenstein_data(Cone([(1, 0), (-n, n + 1)]))
    assert gd.canonical_degree == (1, 1) and gd.is_gorenstein


def test_non_q_gorenstein():
    C = Cone([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 2)])
    assert gorenstein_data(C) is None
    assert not C.is_q_gorenstein()


def test_q_gorenstein_index():
    gd = gorenstein_data(Cone([(1, 0), (-3, 7)]))
    assert gd.canonical_degree == (7, 4) and gd.gor_index == 7


def test_non_extremal_ray_rejected():
    with pytest.raises(ConeError):
        Cone([(1, 0), (1, 2), (-1, 1)])


def test_not_pointed():
    with pytest.raises(ConeError, match="not pointed"):
        Cone([(1, 0), (-1, 0), (0, 1)])


def test_duplicate_and_zero_rays():
    with pytest.raises(ConeError):
        Cone([(1, 0), (2, 0), (0, 1)])
    with pytest.raises(ConeError):
        Cone([(0, 0), (0, 1)])


def test_polytope_cones():
    C = cone_over_polytope([(-1, -1), (1, -1), (1, 1), (-1, 1)])
    assert set(C.rays) == {(a, b, 1) for a in (-1, 1) for b in (-1, 1)}
    assert cone_over_polytope(DEL_PEZZO["dP6"]).N == 6
    assert cone_over_polytope(DEL_PEZZO["P2"]).N == 3


def test_reflexive():
    assert is_reflexive([(-1, -1), (1, -1), (1, 1), (-1, 1)])
    assert not is_reflexive([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert is_reflexive(DEL_PEZZO["dP6"])


def test_split_torus():
    reduced, k, _ = split_torus([(1, 0, 0), (0, 1, 0)])
    assert k == 1
    C = Cone.from_rays([(1, 1, 0), (1, -1, 0)])
    assert C.torus_rank == 1 and C.n == 2


def test_json_round_trip():
    C = conifold()
    assert Cone.from_dict(C.to_dict()) == C
