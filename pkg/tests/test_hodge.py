from __future__ import annotations

import random

import pytest

from conftest import an_cone, conifold, del_pezzo
from torichodge.exactlin import rank
from torichodge.hilbert import surface_cone
from torichodge.hodge import (
    MINUS,
    PLUS,
    Degree,
    TheoremRangeError,
    W,
    box,
    build_complex,
    candidate_degrees,
    degree_geometry,
    incidence,
    is_fano_cone,
    poisson_space,
    scan_degrees,
    t_dims,
)
from torichodge.toric import Cone


def test_W():
    assert [W(c) for c in (-1, 0, 1, 2, 5)] == [0, 0, 1, 2, 2]


@pytest.mark.parametrize("cone", [surface_cone(2, 1), surface_cone(7, 3), conifold(), del_pezzo("P2")])
def test_differentials_compose_to_zero(cone):
    R = (2,) * cone.n
    for i in (1, 2):
        cx = build_complex(cone, None, R, i)
        for p in range(len(cx.differentials) - 1):
            prod = cx.differentials[p + 1] @ cx.differentials[p]
            assert prod.is_zero()


def test_incidence_signs_on_square():
    C = conifold()
    edges = C.faces(2)
    for e in edges:
        signs = [incidence(C, r, e) for r in C.faces(1) if set(r.ray_indices) <= set(e.ray_indices)]
        assert sorted(signs) == [-1, 1]


def test_a1_complex_shapes():
    C = surface_cone(2, 1)
    assert build_complex(C, None, (2, 2), 1).term_dims == [2, 4, 1]
    assert build_complex(C, None, (2, 2), 2).term_dims == [1, 2, 0]
    dims = t_dims(C, None, (2, 2))
    assert dims[1] == 1 and dims[2] == 1
    assert t_dims(C, None, (1, 1)).is_zero()


def test_span_table():
    C = surface_cone(2, 1)
    g = degree_geometry(C, None, (2, 2))
    assert g.pairings == (2, 2)
    assert g.span_dim(()) == 2
    assert g.span_dim((0,)) == 2 and g.span_dim((1,)) == 2
    assert g.span_dim((0, 1)) == 1


def test_conifold():
    C = conifold()
    R = next(R for R in box([(-2, 2)] * 3) if t_dims(C, None, R)[1])
    found = t_dims(C, None, R)
    assert found.to_json() == {"1": 1, "2": 1, "3": 0}


def test_orthant_is_rigid():
    C = Cone([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert scan_degrees(C, None, box([(-2, 2)] * 3)) == []


def test_theorem_range():
    C = surface_cone(2, 1)
    with pytest.raises(TheoremRangeError, match="smooth codimension"):
        t_dims(C, None, (2, 2), k=2)


def test_sense_consistency():
    C = surface_cone(5, 2)
    rng = random.Random(2)
    for _ in range(20):
        R = (rng.randint(-6, 6), rng.randint(-6, 6))
        a = t_dims(C, None, Degree(R, PLUS))
        b = t_dims(C, None, Degree(tuple(-x for x in R), MINUS))
        assert a == b


def test_poisson_space_dims():
    C = surface_cone(2, 1)
    # degree 0: every constant skew form is admissible
    assert len(poisson_space(C, None, (0, 0))) == 1
    assert len(poisson_space(C, None, (-1, -1))) == 1
    assert len(poisson_space(C, None, (-3, -3))) == 0
    orth = Cone([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert len(poisson_space(orth, None, (0, 0, 0))) == 3
    for F in poisson_space(orth, None, (-1, 0, 0)):
        assert F.data[1][2] == 0


def test_scan_and_candidates():
    C = an_cone(3)
    table = scan_degrees(C, None, box([(-8, 8)] * 2))
    assert [d.R for d, v in table if v[2]] == [(2, 2), (3, 3), (4, 4)]
    assert set(candidate_degrees(C)) >= {(1, 1), (2, 2), (3, 3), (4, 4)}
    assert candidate_degrees(del_pezzo("dP6")) == [(0, 0, 1)]
    assert is_fano_cone(del_pezzo("F1"))
    with pytest.raises(ValueError):
        candidate_degrees(conifold())


def test_degree_validation():
    with pytest.raises(ValueError):
        Degree((1, 2), "sideways")
