from __future__ import annotations

import random
from fractions import Fraction

import pytest

from conftest import del_pezzo
from torichodge.exactlin import Matrix
from torichodge.hilbert import surface_cone
from torichodge.poisson import PoissonStructure, an_structure, certificate_points, determinant_form
from torichodge.quantize import (
    MCElement,
    _bilinear,
    degree_map,
    first_order_matches,
    lift_poisson,
    mc_check,
    membership_equiv,
    moyal_star,
    perturbed,
    reduce_star,
)
from torichodge.toric import Cone


def test_class_groups():
    assert degree_map(surface_cone(2, 1)).class_group == {"free_rank": 0, "torsion": [2]}
    assert degree_map(surface_cone(7, 3)).class_group == {"free_rank": 0, "torsion": [7]}
    assert degree_map(Cone([(1, 0), (0, 1)])).class_group == {"free_rank": 0, "torsion": []}
    assert degree_map(del_pezzo("dP6")).class_group == {"free_rank": 3, "torsion": []}


def test_degree_map_round_trip():
    gm = degree_map(surface_cone(5, 2))
    for lam in [(0, 1), (3, 1), (7, 4)]:
        assert gm.preimage(gm(lam)) == lam
    assert gm.preimage((1, 0)) is None


def test_membership_equivalence_example():
    assert membership_equiv(surface_cone(2, 1), (1, 1), (2, 2)) == (True, True)


@pytest.mark.parametrize("cone", [surface_cone(7, 3), del_pezzo("F1")])
def test_membership_equivalence_random(cone):
    rng = random.Random(9)
    for _ in range(100):
        lam = tuple(rng.randint(-4, 4) for _ in range(cone.n))
        R = tuple(rng.randint(-4, 4) for _ in range(cone.n))
        lhs, rhs = membership_equiv(cone, lam, R)
        assert lhs == rhs


@pytest.mark.parametrize("n, q", [(2, 1), (3, 2), (5, 2)])
def test_degree_zero_lift(n, q):
    X = surface_cone(n, q)
    p = PoissonStructure([((0, 0), determinant_form())])
    L = lift_poisson(p, X, samples=50)
    assert L.ok, L.checks
    gm = L.degree_map
    F = L.components[0][1]
    for a in certificate_points(X):
        for b in certificate_points(X):
            assert _bilinear(F, gm(a), gm(b)) == _bilinear(determinant_form(), a, b)


def test_an_lift():
    X = surface_cone(2, 1)
    L = lift_poisson(an_structure(1), X, samples=50)
    assert L.ok
    gm = L.degree_map
    assert L.components[0][0] == gm((-1, -1))
    assert _bilinear(L.components[0][1], gm((0, 1)), gm((2, 1))) == -2


def test_lift_with_torus_factor():
    C = Cone.from_rays([(1, 0, 0), (0, 1, 0)])
    F = Matrix([[0, 1, 2], [-1, 0, 3], [-2, -3, 0]])
    L = lift_poisson(PoissonStructure([((0, 0, 0), F)]), C, samples=30)
    assert L.ok


def test_moyal_star_values():
    S = moyal_star(Matrix([[0, 1], [-1, 0]]), 3)
    assert S.coefficients((1, 0), (0, 1)) == [1, Fraction(1, 2), Fraction(1, 8), Fraction(1, 48)]
    assert S.coefficients((0, 1), (1, 0))[1] == Fraction(-1, 2)
    with pytest.raises(ValueError):
        moyal_star(Matrix([[0, 1], [1, 0]]), 2)


def test_quantization_of_a1():
    X = surface_cone(2, 1)
    p = PoissonStructure([((0, 0), determinant_form())])
    L = lift_poisson(p, X, samples=20)
    S = reduce_star(moyal_star(L.components[0][1], 3), X)
    assert mc_check(S, X, K=3).passed
    pts = certificate_points(X)
    assert first_order_matches(S, p, X, [(a, b) for a in pts for b in pts])
    bad = mc_check(perturbed(S, 2, Matrix([[1, 0], [0, 1]])), X, K=3)
    assert not bad.passed and bad.first_failing_order == 2


def test_mc_element_and_order_checks():
    X = Cone([(1, 0), (0, 1)])
    F = Matrix([[0, 1], [-1, 0]])
    S = moyal_star(F, 2, X)
    elem = MCElement([(m + 1, g) for m, g in enumerate(S.gammas)])
    assert mc_check(elem, X, K=2).passed
    with pytest.raises(ValueError):
        mc_check(elem, X)
    with pytest.raises(ValueError):
        mc_check(S, X, K=5)
