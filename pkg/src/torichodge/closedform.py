"""Closed formulas and bounds for ``dim T^{1,-R}_(i)``.

These are deliberately computed without the cochain complex of
:mod:`torichodge.hodge` (apart from the 2-face correction term of the planar
formula, which needs ``T^1`` of a surface) so they can serve as independent
oracles for it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .exactlin import Matrix, dot, kernel, rank, row_space_basis
from .hilbert import generators, hilbert_basis, surface_data
from .hodge import W, is_fano_cone, t_dims
from .toric import Cone, saturated_coordinates


def _c(m: int, i: int) -> int:
    return comb(m, i) if m >= 0 else 0


# -- surfaces ----------------------------------------------------------------


def surface_t1(n: int, q: int, R: Sequence[int], i: int) -> int:
    """``dim T^{1,-R}_(i)`` of ``X(n,q)`` from the dimensions of three spans.

    ``C(e1, i) + C(e2, i) - C(e12, i) - c_i`` with ``c_1 = 2``, ``c_2 = 1``,
    clamped at zero; zero for ``i > 2``.
    """
    if i < 1:
        raise ValueError("Hodge index must be >= 1")
    if i > 2:
        return 0
    sd = surface_data(n, q)
    a1, a2 = (1, 0), (-q, n)
    c1, c2 = dot(a1, R), dot(a2, R)
    E1 = [w for w in sd.w if dot(a1, w) < c1]
    E2 = [w for w in sd.w if dot(a2, w) < c2]
    E12 = [w for w in E1 if w in E2]
    dims = [len(row_space_basis(E, 2)) for E in (E1, E2, E12)]
    ci = 2 if i == 1 else 1
    return max(0, _c(dims[0], i) + _c(dims[1], i) - _c(dims[2], i) - ci)


# -- threefolds ----------------------------------------------------------------


def ray_cycle(cone: Cone) -> list[int]:
    """Ray indices in cyclic order along the 2-faces; error if not a cycle."""
    if cone.n != 3:
        raise ValueError("ray cycle requires a 3-dimensional cone")
    adj: dict[int, list[int]] = {j: [] for j in range(cone.N)}
    for f in cone.faces(2):
        if len(f.ray_indices) != 2:
            raise ValueError("rays are not arranged in a cycle (non-simplicial 2-face)")
        j, k = f.ray_indices
        adj[j].append(k)
        adj[k].append(j)
    if any(len(v) != 2 for v in adj.values()):
        raise ValueError("rays are not arranged in a cycle")
    order = [0]
    prev, cur = None, 0
    while True:
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        if nxt == 0:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    if len(order) != cone.N:
        raise ValueError("rays are not arranged in a single cycle")
    return order


def chamber_count(pairings: Sequence[int]) -> int:
    """Number of maximal cyclic runs of entries ``> 1``."""
    big = [c > 1 for c in pairings]
    if all(big):
        return 1 if big else 0
    return sum(1 for j in range(len(big)) if big[j] and not big[j - 1])


def threefold_t1(cone: Cone, R: Sequence[int], i: int) -> int:
    """``dim T^{1,-R}_(i)`` of an isolated 3-dimensional toric singularity.

    For ``R > 0`` (all pairings positive) the chamber formulas apply verbatim.
    Otherwise the positive rays form one path of the cycle; then

    * ``i = 1``: lattice vertices whose both neighbours have pairing ``>= 1``,
    * ``i = 2``: ``m_1 + C(R) + e_2 - 3`` if the path has at least two rays,
      where ``e_2`` counts path ends with pairing ``>= 2``,
    * ``i = 3``: ``C(R) - 1``,

    all clamped at zero.
    """
    if i < 1:
        raise ValueError("Hodge index must be >= 1")
    order = ray_cycle(cone)
    if cone.smooth_codimension < 2:
        raise ValueError("threefold formula needs an isolated singularity")
    c = [dot(cone.rays[j], R) for j in order]
    if i >= 4:
        return 0
    m1 = sum(1 for x in c if x == 1)
    N = len(c)
    if all(x >= 1 for x in c):
        C = chamber_count(c)
        if i == 1:
            return max(0, m1 - 3)
        if i == 2:
            return max(0, m1 + C - 3)
        return max(0, C - 1)
    pos = [x >= 1 for x in c]
    if not any(pos):
        return 0
    # rotate so the positive path starts at index 0
    start = next(j for j in range(N) if pos[j] and not pos[j - 1])
    c = c[start:] + c[:start]
    length = sum(pos)
    path = c[:length]
    C = sum(1 for j in range(length) if path[j] > 1 and (j == 0 or path[j - 1] <= 1))
    if i == 1:
        return sum(1 for j in range(1, length - 1) if path[j] == 1)
    if i == 2:
        if length < 2:
            return 0
        e2 = (path[0] >= 2) + (path[-1] >= 2)
        return max(0, m1 + C + e2 - 3)
    return max(0, C - 1)


# -- the polyhedron Q(R) -------------------------------------------------------


@dataclass(frozen=True)
class QPolyhedron:
    """Cross-section ``sigma ∩ {<., R> = 1}`` through its rays of positive pairing."""

    R: tuple[int, ...]
    vertices: dict[int, tuple[Fraction, ...]]
    compact_edges: tuple[tuple[int, int], ...]
    compact: bool

    def affine_rank(self) -> int:
        pts = list(self.vertices.values())
        if len(pts) <= 1:
            return 0
        base = pts[0]
        return rank(Matrix([[x - y for x, y in zip(p, base)] for p in pts[1:]], len(base)))


def q_polyhedron(cone: Cone, R: Sequence[int]) -> QPolyhedron:
    c = cone.pairings(R)
    verts = {
        j: tuple(Fraction(x, cj) for x in a) for j, (a, cj) in enumerate(zip(cone.rays, c)) if cj >= 1
    }
    edges = tuple(
        f.ray_indices
        for f in cone.faces(2)
        if len(f.ray_indices) == 2 and all(c[j] >= 1 for j in f.ray_indices)
    )
    non_simplicial = [f for f in cone.faces(2) if len(f.ray_indices) != 2]
    if non_simplicial:
        raise ValueError("2-faces with more than two rays are not supported")
    return QPolyhedron(tuple(R[: cone.n]), verts, edges, all(x >= 1 for x in c))


def _edge_t1(cone: Cone, j: int, k: int, R: Sequence[int]) -> int:
    return _edge_t1_cached(cone, j, k, tuple(R[: cone.n]))


@lru_cache(maxsize=65536)
def _edge_t1_cached(cone: Cone, j: int, k: int, R: tuple) -> int:
    """``dim T^1_(1)`` of the 2-face ``<a_j, a_k>`` in the degree induced by ``R``."""
    coords, Vinv = saturated_coordinates([cone.rays[j], cone.rays[k]], cone.n)
    Rbar = tuple(int(x) for x in Vinv.apply(tuple(R[: cone.n]))[:2])
    face = Cone(coords)
    assert face.pairings(Rbar) == (dot(cone.rays[j], R), dot(cone.rays[k], R))
    return t_dims(face, None, Rbar, 1, indices=[1])[1]


def _v_term(c: int, n: int, i: int) -> int:
    if c > 1:
        return comb(n, i)
    if c == 1:
        return comb(n - 1, i)
    return 0


def _q_term(cone: Cone, j: int, k: int, R, c, i: int) -> int:
    if c[j] == 0 or c[k] == 0:
        return 0
    t = _edge_t1(cone, j, k, R)
    dim = cone.n - 2 + max(0, W(c[j]) + W(c[k]) - 2 - t)
    return _c(dim, i)


def _span_intersection_dim(spans: list[tuple], dim: int) -> int:
    """``dim`` of the intersection of subspaces given by row bases."""
    ann: list = []
    for B in spans:
        if not B:
            return 0
        ann.extend(kernel(Matrix(B, dim)))
    if not ann:
        return dim
    return dim - rank(Matrix(ann, dim))


def _edge_span(cone: Cone, gens, j: int, k: int, c) -> tuple:
    E = [e for e in gens if dot(cone.rays[j], e[: cone.n]) < c[j] and dot(cone.rays[k], e[: cone.n]) < c[k]]
    return row_space_basis(E, len(gens[0]) if gens else cone.n)


def planar_t1(cone: Cone, E=None, R: Sequence[int] = (), i: int = 1) -> int:
    """Closed formula for cones whose compact part of ``Q(R)`` is planar."""
    if i < 1:
        raise ValueError("Hodge index must be >= 1")
    Q = q_polyhedron(cone, R)
    if Q.affine_rank() > 2:
        raise ValueError("compact part of Q(R) is not planar; use bounds")
    n = cone.n
    c = cone.pairings(R)
    sV = sum(_v_term(x, n, i) for x in c)
    sQ = sum(_q_term(cone, j, k, R, c, i) for j, k in Q.compact_edges)
    s = 0
    if Q.compact:
        gens = generators(cone, hilbert_basis(cone) if E is None else E)
        spans = [_edge_span(cone, gens, j, k, c) for j, k in Q.compact_edges]
        s = _c(_span_intersection_dim(spans, n), i)
    return max(0, sV - sQ - comb(n, i) + s)


# -- bounds --------------------------------------------------------------------


@dataclass(frozen=True)
class Bounds:
    raw_lower: int
    raw_upper: int

    @property
    def lower(self) -> int:
        return max(0, self.raw_lower)

    @property
    def upper(self) -> int:
        return max(0, self.raw_upper)

    def contains(self, value: int) -> bool:
        return self.lower <= value <= self.upper


def bfs_tree(vertices: Iterable[int], edges: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    """Breadth-first spanning forest, visiting vertices and neighbours in index order."""
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for j, k in edges:
        adj[j].append(k)
        adj[k].append(j)
    seen: set[int] = set()
    tree = []
    for root in sorted(adj):
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in sorted(adj[v]):
                if w not in seen:
                    seen.add(w)
                    tree.append((min(v, w), max(v, w)))
                    queue.append(w)
    return tree


def _check_forest(edges: Sequence[tuple[int, int]]) -> None:
    parent: dict[int, int] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for j, k in edges:
        a, b = find(j), find(k)
        if a == b:
            raise ValueError("tree contains a cycle")
        parent[a] = b


def t1_bounds(cone: Cone, E=None, R: Sequence[int] = (), i: int = 1, tree=None) -> Bounds:
    """Lower bound from all compact edges, upper bound from a spanning tree."""
    Q = q_polyhedron(cone, R)
    n = cone.n
    c = cone.pairings(R)
    qterm = {e: _q_term(cone, e[0], e[1], R, c, i) for e in Q.compact_edges}
    if tree is None:
        tree = bfs_tree(Q.vertices, Q.compact_edges)
    else:
        tree = [tuple(sorted(e)) for e in tree]
        if any(e not in qterm for e in tree):
            raise ValueError("tree edges must be compact edges of Q(R)")
        _check_forest(tree)
    sV = sum(_v_term(x, n, i) for x in c)
    lower = sV - sum(qterm.values()) - comb(n, i)
    upper = sV - sum(qterm[e] for e in tree) - comb(n, i)
    return Bounds(lower, upper)


# -- Gorenstein vanishing and Fano cones ----------------------------------------


def qgor_vanishing_applies(cone: Cone, R: Sequence[int]) -> bool:
    """Q-Gorenstein, smooth in codimension two, and some pairing at least two."""
    if not cone.is_q_gorenstein() or cone.smooth_codimension < 2:
        return False
    return any(x >= 2 for x in cone.pairings(R))


def fano_t1(cone: Cone) -> dict[int, int]:
    """``i -> dim T^1_(i)`` for the cone over a smooth reflexive polytope."""
    if not is_fano_cone(cone):
        raise ValueError("not a cone over a reflexive polytope smooth away from the apex")
    n, N = cone.n, cone.N
    out = {}
    for i in range(1, n + 1):
        if i == n - 1:
            out[i] = N - n
        elif i >= n:
            out[i] = 0
        elif i == 1:
            out[i] = N - 3 if n == 3 else 0
        else:
            out[i] = 0
    return out
