"""Rational polyhedral cones and their combinatorics.

A :class:`Cone` is given by primitive ray generators in ``N = Z^n``.  It is
always full-dimensional and pointed; torus factors ``X x T_k`` are carried by
``torus_rank`` (use :func:`split_torus` / :meth:`Cone.from_rays` for input
that does not span ``N``).  Dual rays and the face lattice are computed once
at construction by brute force over ``(n-1)``-subsets of rays, which is
plenty at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd
from typing import Sequence

from .exactlin import (
    Matrix,
    dot,
    hermite_normal_form,
    inverse,
    kernel,
    primitive,
    rank,
    smith_invariants,
    solve,
    to_integer_vector,
)


class ConeError(ValueError):
    """Invalid cone input (not pointed, duplicate rays, ...)."""


@dataclass(frozen=True)
class Face:
    """A face of a cone, recorded by the (sorted) indices of its rays."""

    ray_indices: tuple[int, ...]
    dim: int

    def __contains__(self, j: int) -> bool:
        return j in self.ray_indices

    def __len__(self) -> int:
        return len(self.ray_indices)


@dataclass(frozen=True)
class GorensteinData:
    canonical_degree: tuple[int, ...]
    gor_index: int

    @property
    def is_gorenstein(self) -> bool:
        return self.gor_index == 1


@dataclass(frozen=True)
class Polytope:
    """Lattice polytope given by its vertices."""

    vertices: tuple[tuple[int, ...], ...]

    def __init__(self, vertices: Sequence[Sequence[int]]):
        object.__setattr__(self, "vertices", tuple(tuple(int(x) for x in v) for v in vertices))

    @property
    def dim(self) -> int:
        return len(self.vertices[0])


def _normal_vectors(rays: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Primitive inward facet normals of the cone spanned by ``rays``."""
    normals: set[tuple[int, ...]] = set()
    for subset in combinations(range(len(rays)), n - 1):
        vecs = [rays[j] for j in subset]
        if rank(Matrix(vecs, n)) != n - 1:
            continue
        (u,) = kernel(Matrix(vecs, n))
        u = to_integer_vector(u)
        vals = [dot(u, a) for a in rays]
        if all(v >= 0 for v in vals):
            normals.add(u)
        elif all(v <= 0 for v in vals):
            normals.add(tuple(-x for x in u))
    return sorted(normals)


class Cone:
    """Full-dimensional pointed rational polyhedral cone.

    Parameters
    ----------
    rays:
        Integer ray generators; each is made primitive and duplicates are
        rejected.  Every ray must be extremal.
    torus_rank:
        Number of extra ``Z`` factors (the variety is ``X_sigma x T_k``).
    """

    def __init__(self, rays: Sequence[Sequence[int]], torus_rank: int = 0):
        if not rays:
            raise ConeError("a cone needs at least one ray")
        n = len(rays[0])
        prim = []
        for a in rays:
            if len(a) != n:
                raise ConeError("rays of different lengths")
            if not any(a):
                raise ConeError("zero ray")
            p = primitive(a)
            if p in prim:
                raise ConeError(f"duplicate ray {p}")
            prim.append(p)
        if torus_rank < 0:
            raise ConeError("negative torus rank")
        self.n = n
        self.rays: tuple[tuple[int, ...], ...] = tuple(prim)
        self.torus_rank = torus_rank
        if rank(Matrix(self.rays, n)) != n:
            raise ConeError("rays do not span N; split the torus factor first (Cone.from_rays)")
        self.dual_rays: tuple[tuple[int, ...], ...] = tuple(_normal_vectors(self.rays, n)) if n > 1 else ((1,),)
        if n == 1:
            if self.rays != ((1,),):
                raise ConeError("not pointed")
        elif not self.dual_rays or rank(Matrix(self.dual_rays, n)) != n:
            raise ConeError("not pointed")
        for j in range(len(self.rays)):
            if self._facet_rank_through(j) != n - 1 and n > 1:
                raise ConeError(f"ray {self.rays[j]} is not extremal")

    # -- construction helpers -------------------------------------------

    @classmethod
    def from_rays(cls, rays: Sequence[Sequence[int]], torus_rank: int = 0) -> "Cone":
        """Build a cone, splitting off a torus factor if ``rays`` do not span."""
        reduced, k, _ = split_torus(rays)
        return cls(reduced, torus_rank + k)

    @classmethod
    def from_dict(cls, data: dict) -> "Cone":
        n = int(data["lattice_rank"])
        rays = [[int(x) for x in r] for r in data["rays"]]
        if any(len(r) != n for r in rays):
            raise ConeError("ray length differs from lattice_rank")
        return cls.from_rays(rays, int(data.get("torus_rank", 0)))

    def to_dict(self) -> dict:
        return {"lattice_rank": self.n, "rays": [list(a) for a in self.rays], "torus_rank": self.torus_rank}

    # -- basic data ------------------------------------------------------

    @property
    def N(self) -> int:
        """Number of rays."""
        return len(self.rays)

    @property
    def ambient_rank(self) -> int:
        """Rank of ``M x Z^k``."""
        return self.n + self.torus_rank

    def pairings(self, R: Sequence[int]) -> tuple[int, ...]:
        """``<a_j, R>`` for every ray (torus coordinates of ``R`` are ignored)."""
        return tuple(dot(a, R[: self.n]) for a in self.rays)

    def in_dual(self, v: Sequence) -> bool:
        """Membership of ``v`` (an ``M x Z^k`` vector) in ``sigma^vee`` (times the torus)."""
        return all(dot(a, v[: self.n]) >= 0 for a in self.rays)

    def _facet_rank_through(self, j: int) -> int:
        zero = [u for u in self.dual_rays if dot(u, self.rays[j]) == 0]
        return rank(Matrix(zero, self.n)) if zero else 0

    def __eq__(self, other) -> bool:
        return isinstance(other, Cone) and self.rays == other.rays and self.torus_rank == other.torus_rank

    def __hash__(self) -> int:
        return hash((self.rays, self.torus_rank))

    def __repr__(self) -> str:
        extra = f", torus_rank={self.torus_rank}" if self.torus_rank else ""
        return f"Cone({[list(a) for a in self.rays]}{extra})"

    # -- face lattice ------------------------------------------------------

    @cached_property
    def _faces_by_dim(self) -> dict[int, list[Face]]:
        n = self.n
        facets = {
            frozenset(j for j, a in enumerate(self.rays) if dot(u, a) == 0) for u in self.dual_rays
        }
        found = set(facets)
        frontier = set(facets)
        while frontier:
            new = set()
            for F in frontier:
                for G in facets:
                    H = F & G
                    if H not in found:
                        new.add(H)
            found |= new
            frontier = new
        found.add(frozenset(range(self.N)))
        found.add(frozenset())
        out: dict[int, list[Face]] = {p: [] for p in range(n + 1)}
        for S in found:
            idx = tuple(sorted(S))
            d = rank(Matrix([self.rays[j] for j in idx], n)) if idx else 0
            out[d].append(Face(idx, d))
        for p in out:
            out[p].sort(key=lambda f: f.ray_indices)
        return out

    def faces(self, p: int) -> list[Face]:
        """All ``p``-dimensional faces, sorted by ray indices."""
        if p < 0 or p > self.n:
            return []
        return list(self._faces_by_dim[p])

    # -- dual, smoothness, Gorenstein -------------------------------------

    def dual(self) -> "Cone":
        return Cone(self.dual_rays)

    def is_smooth_face(self, face: Face) -> bool:
        if face.dim == 0:
            return True
        vecs = [self.rays[j] for j in face.ray_indices]
        if len(vecs) != face.dim:
            return False
        return smith_invariants(Matrix(vecs, self.n)) == [1] * face.dim

    @cached_property
    def smooth_codimension(self) -> int:
        for p in range(1, self.n + 1):
            if not all(self.is_smooth_face(f) for f in self.faces(p)):
                return p - 1
        return self.n

    @property
    def is_smooth(self) -> bool:
        return self.smooth_codimension == self.n

    @cached_property
    def gorenstein_data(self) -> GorensteinData | None:
        x = solve(Matrix(self.rays, self.n), [1] * self.N)
        if x is None:
            return None
        R = to_integer_vector(x)
        g = dot(self.rays[0], R)
        return GorensteinData(R, int(g))

    def is_q_gorenstein(self) -> bool:
        return self.gorenstein_data is not None


def dual_cone(cone: Cone) -> Cone:
    return cone.dual()


def faces(cone: Cone, p: int) -> list[Face]:
    return cone.faces(p)


def is_smooth_face(cone: Cone, face: Face) -> bool:
    return cone.is_smooth_face(face)


def smooth_codimension(cone: Cone) -> int:
    return cone.smooth_codimension


def gorenstein_data(cone: Cone) -> GorensteinData | None:
    return cone.gorenstein_data


def split_torus(rays: Sequence[Sequence[int]]) -> tuple[list[tuple[int, ...]], int, Matrix]:
    """Write a possibly lower-dimensional cone as a full cone times a torus.

    Returns ``(reduced_rays, k, V)`` where ``V`` is unimodular and
    ``a V = (a', 0)`` for every ray ``a``; ``k = n - rank``.
    """
    n = len(rays[0])
    A = Matrix(rays, n)
    r = rank(A)
    if r == n:
        return [tuple(int(x) for x in a) for a in rays], 0, Matrix.identity(n)
    reduced, Vinv = saturated_coordinates(rays, n)
    return reduced, n - r, inverse(Vinv)


def cone_over_polytope(P: Polytope | Sequence[Sequence[int]], height: int = 1) -> Cone:
    verts = P.vertices if isinstance(P, Polytope) else [tuple(v) for v in P]
    if height < 1:
        raise ConeError("height must be positive")
    return Cone([tuple(v) + (height,) for v in verts])


def polytope_facets(P: Polytope | Sequence[Sequence[int]]) -> list[tuple[tuple[int, ...], Fraction]]:
    """Facets ``<u, x> >= -c`` of a full-dimensional lattice polytope.

    Each ``u`` is primitive; ``c`` may be rational only if the polytope does
    not contain ``0`` (in which case it could also be negative).
    """
    C = cone_over_polytope(P, 1)
    out = []
    for w in C.dual_rays:
        u, c = w[:-1], w[-1]
        g = 0
        for x in u:
            g = gcd(g, x)
        out.append((tuple(x // g for x in u), Fraction(c, g)))
    return out


def is_reflexive(P: Polytope | Sequence[Sequence[int]]) -> bool:
    """``0`` is interior and every facet is at lattice distance one."""
    return all(c == 1 for _, c in polytope_facets(P))


def saturated_coordinates(vectors: Sequence[Sequence[int]], n: int) -> tuple[list[tuple[int, ...]], Matrix]:
    """Coordinates of ``vectors`` in a basis of the saturation ``N ∩ span``.

    Returns ``(coords, Vinv)``: the first ``r`` rows of ``Vinv`` form a basis
    of the saturated sublattice, and a functional ``R`` on ``N`` restricts to
    ``(Vinv @ R)[:r]`` in the dual coordinates.
    """
    A = Matrix(vectors, n)
    r = rank(A)
    aug = Matrix(list(A.data) + list(Matrix.identity(n).data), n)
    H = hermite_normal_form(aug)
    V = H.submatrix(range(A.rows, A.rows + n), range(n))
    AV = A @ V
    coords = [tuple(int(x) for x in AV.row(i)[:r]) for i in range(A.rows)]
    return coords, inverse(V)
