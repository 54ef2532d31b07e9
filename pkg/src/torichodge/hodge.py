"""Hodge pieces ``T^{k,-R}_(i)`` of affine toric varieties by exact ranks.

For a degree ``R`` every face ``tau`` of the cone gets the set ``E_tau^R`` of
semigroup generators ``e`` with ``<a_j, e> < <a_j, R>`` for all rays of
``tau``.  Alternating multi-additive ``i``-forms on the spans of these sets
form a finite cochain complex over the face lattice (apex term = forms on all
of ``M``); its cohomology in position ``k`` is ``T^{k,-R}_(i)`` as long as
``k`` does not exceed the smooth codimension ``d`` of the cone.

The complex only depends on the family of sets ``E_j^R`` (one per ray), so
complexes are cached on that signature; scans over large degree boxes reuse
almost everything.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Iterable, Mapping, Sequence

from .exactlin import (
    Matrix,
    block_matrix,
    compound_restriction,
    det,
    dot,
    rank,
    rank_kernel,
    row_space_basis,
)
from .hilbert import HilbertBasis, generators, hilbert_basis, surface_data, _surface_parameters
from .toric import Cone, Face, is_reflexive

MINUS = "minus"
PLUS = "plus"


class TheoremRangeError(ValueError):
    """Requested cohomological position lies beyond the smooth codimension."""


@dataclass(frozen=True)
class Degree:
    """A lattice degree with its grading sense.

    ``minus`` is the ``T^{k,-R}`` convention; ``plus`` addresses the
    positive grading ``T^{k,R}`` and uses the convex sets for ``-R``.
    """

    R: tuple[int, ...]
    sense: str = MINUS

    def __post_init__(self):
        object.__setattr__(self, "R", tuple(int(x) for x in self.R))
        if self.sense not in (MINUS, PLUS):
            raise ValueError(f"unknown sense {self.sense!r}")

    def effective(self) -> tuple[int, ...]:
        return self.R if self.sense == MINUS else tuple(-x for x in self.R)


def as_degree(R) -> Degree:
    return R if isinstance(R, Degree) else Degree(tuple(R))


@dataclass(frozen=True)
class HodgeDims:
    """``i -> dim T^{k,-R}_(i)`` for one degree and position ``k``."""

    dims: Mapping[int, int]

    def __getitem__(self, i: int) -> int:
        return self.dims.get(i, 0)

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total == 0

    def to_json(self) -> dict[str, int]:
        return {str(i): d for i, d in sorted(self.dims.items())}


@dataclass
class DegreeGeometry:
    degree: Degree
    pairings: tuple[int, ...]
    W: tuple[int, ...]
    faces: dict[int, list[Face]]
    e_sets: dict[tuple[int, ...], tuple[tuple[int, ...], ...]]
    spans: dict[tuple[int, ...], tuple[tuple[Fraction, ...], ...]]

    def e_set(self, face: Face | Sequence[int]) -> tuple[tuple[int, ...], ...]:
        key = face.ray_indices if isinstance(face, Face) else tuple(sorted(face))
        return self.e_sets[key]

    def span_dim(self, face: Face | Sequence[int]) -> int:
        key = face.ray_indices if isinstance(face, Face) else tuple(sorted(face))
        return len(self.spans[key])


@dataclass
class HodgeComplex:
    i: int
    faces: list[list[Face]]
    term_dims: list[int]
    block_dims: list[list[int]]
    differentials: list[Matrix] = field(repr=False)
    _ranks: dict = field(default_factory=dict, repr=False)

    def rank_of(self, p: int) -> int:
        if p < 0 or p >= len(self.differentials):
            return 0
        if p not in self._ranks:
            self._ranks[p] = rank(self.differentials[p])
        return self._ranks[p]

    def cohomology(self, k: int) -> int:
        """``dim ker d_k - rank d_{k-1}`` at position ``k``."""
        if k < 0 or k >= len(self.term_dims):
            raise IndexError(k)
        return self.term_dims[k] - self.rank_of(k) - self.rank_of(k - 1)


def W(c: int) -> int:
    return 2 if c > 1 else (1 if c == 1 else 0)


def _gens(cone: Cone, E) -> tuple[tuple[int, ...], ...]:
    if E is None:
        E = hilbert_basis(cone)
    if isinstance(E, HilbertBasis):
        return tuple(generators(cone, E))
    gens = tuple(tuple(e) for e in E)
    if gens and len(gens[0]) == cone.n and cone.torus_rank:
        return tuple(generators(cone, HilbertBasis(gens)))
    return gens


def _signature(cone: Cone, gens, c: Sequence[int]) -> tuple[frozenset, ...]:
    return tuple(
        frozenset(idx for idx, e in enumerate(gens) if dot(a, e[: cone.n]) < cj)
        for a, cj in zip(cone.rays, c)
    )


def _max_dim(cone: Cone) -> int:
    return min(cone.smooth_codimension + 1, cone.n)


def degree_geometry(cone: Cone, E=None, R=(0,), max_dim: int | None = None) -> DegreeGeometry:
    """Pairings, ``E_tau^R`` and their spans for faces up to ``max_dim``.

    ``max_dim`` defaults to ``d + 1`` (capped at ``n``).
    """
    degree = as_degree(R)
    gens = _gens(cone, E)
    c = cone.pairings(degree.effective())
    sig = _signature(cone, gens, c)
    top = _max_dim(cone) if max_dim is None else max_dim
    faces = {p: cone.faces(p) for p in range(top + 1)}
    e_sets, spans = {}, {}
    dim = cone.ambient_rank
    for p, flist in faces.items():
        for f in flist:
            idx = _face_indices(sig, f, len(gens))
            e_sets[f.ray_indices] = tuple(gens[t] for t in sorted(idx))
            spans[f.ray_indices] = _span(gens, idx, dim)
    return DegreeGeometry(degree, c, tuple(W(x) for x in c), faces, e_sets, spans)


def _face_indices(sig, face: Face, ngens: int) -> frozenset:
    if not face.ray_indices:
        return frozenset(range(ngens))
    out = sig[face.ray_indices[0]]
    for j in face.ray_indices[1:]:
        out = out & sig[j]
    return out


def _span(gens, idx: Iterable[int], dim: int):
    return _span_cached(gens, frozenset(idx), dim)


@lru_cache(maxsize=262144)
def _span_cached(gens: tuple, idx: frozenset, dim: int):
    return row_space_basis([gens[t] for t in sorted(idx)], dim)


def _pivots(basis) -> list[int]:
    piv = []
    for row in basis:
        piv.append(next(j for j, x in enumerate(row) if x != 0))
    return piv


def _inclusion(sub, ambient) -> Matrix:
    """Coefficients writing the RREF basis ``sub`` in the RREF basis ``ambient``."""
    piv = _pivots(ambient)
    return Matrix([[row[p] for p in piv] for row in sub], len(ambient))


def _orientation(cone: Cone, face: Face) -> list[tuple[int, ...]]:
    chosen: list[tuple[int, ...]] = []
    for j in face.ray_indices:
        cand = chosen + [cone.rays[j]]
        if rank(Matrix(cand, cone.n)) == len(cand):
            chosen = cand
        if len(chosen) == face.dim:
            break
    return chosen


def incidence(cone: Cone, small: Face, big: Face) -> int:
    """Orientation sign of ``small`` as a facet of ``big`` (inward ray first)."""
    extra = next(j for j in big.ray_indices if j not in small.ray_indices)
    Bbig = _orientation(cone, big)
    frame = [cone.rays[extra]] + _orientation(cone, small)
    n = cone.n
    for cols in combinations(range(n), big.dim):
        d_big = det(Matrix([[v[c] for c in cols] for v in Bbig], big.dim))
        if d_big != 0:
            d = det(Matrix([[v[c] for c in cols] for v in frame], big.dim))
            return 1 if (d > 0) == (d_big > 0) else -1
    raise AssertionError("degenerate face orientation")


@lru_cache(maxsize=None)
def _incidences(cone: Cone, p: int) -> dict[tuple[int, int], int]:
    small, big = cone.faces(p), cone.faces(p + 1)
    out = {}
    for a, s in enumerate(small):
        ss = set(s.ray_indices)
        for b, t in enumerate(big):
            if ss <= set(t.ray_indices):
                out[(a, b)] = incidence(cone, s, t)
    return out


@lru_cache(maxsize=65536)
def _complex_cached(cone: Cone, gens: tuple, i: int, top: int, sig: tuple) -> HodgeComplex:
    dim = cone.ambient_rank
    faces = [cone.faces(p) for p in range(top + 1)]
    spans = [[_span(gens, _face_indices(sig, f, len(gens)), dim) for f in flist] for flist in faces]
    block_dims = [[comb(len(s), i) for s in row] for row in spans]
    term_dims = [sum(row) for row in block_dims]
    diffs = []
    for p in range(top):
        inc = _incidences(cone, p)
        blocks = []
        for b, _t in enumerate(faces[p + 1]):
            line = []
            for a, _s in enumerate(faces[p]):
                rows, cols = block_dims[p + 1][b], block_dims[p][a]
                sign = inc.get((a, b))
                if sign is None or rows == 0 or cols == 0:
                    line.append(Matrix.zeros(rows, cols))
                    continue
                C = _inclusion(spans[p + 1][b], spans[p][a])
                R = compound_restriction(C, i)
                line.append(R if sign > 0 else Matrix([[-x for x in r] for r in R.data], R.cols))
            blocks.append(line)
        if not blocks or not blocks[0]:
            diffs.append(Matrix.zeros(term_dims[p + 1], term_dims[p]))
        else:
            diffs.append(_assemble(blocks, term_dims[p + 1], term_dims[p]))
    return HodgeComplex(i, faces, term_dims, block_dims, diffs)


def _assemble(blocks, rows: int, cols: int) -> Matrix:
    if rows == 0 or cols == 0:
        return Matrix.zeros(rows, cols)
    nonempty_rows = [line for line in blocks if line[0].rows > 0]
    if not nonempty_rows:
        return Matrix.zeros(0, cols)
    return block_matrix(nonempty_rows)


def build_complex(cone: Cone, E=None, R=(0,), i: int = 1, max_dim: int | None = None) -> HodgeComplex:
    """The finite complex of alternating ``i``-forms over faces of dim ``<= max_dim``."""
    if i < 1:
        raise ValueError("Hodge index must be >= 1")
    degree = as_degree(R)
    gens = _gens(cone, E)
    top = _max_dim(cone) if max_dim is None else min(max_dim, cone.n)
    sig = _signature(cone, gens, cone.pairings(degree.effective()))
    return _complex_cached(cone, gens, i, top, sig)


def t_dims(cone: Cone, E=None, R=(0,), k: int = 1, indices: Iterable[int] | None = None) -> HodgeDims:
    """``i -> dim T^{k,-R}_(i)`` for ``i = 1..rank M`` (higher ``i`` vanish)."""
    d = cone.smooth_codimension
    if k < 0 or k > d:
        raise TheoremRangeError(
            f"k={k} beyond smooth codimension {d}; theorem inapplicable"
        )
    top = min(k + 1, cone.n)
    idx = range(1, cone.ambient_rank + 1) if indices is None else indices
    return HodgeDims({i: build_complex(cone, E, R, i, top).cohomology(k) for i in idx})


def poisson_space(cone: Cone, E=None, R=(0,)) -> list[Matrix]:
    """Basis of skew forms ``F`` making ``F(l, m) x^{R+l+m}`` well defined.

    ``R`` is read in the positive grading (the sets are those of ``-R``).
    """
    degree = as_degree(R)
    if degree.sense != PLUS:
        degree = Degree(degree.R, PLUS)
    cx = build_complex(cone, E, degree, 2, 1)
    n = cone.ambient_rank
    pairs = list(combinations(range(n), 2))
    _, K = rank_kernel(cx.differentials[0]) if cx.differentials else (0, Matrix.identity(len(pairs)))
    out = []
    for col in range(K.cols):
        v = K.column(col)
        F = [[Fraction(0)] * n for _ in range(n)]
        for (p, q), x in zip(pairs, v):
            F[p][q] = x
            F[q][p] = -x
        out.append(Matrix(F, n))
    return out


def box(ranges: Sequence[tuple[int, int]]) -> list[tuple[int, ...]]:
    """All lattice points of a product of integer intervals (inclusive)."""
    return list(product(*(range(lo, hi + 1) for lo, hi in ranges)))


def scan_degrees(cone: Cone, E=None, degrees: Iterable = (), k: int = 1) -> list[tuple[Degree, HodgeDims]]:
    """Nonzero ``T^{k,-R}`` tables over an explicit finite set of degrees."""
    gens = _gens(cone, E)
    out = []
    seen = set()
    for R in degrees:
        deg = as_degree(R)
        if deg in seen:
            continue
        seen.add(deg)
        dims = t_dims(cone, gens, deg, k)
        if not dims.is_zero():
            out.append((deg, dims))
    out.sort(key=lambda t: (t[0].sense, t[0].R))
    return out


def is_fano_cone(cone: Cone) -> bool:
    """Gorenstein cone over a reflexive polytope, smooth away from the apex."""
    gd = cone.gorenstein_data
    if gd is None or gd.gor_index != 1 or cone.torus_rank:
        return False
    if cone.smooth_codimension < cone.n - 1:
        return False
    # put R* = e_n by checking the cone is literally Cone(P x {1})
    if gd.canonical_degree != (0,) * (cone.n - 1) + (1,):
        return False
    return is_reflexive([a[:-1] for a in cone.rays])


def candidate_degrees(cone: Cone) -> list[tuple[int, ...]]:
    """Finite degree sets known to carry all of ``T^1``.

    Surfaces ``X(n,q)``: the degrees ``w^i`` and ``l w^i`` with ``l <= b_i``.
    Gorenstein Fano cones: the canonical degree only.
    """
    nq = _surface_parameters(cone)
    if nq is not None:
        sd = surface_data(*nq)
        out = set()
        for idx in range(1, sd.r + 1):
            w = sd.w[idx]
            for l in range(1, sd.b[idx - 1] + 1):
                out.add((l * w[0], l * w[1]))
        return sorted(out)
    if is_fano_cone(cone):
        return [cone.gorenstein_data.canonical_degree]
    raise ValueError("no closed-form candidate set for this cone; pass an explicit degree box")
