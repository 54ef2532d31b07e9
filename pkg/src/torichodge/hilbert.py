"""Hilbert bases of the semigroups ``sigma^vee ∩ M``.

Surfaces use the Hirzebruch-Jung continued fraction recursion; everything
else enumerates lattice points in the box around the zonotope spanned by the
dual extreme rays and keeps the irreducible ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd

from .exactlin import dot
from .toric import Cone

MAX_DIMENSION = 4


@dataclass(frozen=True)
class HilbertBasis:
    elements: tuple[tuple[int, ...], ...]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, v) -> bool:
        return tuple(v) in self.elements


@dataclass(frozen=True)
class SurfaceData:
    n: int
    q: int
    b: tuple[int, ...]
    w: tuple[tuple[int, int], ...]

    @property
    def r(self) -> int:
        return len(self.b)

    def cone(self) -> Cone:
        return surface_cone(self.n, self.q)


def _check_nq(n: int, q: int) -> None:
    if not (0 < q < n) or gcd(n, q) != 1:
        raise ValueError(f"invalid cyclic quotient parameters (n, q) = ({n}, {q})")


def continued_fraction(n: int, q: int) -> list[int]:
    """Hirzebruch-Jung expansion ``n/(n-q) = b_1 - 1/(b_2 - ...)``."""
    _check_nq(n, q)
    x = Fraction(n, n - q)
    b = []
    while True:
        c = -((-x.numerator) // x.denominator)  # ceil
        b.append(c)
        if c == x:
            return b
        x = 1 / (c - x)


def surface_data(n: int, q: int) -> SurfaceData:
    b = continued_fraction(n, q)
    w = [(0, 1), (1, 1)]
    for bi in b:
        w.append((bi * w[-1][0] - w[-2][0], bi * w[-1][1] - w[-2][1]))
    if w[-1] != (n, q):
        raise AssertionError(f"generator recursion ended at {w[-1]}, expected {(n, q)}")
    return SurfaceData(n, q, tuple(b), tuple(w))


def surface_cone(n: int, q: int) -> Cone:
    """The cone ``<(1,0), (-q,n)>`` of the cyclic quotient ``X(n,q)``."""
    _check_nq(n, q)
    return Cone([(1, 0), (-q, n)])


def _surface_parameters(cone: Cone) -> tuple[int, int] | None:
    """Recognise ``<(1,0), (-q,n)>`` exactly (no change of coordinates)."""
    if cone.n != 2 or cone.N != 2 or cone.rays[0] != (1, 0):
        return None
    mq, n = cone.rays[1]
    q = -mq
    if n >= 2 and 0 < q < n and gcd(n, q) == 1:
        return n, q
    return None


def _grading(cone: Cone, v) -> int:
    return sum(dot(a, v) for a in cone.rays)


@lru_cache(maxsize=1024)
def hilbert_basis(cone: Cone) -> HilbertBasis:
    """Unique minimal generating set of ``sigma^vee ∩ M``, sorted lexicographically.

    Torus factors are not included; see :func:`generators`.
    """
    if cone.n > MAX_DIMENSION:
        raise ValueError(f"Hilbert bases supported up to dimension {MAX_DIMENSION}")
    nq = _surface_parameters(cone)
    if nq is not None:
        return HilbertBasis(tuple(sorted(surface_data(*nq).w)))
    return HilbertBasis(tuple(sorted(_hilbert_by_enumeration(cone))))


def _hilbert_by_enumeration(cone: Cone) -> list[tuple[int, ...]]:
    n = cone.n
    rho = cone.dual_rays
    lo = [sum(min(0, r[c]) for r in rho) for c in range(n)]
    hi = [sum(max(0, r[c]) for r in rho) for c in range(n)]
    candidates = [
        v for v in product(*(range(a, b + 1) for a, b in zip(lo, hi))) if any(v) and cone.in_dual(v)
    ]
    candidates.sort(key=lambda v: (_grading(cone, v), v))
    basis: list[tuple[int, ...]] = []
    pair = [tuple(dot(a, v) for a in cone.rays) for v in candidates]
    basis_pairs: list[tuple[int, ...]] = []
    for v, pv in zip(candidates, pair):
        reducible = any(all(x >= y for x, y in zip(pv, pb)) for pb in basis_pairs)
        if not reducible:
            basis.append(v)
            basis_pairs.append(pv)
    return basis


def generators(cone: Cone, basis: HilbertBasis | None = None) -> list[tuple[int, ...]]:
    """Semigroup generators of ``Lambda x Z^k`` as ambient vectors.

    The Hilbert basis padded by zeros, followed by ``±e`` for each torus
    coordinate.
    """
    basis = basis if basis is not None else hilbert_basis(cone)
    k = cone.torus_rank
    out = [tuple(e) + (0,) * k for e in basis]
    for t in range(k):
        unit = [0] * (cone.n + k)
        unit[cone.n + t] = 1
        out.append(tuple(unit))
        unit[cone.n + t] = -1
        out.append(tuple(unit))
    return out


def is_combination(target, basis, cone: Cone) -> bool:
    """Whether ``target`` is an ``N_0``-combination of ``basis`` (bounded DP)."""
    pairs = [tuple(dot(a, e) for a in cone.rays) for e in basis]
    goal = tuple(dot(a, target) for a in cone.rays)
    # pairings determine lattice points of a full-dimensional cone
    seen = {tuple(0 for _ in goal)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for e in pairs:
                s = tuple(x + y for x, y in zip(p, e))
                if all(x <= g for x, g in zip(s, goal)) and s not in seen:
                    if s == goal:
                        return True
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    return goal in seen
