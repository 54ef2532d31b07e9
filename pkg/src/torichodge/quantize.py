"""Lifting toric Poisson structures to affine space and quantizing them.

``g: M -> Z^N`` sends ``l`` to its pairings with the rays; ``g'`` extends it
by the identity on torus coordinates.  A Poisson structure on ``X x T_k`` is
lifted to a constant-coefficient structure on ``A^N x T_k`` by prescribing the
form on a frame ``g'(s_*), t_*``.  Degree-zero lifts are quantized by the
exponential (Moyal type) rule and pulled back along ``g'``.

Star products are truncated at order ``K`` in ``h``; a product of two
monomials is a map ``exponent -> [c_0, ..., c_K]``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Callable, Sequence

from .exactlin import Matrix, dot, inverse, rank, smith_invariants, solve
from .hilbert import generators, hilbert_basis
from .poisson import (
    Poly,
    PoissonStructure,
    _add_into,
    certificate_points,
    jacobiator,
    poly_to_json,
    sample_points,
)
from .toric import Cone

HPoly = dict[tuple[int, ...], list[Fraction]]


# -- the degree map ----------------------------------------------------------------


@dataclass(frozen=True)
class DegreeMap:
    """``g'(l, m) = (<l, a_1>, ..., <l, a_N>, m)``."""

    rays: tuple[tuple[int, ...], ...]
    torus_rank: int
    invariants: tuple[int, ...]

    @property
    def N(self) -> int:
        return len(self.rays)

    @property
    def n(self) -> int:
        return len(self.rays[0])

    @property
    def matrix(self) -> Matrix:
        """The ``N x n`` matrix of ``g`` (row ``j`` is ``a_j``)."""
        return Matrix(self.rays, self.n)

    def extended_matrix(self) -> Matrix:
        """The ``(N+k) x (n+k)`` matrix of ``g'``."""
        n, k = self.n, self.torus_rank
        rows = [list(a) + [0] * k for a in self.rays]
        rows += [[0] * n + [int(i == t) for i in range(k)] for t in range(k)]
        return Matrix(rows, n + k)

    def g(self, lam: Sequence[int]) -> tuple[int, ...]:
        return tuple(dot(a, lam[: self.n]) for a in self.rays)

    def __call__(self, lam: Sequence[int]) -> tuple[int, ...]:
        return self.g(lam) + tuple(lam[self.n : self.n + self.torus_rank])

    def preimage(self, v: Sequence[int]) -> tuple[int, ...] | None:
        """The unique ``l`` with ``g'(l) = v``, or ``None``."""
        x = solve(self.extended_matrix(), list(v))
        if x is None or any(c.denominator != 1 for c in x):
            return None
        return tuple(int(c) for c in x)

    @property
    def class_group(self) -> dict:
        """``Cl(X) = Z^{N-n} + sum Z/d`` from the invariant factors of ``g``."""
        return {"free_rank": self.N - self.n, "torsion": [d for d in self.invariants if d > 1]}


def degree_map(cone: Cone) -> DegreeMap:
    inv = tuple(smith_invariants(Matrix(cone.rays, cone.n)))
    return DegreeMap(cone.rays, cone.torus_rank, inv)


def membership_equiv(cone: Cone, lam: Sequence[int], R: Sequence[int]) -> tuple[bool, bool]:
    """Both sides of: ``l`` lies in some ``K^R_{a_j}`` iff ``g(l)`` lies in some ``K^{g(R)}_{e_j}``.

    The left side is decided with the rays of ``sigma``, the right side inside
    the orthant of ``Z^N`` using only the vectors ``g(l)`` and ``g(R)``.
    """
    lhs = cone.in_dual(lam) and any(dot(a, lam) < dot(a, R) for a in cone.rays)
    G = Matrix(cone.rays, cone.n)
    gl, gR = G.apply(list(lam[: cone.n])), G.apply(list(R[: cone.n]))
    rhs = all(x >= 0 for x in gl) and any(x < y for x, y in zip(gl, gR))
    return lhs, rhs


# -- lifting ----------------------------------------------------------------------


@dataclass
class LiftedPoisson:
    degree_map: DegreeMap
    components: list[tuple[tuple[int, ...], Matrix]]
    s_frame: list[tuple[int, ...]]
    t_frame: list[tuple[int, ...]]
    source: PoissonStructure
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v is True for v in self.checks.values())

    def structure(self) -> PoissonStructure:
        return PoissonStructure(self.components)

    def to_dict(self) -> dict:
        return {
            "s": [list(v) for v in self.s_frame],
            "t": [list(v) for v in self.t_frame],
            "components": PoissonStructure(self.components).to_dict()["components"],
            "checks": self.checks,
        }


def _bilinear(F: Matrix, a, b) -> Fraction:
    return sum((F.data[p][q] * a[p] * b[q] for p in range(F.rows) for q in range(F.cols) if a[p] and b[q]), Fraction(0))


def lift_frame(cone: Cone, E=None) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Torus units plus the first ``n`` independent basis elements, then greedy unit vectors."""
    basis = hilbert_basis(cone) if E is None else E
    n, k = cone.n, cone.torus_rank
    s: list[tuple[int, ...]] = []
    for t in range(k):
        s.append(tuple([0] * n + [int(i == t) for i in range(k)]))
    chosen: list[tuple[int, ...]] = []
    for e in sorted(tuple(e[:n]) for e in basis):
        if rank(Matrix(chosen + [e], n)) == len(chosen) + 1:
            chosen.append(e)
        if len(chosen) == n:
            break
    if len(chosen) < n:
        raise ValueError("cannot choose n independent semigroup elements")
    s += [e + (0,) * k for e in chosen]
    gm = degree_map(cone)
    cols = [gm(v) for v in s]
    t: list[tuple[int, ...]] = []
    N = cone.N
    for j in range(N):
        unit = tuple([int(i == j) for i in range(N)] + [0] * k)
        if rank(Matrix(cols + t + [unit], N + k)) == len(cols) + len(t) + 1:
            t.append(unit)
        if len(t) == N - n:
            break
    if len(cols) + len(t) != N + k:
        raise ValueError("cannot complete the frame to a basis")
    return s, t


def lift_poisson(
    p: PoissonStructure, cone: Cone, E=None, samples: int = 200, seed: int = 0
) -> LiftedPoisson:
    """Constant forms ``F_i`` on ``Z^N x Z^k`` with ``F_i(g'a, g'b) = f_i(a, b)``.

    ``F_i`` matches ``f_i`` on the frame ``g'(s_*)``, vanishes on frame pairs
    involving ``t_*`` and is recovered as ``B^-T D B^-1`` with ``B`` the frame
    matrix.  Frame constraints, the round trip on generators, consistency on
    out-of-support pairs and the Jacobi identity of the lift are verified.
    """
    gm = degree_map(cone)
    s, t = lift_frame(cone, E)
    frame = [gm(v) for v in s] + list(t)
    D = len(frame)
    B = Matrix.from_columns(frame, D)
    Binv = inverse(B)
    comps = []
    for R, f in p.components:
        if f.rows != cone.ambient_rank:
            raise ValueError("Poisson component size does not match the lattice rank")
        Dm = [[Fraction(0)] * D for _ in range(D)]
        for a in range(len(s)):
            for b in range(len(s)):
                Dm[a][b] = _bilinear(f, s[a], s[b])
        F = Binv.T @ Matrix(Dm, D) @ Binv
        comps.append((gm(R), F))
    lifted = LiftedPoisson(gm, comps, s, t, p)
    lifted.checks = _verify_lift(lifted, cone, E, samples, seed)
    return lifted


def _verify_lift(L: LiftedPoisson, cone: Cone, E, samples: int, seed: int) -> dict:
    gm = L.degree_map
    gens = generators(cone, hilbert_basis(cone) if E is None else E)
    frame_s = [gm(v) for v in L.s_frame]
    frame = True
    roundtrip = True
    for (R, f), (_, F) in zip(L.source.components, L.components):
        for a in range(len(L.s_frame)):
            for b in range(len(L.s_frame)):
                frame &= _bilinear(F, frame_s[a], frame_s[b]) == _bilinear(f, L.s_frame[a], L.s_frame[b])
            for tv in L.t_frame:
                frame &= _bilinear(F, frame_s[a], tv) == 0
        for u in L.t_frame:
            for v in L.t_frame:
                frame &= _bilinear(F, u, v) == 0
        for a in gens:
            for b in gens:
                roundtrip &= _bilinear(F, gm(a), gm(b)) == _bilinear(f, a, b)
    # out-of-support pairs: R + a + b outside Lambda must map outside the orthant
    rng = random.Random(seed)
    consistent = True
    pts = sample_points(cone, 2 * samples, rng, E)
    for (R, f), (gR, F) in zip(L.source.components, L.components):
        for j in range(samples):
            a, b = pts[2 * j], pts[2 * j + 1]
            target = tuple(x + y + z for x, y, z in zip(R, a, b))
            if cone.in_dual(target):
                continue
            img = tuple(x + y + z for x, y, z in zip(gR, gm(a), gm(b)))
            if all(x >= 0 for x in img[: gm.N]):
                consistent = False
            if _bilinear(F, gm(a), gm(b)) != _bilinear(f, a, b):
                consistent = False
    # Jacobi identity of the lift on triples from the box {0,1,2}^N x {-1,0,1}^k
    orthant = Cone([tuple(int(i == j) for i in range(gm.N)) for j in range(gm.N)], cone.torus_rank)
    P = L.structure().cochain(orthant)
    jac = True
    for _ in range(samples):
        tri = [
            tuple(rng.randint(0, 2) for _ in range(gm.N)) + tuple(rng.randint(-1, 1) for _ in range(gm.torus_rank))
            for _ in range(3)
        ]
        if jacobiator(P, *tri):
            jac = False
            break
    return {"frame": frame, "round_trip": roundtrip, "support": consistent, "jacobi": jac}


# -- star products ----------------------------------------------------------------


class StarProduct:
    """``x^a * x^b = x^{a+b} + sum_{m=1..K} h^m gamma_m(x^a, x^b)``.

    ``gammas[m-1]`` evaluates ``gamma_m`` on two exponents and returns a
    polynomial.  ``lattice`` decides which exponents are monomials of the
    algebra.
    """

    def __init__(self, K: int, gammas: Sequence[Callable[..., Poly]], lattice: Cone):
        if K < 0:
            raise ValueError("truncation order must be >= 0")
        self.K = K
        self.gammas = list(gammas)[:K]
        self.lattice = lattice
        self._memo: dict = {}

    def monomial(self, a, b) -> HPoly:
        key = (tuple(a), tuple(b))
        if key not in self._memo:
            self._memo[key] = self._monomial(*key)
        return self._memo[key]

    def _monomial(self, a, b) -> HPoly:
        out: HPoly = {}
        ab = tuple(x + y for x, y in zip(a, b))
        out[ab] = [Fraction(1)] + [Fraction(0)] * self.K
        for m, gm in enumerate(self.gammas, start=1):
            for e, c in gm(a, b).items():
                out.setdefault(e, [Fraction(0)] * (self.K + 1))[m] += c
        return {e: v for e, v in out.items() if any(v)}

    def __call__(self, P: HPoly, Q: HPoly) -> HPoly:
        out: HPoly = {}
        for a, ca in P.items():
            for b, cb in Q.items():
                for e, cm in self.monomial(a, b).items():
                    acc = out.setdefault(e, [Fraction(0)] * (self.K + 1))
                    for i in range(self.K + 1):
                        if ca[i] == 0:
                            continue
                        for j in range(self.K + 1 - i):
                            if cb[j] == 0:
                                continue
                            for m in range(self.K + 1 - i - j):
                                if cm[m]:
                                    acc[i + j + m] += ca[i] * cb[j] * cm[m]
        return {e: v for e, v in out.items() if any(v)}

    def unit(self, a) -> HPoly:
        return {tuple(a): [Fraction(1)] + [Fraction(0)] * self.K}

    def coefficients(self, a, b) -> list[Fraction]:
        """Coefficients of ``x^{a+b}`` in ``x^a * x^b``."""
        ab = tuple(x + y for x, y in zip(a, b))
        return self.monomial(a, b).get(ab, [Fraction(0)] * (self.K + 1))


def _form(F: Matrix) -> Callable:
    return lambda a, b: _bilinear(F, a, b)


def exponential_gammas(F: Matrix, K: int) -> list[Callable[..., Poly]]:
    def make(m):
        def gamma(a, b):
            c = (_bilinear(F, a, b) / 2) ** m / factorial(m)
            return {tuple(x + y for x, y in zip(a, b)): c} if c else {}

        return gamma

    return [make(m) for m in range(1, K + 1)]


def moyal_star(F: Matrix, K: int, lattice: Cone | None = None) -> StarProduct:
    """``x^a * x^b = sum_m (F(a,b)/2)^m / m! h^m x^{a+b}`` for a constant skew ``F``."""
    F = F if isinstance(F, Matrix) else Matrix(F)
    if any(F.data[p][q] != -F.data[q][p] for p in range(F.rows) for q in range(F.rows)):
        raise ValueError("F must be skew")
    if lattice is None:
        lattice = Cone([tuple(int(i == j) for i in range(F.rows)) for j in range(F.rows)])
    return StarProduct(K, exponential_gammas(F, K), lattice)


def reduce_star(S: StarProduct, cone: Cone, gm: DegreeMap | None = None) -> StarProduct:
    """Pull a star product on ``Z^N x Z^k`` back to ``Lambda`` along ``g'``."""
    gm = gm or degree_map(cone)

    def make(gamma):
        def pulled(a, b):
            out: Poly = {}
            for e, c in gamma(gm(a), gm(b)).items():
                pre = gm.preimage(e)
                if pre is None:
                    raise ValueError(f"target {e} is not in the image of g'")
                _add_into(out, pre, c)
            return out

        return pulled

    return StarProduct(S.K, [make(gm_) for gm_ in S.gammas], cone)


@dataclass
class MCElement:
    """Truncated ``gamma = sum_m h^m gamma_m`` of arity-2 cochains."""

    terms: list[tuple[int, Callable[..., Poly]]]
    degrees: list[tuple[int, ...]] | None = None

    def star(self, K: int, lattice: Cone) -> StarProduct:
        by_order = {m: g for m, g in self.terms}
        gammas = [by_order.get(m, lambda a, b: {}) for m in range(1, K + 1)]
        return StarProduct(K, gammas, lattice)


def perturbed(S: StarProduct, order: int, B: Matrix) -> StarProduct:
    """Add ``B(a,b)^2 x^{a+b}`` (symmetric, not bilinear) to ``gamma_order``."""
    gammas = list(S.gammas)
    base = gammas[order - 1]

    def gamma(a, b):
        out = dict(base(a, b))
        _add_into(out, tuple(x + y for x, y in zip(a, b)), _bilinear(B, a, b) ** 2)
        return out

    gammas[order - 1] = gamma
    return StarProduct(S.K, gammas, S.lattice)


@dataclass
class MCReport:
    passed: bool
    checked: int
    K: int
    violations: list[dict] = field(default_factory=list)
    first_failing_order: int | None = None
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "checked": self.checked,
            "K": self.K,
            "first_failing_order": self.first_failing_order,
            "violations": self.violations,
            "seed": self.seed,
        }


def _hpoly_json(P: HPoly) -> list:
    return [{"exponent": list(e), "coeffs": [str(c) for c in v]} for e, v in sorted(P.items())]


def mc_check(
    S: StarProduct | MCElement,
    cone: Cone,
    E=None,
    K: int | None = None,
    samples: int = 0,
    seed: int = 0,
    max_violations: int = 20,
) -> MCReport:
    """Associativity modulo ``h^{K+1}`` on ``E ∪ (E+E)`` triples and random triples."""
    if isinstance(S, MCElement):
        if K is None:
            raise ValueError("order K required for an MC element")
        S = S.star(K, cone)
    K = S.K if K is None else K
    if K > S.K:
        raise ValueError("check order exceeds the truncation order")
    pts = certificate_points(cone, E)
    triples = list(product(pts, repeat=3))
    rng = random.Random(seed)
    extra = sample_points(cone, 3 * samples, rng, E) if samples else []
    triples += [tuple(extra[3 * t : 3 * t + 3]) for t in range(samples)]
    violations = []
    first = None
    for a, b, c in triples:
        xa, xb, xc = S.unit(a), S.unit(b), S.unit(c)
        left = S(S(xa, xb), xc)
        right = S(xa, S(xb, xc))
        bad = None
        for e in set(left) | set(right):
            lv = left.get(e, [0] * (S.K + 1))
            rv = right.get(e, [0] * (S.K + 1))
            for m in range(K + 1):
                if lv[m] != rv[m]:
                    bad = m if bad is None else min(bad, m)
        if bad is not None:
            first = bad if first is None else min(first, bad)
            if len(violations) < max_violations:
                violations.append({"triple": [list(a), list(b), list(c)], "order": bad})
    return MCReport(not violations, len(triples), K, violations, first, seed)


def star_samples(S: StarProduct, pairs) -> list[dict]:
    return [{"a": list(a), "b": list(b), "coeffs": [str(c) for c in S.coefficients(a, b)]} for a, b in pairs]


def first_order_matches(S: StarProduct, p: PoissonStructure, cone: Cone, pairs) -> bool:
    """``h^1`` coefficient of ``x^a * x^b`` equals ``p(a, b) / 2`` on every pair."""
    P = p.cochain(cone)
    for a, b in pairs:
        got = {e: v[1] for e, v in S.monomial(a, b).items() if len(v) > 1 and v[1] != 0}
        want = {e: c / 2 for e, c in P(a, b).items()}
        if got != want:
            return False
    return True
