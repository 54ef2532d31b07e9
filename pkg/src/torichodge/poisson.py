"""Hochschild cochains on semigroup algebras ``k[Lambda]`` and Poisson checks.

A cochain is evaluated on monomials ``x^{l_1}, ..., x^{l_m}`` and returns a
polynomial, stored as ``{exponent: coefficient}``.  A multi-form of degree
``R`` sends the monomials to ``f(l_1, ..., l_m) x^{R + l_1 + ... + l_m}`` and
drops the term when the exponent leaves ``Lambda``.

Permutations act on the right: ``(phi . pi)(a_1, ..., a_n) =
phi(a_{pi^-1(1)}, ..., a_{pi^-1(n)})``, so the group algebra product is plain
composition ``(pi rho)(k) = pi(rho(k))``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import factorial
from typing import Callable, Iterable, Mapping, Sequence

from .exactlin import Matrix, rank
from .hilbert import generators, hilbert_basis
from .hodge import Degree, PLUS, poisson_space
from .toric import Cone

Perm = tuple[int, ...]
Poly = dict[tuple[int, ...], Fraction]

MAX_ARITY = 4


# -- group algebra of S_n ----------------------------------------------------


def _compose(p: Perm, q: Perm) -> Perm:
    return tuple(p[q[k]] for k in range(len(p)))


def _sign(p: Perm) -> int:
    s = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_ARITY:
        raise ValueError(f"group algebra supported for 1 <= n <= {MAX_ARITY}, got {n}")


@dataclass(frozen=True)
class GroupAlgebraElement:
    """Element of ``Q[S_n]``; permutations are 0-based tuples ``k -> p[k]``."""

    n: int
    coefficients: Mapping[Perm, Fraction]

    def __post_init__(self):
        _check_n(self.n)
        clean = {tuple(p): Fraction(c) for p, c in self.coefficients.items() if c != 0}
        object.__setattr__(self, "coefficients", clean)

    @classmethod
    def unit(cls, n: int) -> "GroupAlgebraElement":
        return cls(n, {tuple(range(n)): Fraction(1)})

    @classmethod
    def scalar(cls, n: int, c) -> "GroupAlgebraElement":
        return cls(n, {tuple(range(n)): Fraction(c)})

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        out = dict(self.coefficients)
        for p, c in other.coefficients.items():
            out[p] = out.get(p, Fraction(0)) + c
        return GroupAlgebraElement(self.n, out)

    def __neg__(self) -> "GroupAlgebraElement":
        return GroupAlgebraElement(self.n, {p: -c for p, c in self.coefficients.items()})

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return self + (-other)

    def __mul__(self, other) -> "GroupAlgebraElement":
        if not isinstance(other, GroupAlgebraElement):
            return GroupAlgebraElement(self.n, {p: c * Fraction(other) for p, c in self.coefficients.items()})
        out: dict[Perm, Fraction] = {}
        for p, a in self.coefficients.items():
            for q, b in other.coefficients.items():
                r = _compose(p, q)
                out[r] = out.get(r, Fraction(0)) + a * b
        return GroupAlgebraElement(self.n, out)

    def __rmul__(self, c) -> "GroupAlgebraElement":
        return self * c

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupAlgebraElement) and self.n == other.n and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.coefficients.items())))

    def is_zero(self) -> bool:
        return not self.coefficients


def shuffle(n: int) -> GroupAlgebraElement:
    """``s_n``: signed sum of all ``(i, n-i)`` shuffles, ``1 <= i < n``."""
    if not 2 <= n <= MAX_ARITY:
        raise ValueError(f"shuffle defined for 2 <= n <= {MAX_ARITY}")
    out: dict[Perm, Fraction] = {}
    for i in range(1, n):
        for p in permutations(range(n)):
            if all(p[k] < p[k + 1] for k in range(i - 1)) and all(p[k] < p[k + 1] for k in range(i, n - 1)):
                out[p] = out.get(p, Fraction(0)) + _sign(p)
    return GroupAlgebraElement(n, out)


def eigenvalue(i: int) -> int:
    return 2**i - 2


def eulerian_idempotent(n: int, i: int) -> GroupAlgebraElement:
    """``e_n(i)`` as the Lagrange projector of ``s_n`` onto eigenvalue ``2^i - 2``."""
    if not 2 <= n <= MAX_ARITY or not 1 <= i <= n:
        raise ValueError(f"e_n(i) needs 2 <= n <= {MAX_ARITY} and 1 <= i <= n")
    s = shuffle(n)
    e = GroupAlgebraElement.unit(n)
    for j in range(1, n + 1):
        if j != i:
            e = e * (s - GroupAlgebraElement.scalar(n, eigenvalue(j))) * Fraction(1, eigenvalue(i) - eigenvalue(j))
    return e


# -- cochains --------------------------------------------------------------------


def _add_into(out: Poly, exp, c) -> None:
    if c == 0:
        return
    v = out.get(exp, Fraction(0)) + c
    if v == 0:
        out.pop(exp, None)
    else:
        out[exp] = v


def _vadd(*vs) -> tuple[int, ...]:
    return tuple(sum(x) for x in zip(*vs))


class LatticeCochain:
    """Base class: an ``m``-cochain on ``k[Lambda]`` evaluated on monomials."""

    arity: int
    cone: Cone

    def __call__(self, *lams) -> Poly:
        raise NotImplementedError

    def apply(self, args: Sequence[Poly]) -> Poly:
        """Multilinear extension to polynomial arguments."""
        out: Poly = {}
        for terms in product(*(a.items() for a in args)):
            coeff = Fraction(1)
            for _, c in terms:
                coeff *= c
            for e, v in self(*(t[0] for t in terms)).items():
                _add_into(out, e, coeff * v)
        return out

    def in_lattice(self, v) -> bool:
        return self.cone.in_dual(v)


class MultiForm(LatticeCochain):
    """Multi-linear coefficient tensor of written degree ``R``.

    ``tensor`` maps index tuples ``(i_1, ..., i_m)`` to coefficients; the value
    is ``sum T[i] l_1[i_1] ... l_m[i_m]``.
    """

    def __init__(self, cone: Cone, degree: Sequence[int], tensor: Mapping[tuple[int, ...], Fraction], arity: int):
        self.cone = cone
        self.degree = tuple(int(x) for x in degree)
        self.tensor = {tuple(k): Fraction(v) for k, v in tensor.items() if v != 0}
        self.arity = arity

    @classmethod
    def from_matrix(cls, cone: Cone, degree, F) -> "MultiForm":
        F = F if isinstance(F, Matrix) else Matrix(F)
        return cls(cone, degree, {(p, q): F.data[p][q] for p in range(F.rows) for q in range(F.cols)}, 2)

    def coefficient(self, *lams) -> Fraction:
        total = Fraction(0)
        for idx, c in self.tensor.items():
            t = c
            for lam, k in zip(lams, idx):
                t *= lam[k]
                if t == 0:
                    break
            total += t
        return total

    def __call__(self, *lams) -> Poly:
        exp = _vadd(self.degree, *lams)
        if not self.in_lattice(exp):
            return {}
        c = self.coefficient(*lams)
        return {exp: c} if c else {}


class FunctionCochain(LatticeCochain):
    """Cochain given by an arbitrary Python function on monomial exponents."""

    def __init__(self, cone: Cone, arity: int, fn: Callable[..., Poly]):
        self.cone = cone
        self.arity = arity
        self.fn = fn

    def __call__(self, *lams) -> Poly:
        return {e: Fraction(c) for e, c in self.fn(*lams).items() if c != 0}


class SumCochain(LatticeCochain):
    def __init__(self, parts: Sequence[LatticeCochain]):
        if not parts:
            raise ValueError("empty sum")
        self.parts = list(parts)
        self.cone = parts[0].cone
        self.arity = parts[0].arity
        if any(p.arity != self.arity for p in parts):
            raise ValueError("arity mismatch in sum")

    def __call__(self, *lams) -> Poly:
        out: Poly = {}
        for p in self.parts:
            for e, c in p(*lams).items():
                _add_into(out, e, c)
        return out


class CircleExpr(LatticeCochain):
    """Gerstenhaber circle product ``f o g`` with signs ``(-1)^{(u-1)(n+1)}``."""

    def __init__(self, f: LatticeCochain, g: LatticeCochain):
        self.f, self.g = f, g
        self.cone = f.cone
        self.arity = f.arity + g.arity - 1

    def __call__(self, *lams) -> Poly:
        m, n = self.f.arity, self.g.arity
        out: Poly = {}
        for u in range(m):
            sign = -1 if (u * (n + 1)) % 2 else 1
            inner = self.g(*lams[u : u + n])
            if not inner:
                continue
            args = [{lam: Fraction(1)} for lam in lams[:u]] + [inner] + [{lam: Fraction(1)} for lam in lams[u + n :]]
            for e, c in self.f.apply(args).items():
                _add_into(out, e, sign * c)
        return out


class BracketExpr(LatticeCochain):
    """``[f, g] = f o g - (-1)^{(m+1)(n+1)} g o f``, kept as an evaluator."""

    def __init__(self, f: LatticeCochain, g: LatticeCochain):
        self.f, self.g = f, g
        self.cone = f.cone
        self.arity = f.arity + g.arity - 1
        self._fg = CircleExpr(f, g)
        self._gf = CircleExpr(g, f)
        self._sign = -1 if ((f.arity + 1) * (g.arity + 1)) % 2 else 1

    def __call__(self, *lams) -> Poly:
        out = dict(self._fg(*lams))
        for e, c in self._gf(*lams).items():
            _add_into(out, e, -self._sign * c)
        return out


def bracket(f: LatticeCochain, g: LatticeCochain) -> BracketExpr:
    if f.arity < 1 or g.arity < 1:
        raise ValueError("bracket needs arities >= 1")
    return BracketExpr(f, g)


class ActedCochain(LatticeCochain):
    """``phi . x`` for a group algebra element ``x`` of matching arity."""

    def __init__(self, phi: LatticeCochain, x: GroupAlgebraElement):
        if x.n != phi.arity:
            raise ValueError("arity mismatch with group algebra element")
        self.phi, self.x = phi, x
        self.cone = phi.cone
        self.arity = phi.arity

    def __call__(self, *lams) -> Poly:
        out: Poly = {}
        for p, c in self.x.coefficients.items():
            inv = [0] * len(p)
            for k, pk in enumerate(p):
                inv[pk] = k
            args = tuple(lams[inv[k]] for k in range(len(p)))
            for e, v in self.phi(*args).items():
                _add_into(out, e, c * v)
        return out


def hodge_project(phi: LatticeCochain, i: int) -> LatticeCochain:
    """``phi . e_m(i)``; arity one is its own weight-one piece."""
    if phi.arity == 1:
        if i != 1:
            raise ValueError("arity-1 cochains have only the weight-1 piece")
        return phi
    return ActedCochain(phi, eulerian_idempotent(phi.arity, i))


def coboundary(f: LatticeCochain) -> LatticeCochain:
    """Hochschild differential of ``f`` with values in ``k[Lambda]``."""
    m = f.arity

    def df(*lams) -> Poly:
        out: Poly = {}
        for e, c in f(*lams[1:]).items():
            _add_into(out, _vadd(e, lams[0]), c)
        for u in range(m):
            merged = lams[:u] + (_vadd(lams[u], lams[u + 1]),) + lams[u + 2 :]
            sign = -1 if u % 2 == 0 else 1
            for e, c in f(*merged).items():
                _add_into(out, e, sign * c)
        s = -1 if (m + 1) % 2 else 1
        for e, c in f(*lams[:m]).items():
            _add_into(out, _vadd(e, lams[m]), s * c)
        return out

    return FunctionCochain(f.cone, m + 1, df)


def averaging_sides(f: LatticeCochain, lams: Sequence) -> tuple[Poly, Poly]:
    """Both sides of the averaging identity for ``f`` of arity ``n``.

    Left: signed sum of ``sgn(s) df(l_{s^-1(1)}, ..., l_{s^-1(n+1)})`` over
    ``s`` in ``S_{n+1}`` with ``s(1) < s(2)``.  Right:
    ``n! (f(l_1, l_3, ...) + f(l_2, l_3, ...) - f(l_1 + l_2, l_3, ...))``
    times ``x^{l_1 + l_2}`` placed like the Hochschild differential does.
    Only meaningful for ``f = f . e_n(n)``.
    """
    n = f.arity
    df = coboundary(f)
    left: Poly = {}
    for s in permutations(range(n + 1)):
        if s[0] < s[1]:
            inv = [0] * (n + 1)
            for k, sk in enumerate(s):
                inv[sk] = k
            sg = _sign(s)
            for e, c in df(*(lams[inv[k]] for k in range(n + 1))).items():
                _add_into(left, e, sg * c)
    right: Poly = {}
    rest = tuple(lams[2:])
    l1, l2 = lams[0], lams[1]
    zero = tuple(0 for _ in l1)
    terms = [(f(l1, *rest), l2, 1), (f(l2, *rest), l1, 1), (f(_vadd(l1, l2), *rest), zero, -1)]
    for vals, shift, sign in terms:
        for e, c in vals.items():
            _add_into(right, _vadd(e, shift), sign * factorial(n) * c)
    return left, right


# -- Poisson structures ----------------------------------------------------------


@dataclass
class PoissonStructure:
    """Sum of components ``F_i(l, m) x^{R_i + l + m}`` with skew ``F_i``."""

    components: list[tuple[tuple[int, ...], Matrix]]

    def __post_init__(self):
        comps = []
        for R, F in self.components:
            F = F if isinstance(F, Matrix) else Matrix(F)
            if F.rows != F.cols or any(F.data[p][q] != -F.data[q][p] for p in range(F.rows) for q in range(F.rows)):
                raise ValueError("Poisson component must be a skew square matrix")
            comps.append((tuple(int(x) for x in R), F))
        self.components = comps

    def cochain(self, cone: Cone) -> LatticeCochain:
        for R, F in self.components:
            if F.rows != cone.ambient_rank or len(R) != cone.ambient_rank:
                raise ValueError("component size does not match the lattice rank")
        return SumCochain([MultiForm.from_matrix(cone, R, F) for R, F in self.components])

    def to_dict(self) -> dict:
        return {
            "components": [
                {"degree": list(R), "skew_matrix": [[str(x) for x in row] for row in F.data]}
                for R, F in self.components
            ]
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PoissonStructure":
        comps = []
        for c in data["components"]:
            F = Matrix([[Fraction(str(x)) for x in row] for row in c["skew_matrix"]])
            comps.append((tuple(int(x) for x in c["degree"]), F))
        return cls(comps)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "PoissonStructure":
        return cls.from_dict(json.loads(text))


def determinant_form(size: int = 2) -> Matrix:
    if size != 2:
        raise ValueError("determinant form is a 2x2 skew form")
    return Matrix([[0, 1], [-1, 0]])


def an_structure(n: int) -> PoissonStructure:
    """The hypersurface structure of ``xy = z^{n+1}``: determinant form in degree ``-S_2``."""
    return PoissonStructure([((-1, -1), determinant_form())])


def an_generators(n: int) -> dict[str, tuple[int, int]]:
    """``x = S_1``, ``z = S_2``, ``y = S_3`` on the cone ``<(1,0), (-n, n+1)>``."""
    return {"x": (0, 1), "z": (1, 1), "y": (n + 1, n)}


def well_defined_check(p: PoissonStructure, cone: Cone, E=None) -> bool:
    """Each ``F_i`` lies in the space of admissible skew forms for its degree."""
    for R, F in p.components:
        basis = poisson_space(cone, E, Degree(R, PLUS))
        n = F.rows
        pairs = list(combinations(range(n), 2))
        rows = [[B.data[a][b] for a, b in pairs] for B in basis]
        target = [F.data[a][b] for a, b in pairs]
        r0 = rank(Matrix(rows, len(pairs))) if rows else 0
        if rank(Matrix(rows + [target], len(pairs))) != r0:
            return False
    return True


@dataclass
class JacobiReport:
    passed: bool
    checked: int
    violations: list[dict] = field(default_factory=list)
    violation_count: int = 0
    projected_violations: int = 0
    seed: int | None = None
    samples: int = 0

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "checked": self.checked,
            "violations": self.violations,
            "violation_count": self.violation_count,
            "projected_violations": self.projected_violations,
            "seed": self.seed,
            "samples": self.samples,
        }


def poly_to_json(P: Poly) -> list:
    return [{"exponent": list(e), "coeff": str(c)} for e, c in sorted(P.items())]


def certificate_points(cone: Cone, E=None) -> list[tuple[int, ...]]:
    """``E ∪ (E+E)`` for the ambient generating set, sorted."""
    gens = generators(cone, hilbert_basis(cone) if E is None else E)
    pts = set(gens)
    for a in gens:
        for b in gens:
            pts.add(_vadd(a, b))
    return sorted(pts)


def sample_points(cone: Cone, count: int, rng: random.Random, E=None, scale: int = 3) -> list[tuple[int, ...]]:
    """Random points of ``Lambda x Z^k`` in the box ``scale`` times the generator box."""
    gens = generators(cone, hilbert_basis(cone) if E is None else E)
    bound = scale * max(max(abs(x) for x in e) for e in gens)
    out = []
    dim = cone.ambient_rank
    while len(out) < count:
        v = tuple(rng.randint(-bound, bound) for _ in range(dim))
        if cone.in_dual(v):
            out.append(v)
    return out


def jacobiator(P: LatticeCochain, a, b, c) -> Poly:
    """``p(a, p(b, c)) + p(b, p(c, a)) + p(c, p(a, b))`` on monomials."""
    out: Poly = {}
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        for e, v in P.apply([{x: Fraction(1)}, P(y, z)]).items():
            _add_into(out, e, v)
    return out


def jacobi_check(
    p: PoissonStructure,
    cone: Cone,
    E=None,
    extra_samples: int = 1000,
    seed: int = 0,
    max_violations: int = 20,
) -> JacobiReport:
    """Pointwise Jacobi identity on ``E ∪ (E+E)`` triples plus seeded samples."""
    P = p.cochain(cone)
    e33 = hodge_project(bracket(P, P), 3)
    pts = certificate_points(cone, E)
    triples = list(product(pts, repeat=3))
    rng = random.Random(seed)
    samples = sample_points(cone, 3 * extra_samples, rng, E)
    triples += [tuple(samples[3 * t : 3 * t + 3]) for t in range(extra_samples)]
    shown = []
    nviol = projected = 0
    for a, b, c in triples:
        J = jacobiator(P, a, b, c)
        if J:
            nviol += 1
            if len(shown) < max_violations:
                shown.append({"triple": [list(a), list(b), list(c)], "value": poly_to_json(J)})
        if e33(a, b, c):
            projected += 1
    return JacobiReport(nviol == 0, len(triples), shown, nviol, projected, seed, extra_samples)
