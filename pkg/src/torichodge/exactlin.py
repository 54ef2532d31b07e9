"""Exact rational linear algebra.

Everything here works over :class:`fractions.Fraction` (Python ints are the
arbitrary precision integers).  Matrices are small and dense, so plain
Gaussian elimination is used throughout; nothing is ever rounded.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import Iterable, Sequence

Vector = tuple


class Matrix:
    """Immutable dense matrix of Fractions.

    Shape is stored explicitly so that ``0 x n`` and ``n x 0`` matrices are
    representable (empty kernels, restrictions to the zero space).
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(Fraction(x) for x in row) for row in data)
        if cols is None:
            if not rows:
                raise ValueError("column count required for a matrix without rows")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        self.rows = len(rows)
        self.cols = cols
        self.data = rows

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        return cls([[c[i] for c in columns] for i in range(rows)], len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self.data[i][j]

    def row(self, i: int) -> tuple:
        return self.data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def transpose(self) -> "Matrix":
        return Matrix([self.column(j) for j in range(self.cols)], self.rows)

    T = property(transpose)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = [other.column(j) for j in range(other.cols)]
        return Matrix(
            [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ocols] for r in self.data],
            other.cols,
        )

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product ``M v``."""
        return tuple(sum((a * Fraction(b) for a, b in zip(r, v)), Fraction(0)) for r in self.data)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.data[i][j] for j in cols] for i in rows], len(cols))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self.data for x in r)

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self.data]

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and self.data == other.data

    def __hash__(self) -> int:
        return hash((self.shape, self.data))

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


def as_matrix(M) -> Matrix:
    return M if isinstance(M, Matrix) else Matrix(M)


def block_matrix(blocks: Sequence[Sequence[Matrix]]) -> Matrix:
    """Assemble a block matrix; every block row must share heights."""
    out = []
    for brow in blocks:
        height = brow[0].rows
        for i in range(height):
            line: list = []
            for b in brow:
                line.extend(b.data[i])
            out.append(line)
    cols = sum(b.cols for b in blocks[0]) if blocks else 0
    return Matrix(out, cols)


def rref(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form.

    Returns the nonzero rows of the RREF together with the pivot columns.
    """
    M = as_matrix(M)
    A = [list(r) for r in M.data]
    pivots: list[int] = []
    r = 0
    for c in range(M.cols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        pv = A[r][c]
        if pv != 1:
            A[r] = [x / pv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                Ai, Ar = A[i], A[r]
                A[i] = [a - f * b for a, b in zip(Ai, Ar)]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(M) -> int:
    M = as_matrix(M)
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(rref(M)[1])


def rank_kernel(M) -> tuple[int, Matrix]:
    """Rank and a basis of the right null space of ``M``.

    The kernel basis is returned as a ``cols x (cols - rank)`` matrix whose
    columns span ``{v : M v = 0}``.
    """
    M = as_matrix(M)
    n = M.cols
    if M.rows == 0:
        return 0, Matrix.identity(n)
    R, pivots = rref(M)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return len(pivots), Matrix.from_columns(basis, n)


def kernel(M) -> list[tuple]:
    """Kernel basis as a list of vectors (convenience wrapper)."""
    K = rank_kernel(M)[1]
    return [K.column(j) for j in range(K.cols)]


def row_space_basis(vectors: Sequence[Sequence], dim: int) -> tuple[tuple, ...]:
    """Canonical (RREF) basis of the span of ``vectors`` inside ``Q^dim``."""
    if not vectors:
        return ()
    R, _ = rref(Matrix(vectors, dim))
    return tuple(tuple(r) for r in R)


def solve(M, b: Sequence) -> tuple | None:
    """One exact solution of ``M x = b`` or ``None`` if inconsistent."""
    M = as_matrix(M)
    aug = Matrix([list(r) + [bi] for r, bi in zip(M.data, b)], M.cols + 1)
    R, pivots = rref(aug)
    if M.cols in pivots:
        return None
    x = [Fraction(0)] * M.cols
    for row, p in zip(R, pivots):
        x[p] = row[-1]
    return tuple(x)


def det(M) -> Fraction:
    """Determinant by elimination."""
    M = as_matrix(M)
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    A = [list(r) for r in M.data]
    n = len(A)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            sign = -sign
        pv = A[c][c]
        result *= pv
        for i in range(c + 1, n):
            if A[i][c] != 0:
                f = A[i][c] / pv
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return sign * result


def inverse(M) -> Matrix:
    M = as_matrix(M)
    n = M.rows
    if M.cols != n:
        raise ValueError("inverse of a non-square matrix")
    aug = Matrix([list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M.data)], 2 * n)
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return Matrix([r[n:] for r in R], n)


def wedge_matrix(M, i: int) -> Matrix:
    """The ``i``-th compound matrix of ``M``.

    Rows and columns are indexed by lexicographically sorted ``i``-subsets of
    the row and column indices; each entry is the corresponding minor.
    """
    M = as_matrix(M)
    if i < 1 or i > min(M.rows, M.cols):
        raise ValueError(f"wedge power {i} out of range for shape {M.shape}")
    rsets = list(combinations(range(M.rows), i))
    csets = list(combinations(range(M.cols), i))
    if i == 1:
        return M
    return Matrix([[det(M.submatrix(I, J)) for J in csets] for I in rsets], len(csets))


def compound_restriction(C, i: int) -> Matrix:
    """Matrix of the pullback on alternating ``i``-forms along ``C``.

    ``C`` is an ``m' x m`` matrix writing a basis of a subspace in terms of a
    basis of the ambient space; the result maps coordinates of an ``i``-form
    on the ambient space to coordinates on the subspace.  Degenerate sizes
    (``i`` larger than a dimension) give the appropriately shaped zero map.
    """
    C = as_matrix(C)
    if i == 0:
        return Matrix([[1]], 1)
    r, c = comb(C.rows, i), comb(C.cols, i)
    if r == 0 or c == 0:
        return Matrix.zeros(r, c)
    return wedge_matrix(C, i)


# --- integer normal forms -------------------------------------------------


def _int_rows(M) -> list[list[int]]:
    M = as_matrix(M)
    if not M.is_integral():
        raise ValueError("integer matrix required")
    return [[int(x) for x in r] for r in M.data]


def hermite_normal_form(M) -> Matrix:
    """Column-style Hermite normal form ``H = M U`` with ``U`` unimodular.

    ``H`` is lower triangular in echelon sense: each pivot is positive, zero
    to its right, and entries left of a pivot lie in ``[0, pivot)``.
    Zero columns are moved to the end.
    """
    A = _int_rows(M)
    m = len(A)
    n = len(A[0]) if A else as_matrix(M).cols
    col = 0
    for r in range(m):
        if col >= n:
            break
        # gcd-reduce row r over columns col..n-1 by column operations
        while True:
            nz = [j for j in range(col, n) if A[r][j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(A[r][j]))
            if j0 != col:
                for row in A:
                    row[col], row[j0] = row[j0], row[col]
            done = True
            for j in range(col + 1, n):
                if A[r][j] != 0:
                    q = A[r][j] // A[r][col]
                    for row in A:
                        row[j] -= q * row[col]
                    if A[r][j] != 0:
                        done = False
            if done:
                break
        if A[r][col] == 0:
            continue
        if A[r][col] < 0:
            for row in A:
                row[col] = -row[col]
        piv = A[r][col]
        for j in range(col):
            q = A[r][j] // piv
            if q:
                for row in A:
                    row[j] -= q * row[col]
        col += 1
    return Matrix(A, n)


def smith_invariants(M) -> list[int]:
    """Nonzero invariant factors ``d_1 | d_2 | ...`` of an integer matrix."""
    A = _int_rows(M)
    m = len(A)
    n = len(A[0]) if A else 0
    invariants: list[int] = []
    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j] != 0]
        if not entries:
            break
        _, pi, pj = min(entries)
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        while True:
            changed = False
            piv = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // piv
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // piv
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        changed = True
            if changed:
                entries = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                entries += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, pi, pj = min(entries)
                A[t], A[pi] = A[pi], A[t]
                for row in A:
                    row[t], row[pj] = row[pj], row[t]
                continue
            # enforce divisibility against the remaining block
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            i, _ = bad
            A[t] = [a + b for a, b in zip(A[t], A[i])]
        invariants.append(abs(A[t][t]))
        t += 1
    return invariants


def normal_forms(M) -> tuple[Matrix, list[int]]:
    """Hermite normal form and Smith invariant factors of an integer matrix."""
    return hermite_normal_form(M), smith_invariants(M)


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def to_integer_vector(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Clear denominators and make primitive, keeping the direction."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return primitive([int(Fraction(x) * den) for x in v])


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))
