"""Exact scalars, monomial bases of symmetric powers and dense rational linear algebra.

Everything here works over :class:`fractions.Fraction`; there is no floating
point anywhere in the package.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Scalar = Fraction
ExpVec = tuple  # tuple[int, ...]


class DimensionError(ValueError):
    """Shapes or degrees of the operands do not fit together."""


def to_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars; pass a Fraction, int or 'p/q' string")
    return Fraction(x)


# ---------------------------------------------------------------------------
# monomial bases


def sym_dim(d: int, N: int) -> int:
    """Dimension of the degree-``N`` symmetric power of a ``d``-dimensional space."""
    if d < 1:
        raise ValueError("d must be positive")
    if N < 0:
        return 0
    return math.comb(d + N - 1, N)


@lru_cache(maxsize=None)
def monomial_basis(d: int, N: int) -> tuple:
    """All exponent vectors of length ``d`` and degree ``N`` in graded lex order.

    The first variable is the largest, so ``(2, 0) > (1, 1) > (0, 2)``.
    Negative ``N`` gives the empty basis of the zero space.
    """
    if d < 1:
        raise ValueError("d must be positive")
    if N < 0:
        return ()
    if d == 1:
        return ((N,),)
    out = []
    for a in range(N, -1, -1):
        for rest in monomial_basis(d - 1, N - a):
            out.append((a,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(d: int, N: int) -> dict:
    return {a: k for k, a in enumerate(monomial_basis(d, N))}


def multinomial(a: Sequence[int]) -> int:
    """Number of words with letter counts ``a``."""
    out = math.factorial(sum(a))
    for k in a:
        out //= math.factorial(k)
    return out


# ---------------------------------------------------------------------------
# symmetric polynomials


class SymPoly:
    """A homogeneous element of ``S^N`` of a ``dim``-dimensional space.

    Stored as a map from exponent vectors to nonzero Fractions. The symmetric
    algebra is the quotient of the tensor algebra, so ``v ** r`` (the image of
    ``v^{(x) r}``) has coefficient ``multinomial(a) * v^a`` on ``x^a``.

    A zero polynomial may carry a negative degree; it stands for the zero
    space ``S^N = 0`` with ``N < 0``.
    """

    __slots__ = ("dim", "degree", "terms")

    def __init__(self, dim: int, degree: int, terms=None):
        if dim < 1:
            raise ValueError("dim must be positive")
        clean = {}
        for a, c in (terms or {}).items():
            a = tuple(int(k) for k in a)
            if len(a) != dim or any(k < 0 for k in a) or sum(a) != degree:
                raise DimensionError(f"exponent {a} does not fit dim={dim}, degree={degree}")
            c = to_scalar(c)
            if c:
                clean[a] = clean.get(a, Fraction(0)) + c
                if not clean[a]:
                    del clean[a]
        if degree < 0 and clean:
            raise ValueError("only the zero polynomial may have negative degree")
        self.dim = dim
        self.degree = degree
        self.terms = clean

    # construction helpers
    @classmethod
    def zero(cls, dim: int, degree: int) -> "SymPoly":
        return cls(dim, degree)

    @classmethod
    def one(cls, dim: int) -> "SymPoly":
        return cls(dim, 0, {(0,) * dim: 1})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "SymPoly":
        exps = tuple(exps)
        return cls(len(exps), sum(exps), {exps: coeff})

    @classmethod
    def linear(cls, vec: Sequence) -> "SymPoly":
        d = len(vec)
        terms = {}
        for k, c in enumerate(vec):
            e = [0] * d
            e[k] = 1
            terms[tuple(e)] = c
        return cls(d, 1, terms)

    @classmethod
    def power(cls, vec: Sequence, r: int) -> "SymPoly":
        """The image of ``vec^{(x) r}``, i.e. the polynomial ``(vec . x)^r``."""
        return cls.linear(vec) ** r

    # arithmetic
    def __add__(self, other: "SymPoly") -> "SymPoly":
        self._check_same(other)
        terms = dict(self.terms)
        for a, c in other.terms.items():
            terms[a] = terms.get(a, 0) + c
        return SymPoly(self.dim, self.degree, terms)

    def __neg__(self) -> "SymPoly":
        return SymPoly(self.dim, self.degree, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SymPoly):
            if other.dim != self.dim:
                raise DimensionError("dimension mismatch in product")
            degree = self.degree + other.degree
            if not self.terms or not other.terms:
                return SymPoly(self.dim, degree)
            terms: dict = {}
            for a, c in self.terms.items():
                for b, e in other.terms.items():
                    key = tuple(x + y for x, y in zip(a, b))
                    terms[key] = terms.get(key, 0) + c * e
            return SymPoly(self.dim, degree, terms)
        s = to_scalar(other)
        return SymPoly(self.dim, self.degree, {a: s * c for a, c in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SymPoly":
        out = SymPoly.one(self.dim)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymPoly):
            return NotImplemented
        if not self.terms and not other.terms:
            return self.dim == other.dim and self.degree == other.degree
        return (self.dim, self.degree, self.terms) == (other.dim, other.degree, other.terms)

    def __hash__(self):
        return hash((self.dim, self.degree, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return f"SymPoly(dim={self.dim}, degree={self.degree}, 0)"
        body = " + ".join(f"{c}*x^{a}" for a, c in sorted(self.terms.items(), reverse=True))
        return f"SymPoly(dim={self.dim}, degree={self.degree}, {body})"

    def _check_same(self, other: "SymPoly") -> None:
        if (self.dim, self.degree) != (other.dim, other.degree):
            raise DimensionError(
                f"cannot combine S^{self.degree} in dim {self.dim} with S^{other.degree} in dim {other.dim}"
            )

    # evaluation and coordinates
    def coeff(self, a: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(a), Fraction(0))

    def coordinates(self) -> list:
        """Coefficient vector on ``monomial_basis(dim, degree)``."""
        return [self.coeff(a) for a in monomial_basis(self.dim, self.degree)]

    @classmethod
    def from_coordinates(cls, dim: int, degree: int, coords: Sequence) -> "SymPoly":
        return cls(dim, degree, dict(zip(monomial_basis(dim, degree), coords)))

    def evaluate(self, point: Sequence) -> Fraction:
        """Value of the polynomial map at ``point``.

        This is the pairing with ``point^{(x) degree}`` under the quotient
        convention.
        """
        if len(point) != self.dim:
            raise DimensionError("point has wrong length")
        total = Fraction(0)
        for a, c in self.terms.items():
            t = c
            for x, k in zip(point, a):
                if k:
                    t *= to_scalar(x) ** k
            total += t
        return total

    def substitute(self, forms: Sequence[Sequence]) -> "SymPoly":
        """Linear change of variables: old variable ``k`` becomes ``sum_l forms[k][l] y_l``."""
        if len(forms) != self.dim:
            raise DimensionError("need one linear form per variable")
        new_dim = len(forms[0]) if forms else 0
        if new_dim < 1:
            raise DimensionError("target dimension must be positive")
        lins = [SymPoly.linear(f) for f in forms]
        out = SymPoly.zero(new_dim, self.degree)
        if self.degree < 0:
            return out
        powers: dict = {}
        for a, c in self.terms.items():
            t = SymPoly.one(new_dim) * c
            for k, e in enumerate(a):
                if e:
                    if (k, e) not in powers:
                        powers[(k, e)] = lins[k] ** e
                    t = t * powers[(k, e)]
            out = out + t
        return out

    def embed(self, new_dim: int, offset: int = 0) -> "SymPoly":
        """The same polynomial in a larger variable set, starting at ``offset``."""
        if offset < 0 or offset + self.dim > new_dim:
            raise DimensionError("embedding does not fit")
        terms = {}
        for a, c in self.terms.items():
            e = [0] * new_dim
            e[offset:offset + self.dim] = a
            terms[tuple(e)] = c
        return SymPoly(new_dim, self.degree, terms)


def combine(coeffs: Sequence, polys: Sequence[SymPoly]) -> SymPoly:
    """``sum_k coeffs[k] * polys[k]``."""
    if not polys:
        raise ValueError("need at least one polynomial")
    out = SymPoly.zero(polys[0].dim, polys[0].degree)
    for c, p in zip(coeffs, polys):
        if c:
            out = out + p * c
    return out


# ---------------------------------------------------------------------------
# dense matrices


class Matrix:
    """Dense matrix of Fractions. Treated as immutable."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(to_scalar(x) for x in row) for row in entries)
        if rows:
            cols = len(rows[0])
            if any(len(row) != cols for row in rows):
                raise DimensionError("ragged matrix")
        elif cols is None:
            cols = 0
        self.rows = len(rows)
        self.cols = cols
        self.entries = rows

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        return cls([[col[i] for col in columns] for i in range(rows)], cols=len(columns))

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "Matrix":
        return Matrix([self.column(j) for j in range(self.cols)], cols=self.rows)

    T = property(transpose)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.shape, self.entries))

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in sum")
        return Matrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], cols=self.cols
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def scale(self, s) -> "Matrix":
        s = to_scalar(s)
        return Matrix([[s * a for a in r] for r in self.entries], cols=self.cols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return matrix_product(self, other)

    def apply(self, vec: Sequence) -> list:
        if len(vec) != self.cols:
            raise DimensionError("vector has wrong length")
        return [sum((a * b for a, b in zip(r, vec) if a and b), Fraction(0)) for r in self.entries]

    def flat(self) -> list:
        return [a for r in self.entries for a in r]

    def is_zero(self) -> bool:
        return not any(a for r in self.entries for a in r)

    def __repr__(self) -> str:
        return f"Matrix({[[str(a) for a in r] for r in self.entries]})"


def matrix_product(A: Matrix, B: Matrix) -> Matrix:
    if A.cols != B.rows:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    Bt = B.transpose().entries
    out = []
    for r in A.entries:
        nz = [(k, a) for k, a in enumerate(r) if a]
        out.append([sum((a * col[k] for k, a in nz), Fraction(0)) for col in Bt])
    return Matrix(out, cols=B.cols)


def matrix_trace(A: Matrix) -> Fraction:
    if A.rows != A.cols:
        raise DimensionError("trace of a non-square matrix")
    return sum((A.entries[i][i] for i in range(A.rows)), Fraction(0))


def matrix_power(A: Matrix, k: int) -> Matrix:
    out = Matrix.identity(A.rows)
    for _ in range(k):
        out = out @ A
    return out


def row_echelon(rows: Sequence[Sequence]) -> tuple:
    """Reduced row echelon form. Returns ``(rref_rows, pivot_columns)``."""
    M = [[to_scalar(x) for x in r] for r in rows]
    pivots = []
    if not M:
        return M, pivots
    ncols = len(M[0])
    i = 0
    for j in range(ncols):
        p = next((k for k in range(i, len(M)) if M[k][j]), None)
        if p is None:
            continue
        M[i], M[p] = M[p], M[i]
        piv = M[i][j]
        M[i] = [x / piv for x in M[i]]
        for k in range(len(M)):
            if k != i and M[k][j]:
                f = M[k][j]
                M[k] = [x - f * y for x, y in zip(M[k], M[i])]
        pivots.append(j)
        i += 1
        if i == len(M):
            break
    return M[:i], pivots


def matrix_rank(A: Matrix) -> int:
    return len(row_echelon(A.entries)[1])


def nullspace(A: Matrix) -> list:
    """Basis of ``{x : A x = 0}`` as a list of vectors."""
    rref, pivots = row_echelon(A.entries)
    free = [j for j in range(A.cols) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * A.cols
        x[f] = Fraction(1)
        for row, p in zip(rref, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def row_space_basis(A: Matrix) -> list:
    return [list(r) for r in row_echelon(A.entries)[0]]


def inverse(A: Matrix) -> Matrix:
    n = A.rows
    if A.cols != n:
        raise DimensionError("inverse of a non-square matrix")
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A.entries)]
    rref, pivots = row_echelon(aug)
    if pivots[:n] != list(range(n)) or len(rref) < n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix([r[n:] for r in rref], cols=n)


class EchelonBasis:
    """Incrementally maintained basis of a span of vectors, kept in echelon form."""

    def __init__(self, length: int):
        self.length = length
        self._rows: dict = {}  # pivot column -> normalised row

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, vec: Sequence) -> list:
        v = [to_scalar(x) for x in vec]
        for p, row in self._rows.items():
            if v[p]:
                f = v[p]
                v = [x - f * y for x, y in zip(v, row)]
        return v

    def add(self, vec: Sequence) -> bool:
        """Add ``vec`` to the span; return whether the span grew."""
        if len(vec) != self.length:
            raise DimensionError("vector has wrong length")
        v = self.reduce(vec)
        p = next((j for j, x in enumerate(v) if x), None)
        if p is None:
            return False
        piv = v[p]
        v = [x / piv for x in v]
        for q, row in self._rows.items():
            if row[p]:
                f = row[p]
                self._rows[q] = [x - f * y for x, y in zip(row, v)]
        self._rows[p] = v
        return True

    def contains(self, vec: Sequence) -> bool:
        return not any(self.reduce(vec))
