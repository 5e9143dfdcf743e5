"""Multiplication and contraction operators on the symmetric algebra ``SV``.

``mul`` factors multiply by an element of ``S^r V``. ``con`` factors contract
with an element of ``S^r W``: a covector ``w`` acts as the derivation
``x_k -> <w, e_k>``, so ``con1(w) v^N = N <w, v> v^(N-1)``, and a degree ``r``
tensor acts as the constant coefficient differential operator obtained by
substituting those derivations into it.

The pairing ``<w, v> = v^T U w`` is given by a ``d x e`` matrix ``U``; ``None``
means ``W = V^*`` with the identity pairing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import (
    DimensionError,
    Matrix,
    SymPoly,
    monomial_basis,
    monomial_index,
    sym_dim,
    to_scalar,
)

MUL = "mul"
CON = "con"


def _direction(w: Sequence, dim: int, pairing: Matrix | None) -> list:
    w = [to_scalar(x) for x in w]
    if pairing is None:
        if len(w) != dim:
            raise DimensionError("covector has wrong length")
        return w
    if pairing.rows != dim or pairing.cols != len(w):
        raise DimensionError(f"pairing of shape {pairing.shape} does not fit dim {dim} and covector {len(w)}")
    return pairing.apply(w)


def to_dual_coordinates(wt: SymPoly, dim: int, pairing: Matrix | None) -> SymPoly:
    """Rewrite ``wt`` in the coordinates of ``V^*`` induced by the pairing."""
    if pairing is None:
        if wt.dim != dim:
            raise DimensionError("tensor over W has wrong dimension")
        return wt
    if pairing.rows != dim or pairing.cols != wt.dim:
        raise DimensionError(f"pairing of shape {pairing.shape} does not fit")
    # variable y_l of W becomes sum_k U[k, l] z_k
    return wt.substitute(pairing.transpose().entries)


def mul1_apply(v: Sequence, p: SymPoly) -> SymPoly:
    if len(v) != p.dim:
        raise DimensionError("vector and polynomial live in different dimensions")
    return SymPoly.linear(v) * p


def con1_apply(w: Sequence, p: SymPoly, pairing: Matrix | None = None) -> SymPoly:
    direction = _direction(w, p.dim, pairing)
    out: dict = {}
    for a, c in p.terms.items():
        for k, (ak, dk) in enumerate(zip(a, direction)):
            if ak and dk:
                b = a[:k] + (ak - 1,) + a[k + 1:]
                out[b] = out.get(b, 0) + c * ak * dk
    return SymPoly(p.dim, p.degree - 1, out)


def mulr_apply(vt: SymPoly, p: SymPoly) -> SymPoly:
    if vt.dim != p.dim:
        raise DimensionError("tensor and polynomial live in different dimensions")
    return vt * p


def _falling(a: int, b: int) -> int:
    out = 1
    for t in range(b):
        out *= a - t
    return out


def conr_apply(wt: SymPoly, p: SymPoly, pairing: Matrix | None = None) -> SymPoly:
    """Apply the differential operator ``wt(d/dx)`` to ``p``.

    Lowers the degree by ``wt.degree``; below degree zero the result is the
    zero element of the zero space.
    """
    op = to_dual_coordinates(wt, p.dim, pairing)
    degree = p.degree - op.degree
    if degree < 0:
        return SymPoly.zero(p.dim, degree)
    out: dict = {}
    for b, cb in op.terms.items():
        for a, ca in p.terms.items():
            if all(x >= y for x, y in zip(a, b)):
                f = 1
                for x, y in zip(a, b):
                    f *= _falling(x, y)
                key = tuple(x - y for x, y in zip(a, b))
                out[key] = out.get(key, 0) + ca * cb * f
    return SymPoly(p.dim, degree, out)


@dataclass(frozen=True)
class OperatorFactor:
    """One factor ``m^r(tensor)`` or ``i^r(tensor)`` of an operator word.

    ``vertex`` is the index of the graph vertex the factor belongs to: an
    alpha vertex for ``mul`` factors and a beta vertex for ``con`` factors.
    """

    kind: str
    tensor: SymPoly
    vertex: int = 0

    def __post_init__(self):
        if self.kind not in (MUL, CON):
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if self.tensor.degree < 1:
            raise ValueError("factor tensors must have degree >= 1")

    @property
    def r(self) -> int:
        return self.tensor.degree

    @property
    def shift(self) -> int:
        return self.r if self.kind == MUL else -self.r


def apply_factor(f: OperatorFactor, p: SymPoly, pairing: Matrix | None = None) -> SymPoly:
    if f.kind == MUL:
        return mulr_apply(f.tensor, p)
    return conr_apply(f.tensor, p, pairing)


@dataclass(frozen=True)
class OperatorWord:
    """Ordered product of factors. ``factors[0]`` is leftmost and acts last."""

    factors: tuple
    d: int
    e: int
    pairing: Matrix | None = None

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        for f in self.factors:
            want = self.d if f.kind == MUL else self.e
            if f.tensor.dim != want:
                raise DimensionError(f"{f.kind} factor has dimension {f.tensor.dim}, expected {want}")
        if self.pairing is None and self.d != self.e:
            raise DimensionError("identity pairing needs d == e")
        if self.pairing is not None and self.pairing.shape != (self.d, self.e):
            raise DimensionError("pairing shape must be (d, e)")

    @property
    def shift(self) -> int:
        return sum(f.shift for f in self.factors)

    def apply(self, p: SymPoly) -> SymPoly:
        for f in reversed(self.factors):
            p = apply_factor(f, p, self.pairing)
        return p


def operator_matrix(f: OperatorFactor, N: int, d: int | None = None, pairing: Matrix | None = None) -> Matrix:
    """Matrix of the factor from ``S^N V`` to ``S^(N +- r) V`` on graded lex bases."""
    if d is None:
        if f.kind == CON and pairing is not None:
            d = pairing.rows
        else:
            d = f.tensor.dim
    out_deg = N + f.shift
    rows = sym_dim(d, out_deg)
    index = monomial_index(d, out_deg) if out_deg >= 0 else {}
    columns = []
    for a in monomial_basis(d, N):
        image = apply_factor(f, SymPoly.monomial(a), pairing)
        col = [Fraction(0)] * rows
        for b, c in image.terms.items():
            col[index[b]] = c
        columns.append(col)
    return Matrix.from_columns(columns, rows) if columns else Matrix.zeros(rows, 0)


def word_matrix(word: OperatorWord, N: int) -> Matrix:
    """Matrix of the whole word on ``S^N V``, built as a product of factor matrices."""
    deg = N
    mats = []
    for f in reversed(word.factors):
        mats.append(operator_matrix(f, deg, word.d, word.pairing))
        deg += f.shift
    out = Matrix.identity(sym_dim(word.d, N))
    for m in mats:
        out = m @ out
    return out


def word_trace(word: OperatorWord, N: int) -> Fraction:
    """Trace of the word restricted to ``S^N V``.

    Computed by pushing each basis monomial through the factors; a factor
    that would land below degree zero is the zero map.
    """
    if word.shift != 0:
        raise DimensionError("word does not preserve degree; its trace is undefined")
    total = Fraction(0)
    for a in monomial_basis(word.d, N):
        total += word.apply(SymPoly.monomial(a)).coeff(a)
    return total
