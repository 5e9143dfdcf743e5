"""Search for decorated graphs with nonzero value.

Given spanning sets ``A`` of ``S^r V`` and ``B`` of ``S^r W``, both free of
common zeros, and a nonzero pairing ``u`` on ``V (x) W``, the search produces
decorations from ``span A`` and ``span B`` and a multiplicity matrix whose
graph value is nonzero. The route is constructive:

1. divide out the kernels of ``u`` so the pairing becomes invertible;
2. work in degree ``N = r * d'`` where the algebra generated by the
   operators ``m(a) i(b)`` cannot be nil, and find a word with nonzero trace;
3. expand that trace as a sum over graphs and keep a graph with nonzero value;
4. re-evaluate that graph with the original, unreduced data.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import (
    EchelonBasis,
    Matrix,
    SymPoly,
    combine,
    inverse,
    matrix_trace,
    nullspace,
    row_space_basis,
)
from .graphs import (
    DecoratedGraph,
    build_word,
    c_gamma,
    enumerate_graphs,
    graph_value,
    rho_of,
    word_label,
)
from .macaulay import InvalidInput, big_D, is_basepoint_free, nu
from .symops import CON, MUL, OperatorFactor, operator_matrix, to_dual_coordinates, word_trace


class NotBasepointFree(InvalidInput):
    pass


class VerificationFailed(RuntimeError):
    """An identity that must hold exactly did not."""


class SearchExhausted(RuntimeError):
    def __init__(self, message: str, frontier: dict):
        super().__init__(message)
        self.frontier = frontier


def as_matrix(u) -> Matrix:
    return u if isinstance(u, Matrix) else Matrix(u)


# ---------------------------------------------------------------------------
# reduction to an invertible pairing


@dataclass
class ReducedProblem:
    d: int
    e: int
    dim: int
    A: list
    B: list
    pairing: Matrix
    proj_V: Matrix
    proj_W: Matrix
    ker_V: list
    ker_W: list

    def identified_B(self) -> list:
        """``B`` rewritten over ``V'^*`` so that the pairing becomes the identity."""
        return [to_dual_coordinates(b, self.dim, self.pairing) for b in self.B]

    def project_V(self, v: Sequence) -> list:
        return self.proj_V.apply(v)

    def project_W(self, w: Sequence) -> list:
        return self.proj_W.apply(w)


def reduce_to_bijective(u, A: Sequence[SymPoly], B: Sequence[SymPoly]) -> ReducedProblem:
    """Pass to ``V / ker(u^)`` and ``W / ker(u^*)``.

    The projections are chosen so that ``U = P_V^T U' P_W`` with ``U'``
    invertible; graph values are unchanged because every arrow only sees
    ``v^T U w``.
    """
    U = as_matrix(u)
    if U.is_zero():
        raise InvalidInput("the pairing u is zero")
    d, e = U.shape
    PV = Matrix(row_space_basis(U.transpose()))
    PW = Matrix(row_space_basis(U))
    k = PV.rows
    Up = inverse(PV @ PV.transpose()) @ PV @ U @ PW.transpose() @ inverse(PW @ PW.transpose())
    if PV.transpose() @ Up @ PW != U:
        raise VerificationFailed("reduced pairing does not factor the original one")
    Ap = [a.substitute(PV.transpose().entries) for a in A]
    Bp = [b.substitute(PW.transpose().entries) for b in B]
    return ReducedProblem(
        d=d,
        e=e,
        dim=k,
        A=Ap,
        B=Bp,
        pairing=Up,
        proj_V=PV,
        proj_W=PW,
        ker_V=nullspace(U.transpose()),
        ker_W=nullspace(U),
    )


# ---------------------------------------------------------------------------
# the algebra generated by m(a) i(b)


@dataclass
class AlgebraChain:
    """Nested spans ``L_1 <= L_2 <= ...`` of products of generators.

    ``basis[:dims[k]]`` spans the products of length at most ``k + 1``.
    """

    N: int
    basis: list
    dims: list
    stabilized_at: int | None

    def spans(self, m: int) -> list:
        return self.basis[: self.dims[m - 1]] if m >= 1 else []


def algebra_chain(generators: Sequence[Matrix], m_max: int, N: int = 0) -> AlgebraChain:
    gens = list(generators)
    if m_max < 1 or not gens:
        return AlgebraChain(N, [], [], None)
    n = gens[0].rows
    span = EchelonBasis(n * n)
    basis: list = []
    fresh = []
    for g in gens:
        if span.add(g.flat()):
            basis.append(g)
            fresh.append(g)
    dims = [len(basis)]
    stabilized_at = None
    for _ in range(2, m_max + 1):
        new = []
        for g in gens:
            for x in fresh:
                y = g @ x
                if span.add(y.flat()):
                    basis.append(y)
                    new.append(y)
        if not new:
            stabilized_at = len(dims)
            break
        dims.append(len(basis))
        fresh = new
    if stabilized_at is None and len(basis) == n * n:
        # the full matrix algebra cannot grow further
        stabilized_at = len(dims)
    return AlgebraChain(N, basis, dims, stabilized_at)


def generator_matrices(A: Sequence[SymPoly], B: Sequence[SymPoly], N: int) -> list:
    """Matrices of ``m(a) i(b)`` on ``S^N V`` with the identity pairing."""
    out = []
    for a in A:
        for b in B:
            con = operator_matrix(OperatorFactor(CON, b), N)
            mul = operator_matrix(OperatorFactor(MUL, a), N - b.degree)
            out.append(mul @ con)
    return out


def build_algebra_chain(A: Sequence[SymPoly], B: Sequence[SymPoly], N: int, m_max: int | None = None) -> AlgebraChain:
    if not A or not B:
        raise InvalidInput("need nonempty A and B")
    r = A[0].degree
    if N < r:
        raise InvalidInput(f"working degree {N} is below r = {r}")
    if m_max is None:
        m_max = big_D(N, A[0].dim)
    return algebra_chain(generator_matrices(A, B, N), m_max, N)


def is_nil(chain: AlgebraChain) -> bool:
    """True iff every spanning product has trace zero (so, in characteristic 0,
    the stabilised algebra consists of nilpotents)."""
    return all(matrix_trace(x) == 0 for x in chain.basis)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class Certificate:
    m: int
    r: int
    coeffsA: list
    coeffsB: list
    mult: tuple
    value: Fraction
    vdecs: list
    wdecs: list
    pairing: Matrix
    N: int
    reduced_dim: int
    trace: Fraction
    word: str

    def graph(self) -> DecoratedGraph:
        return DecoratedGraph(self.mult, self.vdecs, self.wdecs, self.pairing)

    def revalidate(self, A: Sequence[SymPoly] | None = None, B: Sequence[SymPoly] | None = None) -> bool:
        """Recompute the value from scratch; optionally rebuild decorations from ``A``, ``B``."""
        vdecs, wdecs = self.vdecs, self.wdecs
        if A is not None:
            vdecs = [combine(c, A) for c in self.coeffsA]
        if B is not None:
            wdecs = [combine(c, B) for c in self.coeffsB]
        value = graph_value(DecoratedGraph(self.mult, vdecs, wdecs, self.pairing))
        return value == self.value and value != 0


@dataclass
class SearchOptions:
    seed: int = 0
    m_max: int | None = None
    random_draws: int = 8
    coeff_range: int = 3
    max_exhaustive_words: int = 20000


def nu_bound_holds(m: int, r: int, d: int) -> bool:
    # nu(r, d) = lcm(1..D) >= D, so m <= D already proves m <= nu
    D = big_D(r * d, d)
    return m <= D or (D <= 10_000 and m <= nu(r, d))


def _alternating(m: int) -> str:
    return " ".join(f"m{i} i{i}" for i in range(m))


def certificate_search(A: Sequence[SymPoly], B: Sequence[SymPoly], u, options: SearchOptions | None = None) -> Certificate:
    opts = options or SearchOptions()
    U = as_matrix(u)
    A, B = list(A), list(B)
    if not A or not B:
        raise InvalidInput("A and B must be nonempty")
    r = A[0].degree
    if any(a.degree != r for a in A) or any(b.degree != r for b in B):
        raise InvalidInput("all elements of A and B must have the same degree")
    if U.shape != (A[0].dim, B[0].dim):
        raise InvalidInput(f"pairing shape {U.shape} does not match dim V = {A[0].dim}, dim W = {B[0].dim}")
    if U.is_zero():
        raise InvalidInput("the pairing u is zero")
    if not is_basepoint_free(A):
        raise NotBasepointFree("A has a common zero besides 0; no certificate is guaranteed")
    if not is_basepoint_free(B):
        raise NotBasepointFree("B has a common zero besides 0; no certificate is guaranteed")

    red = reduce_to_bijective(U, A, B)
    Ared, Bred = red.A, red.identified_B()
    N = r * red.dim
    m_max = opts.m_max if opts.m_max is not None else big_D(N, red.dim)
    rng = random.Random(opts.seed)

    def draw(n: int) -> list:
        while True:
            c = [rng.randint(-opts.coeff_range, opts.coeff_range) for _ in range(n)]
            if any(c):
                return [Fraction(x) for x in c]

    def attempt(ca: list, cb: list):
        vt = [combine(c, Ared) for c in ca]
        wt = [combine(c, Bred) for c in cb]
        if not all(vt) or not all(wt):
            return None
        word = build_word(_alternating(len(ca)), vt, wt)
        tr = word_trace(word, N)
        if not tr:
            return None
        return _finish(A, B, U, red, ca, cb, vt, wt, word, tr, N, r)

    tried = 0
    for m in range(1, m_max + 1):
        for _ in range(opts.random_draws):
            tried += 1
            cert = attempt([draw(len(A)) for _ in range(m)], [draw(len(B)) for _ in range(m)])
            if cert is not None:
                return cert
        unit_a = [[Fraction(int(k == i)) for k in range(len(A))] for i in range(len(A))]
        unit_b = [[Fraction(int(k == i)) for k in range(len(B))] for i in range(len(B))]
        pairs = list(itertools.product(range(len(A)), range(len(B))))
        for n_words, choice in enumerate(itertools.product(pairs, repeat=m)):
            if n_words >= opts.max_exhaustive_words:
                break
            tried += 1
            cert = attempt([unit_a[i] for i, _ in choice], [unit_b[j] for _, j in choice])
            if cert is not None:
                return cert
    raise SearchExhausted(
        f"no word with nonzero trace found up to length {m_max}",
        {"m_max": m_max, "words_tried": tried, "N": N, "reduced_dim": red.dim},
    )


def _finish(A, B, U, red, ca, cb, vt, wt, word, tr, N, r) -> Certificate:
    m = len(ca)
    total = Fraction(0)
    witness = None
    for M in enumerate_graphs(m, r):
        val = graph_value(DecoratedGraph(M, vt, wt, None))
        total += c_gamma(M, rho_of(M, word), red.dim, N, m, r) * val
        if witness is None and val:
            witness = (M, val)
    if total != tr:
        raise VerificationFailed(f"trace {tr} differs from the graph expansion {total}")
    if witness is None:
        raise VerificationFailed("nonzero trace but every graph value vanished")
    M, reduced_value = witness
    vdecs = [combine(c, A) for c in ca]
    wdecs = [combine(c, B) for c in cb]
    value = graph_value(DecoratedGraph(M, vdecs, wdecs, U))
    if value != reduced_value or not value:
        raise VerificationFailed(f"graph value {value} in the original spaces differs from the reduced {reduced_value}")
    if not nu_bound_holds(m, r, red.d):
        raise VerificationFailed(f"certificate uses m = {m} vertices, more than nu allows")
    return Certificate(
        m=m,
        r=r,
        coeffsA=[list(c) for c in ca],
        coeffsB=[list(c) for c in cb],
        mult=M,
        value=value,
        vdecs=vdecs,
        wdecs=wdecs,
        pairing=U,
        N=N,
        reduced_dim=red.dim,
        trace=tr,
        word=word_label(word),
    )
