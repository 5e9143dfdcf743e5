"""Decorated bipartite graphs, their values, and the trace identity.

A graph with ``m`` alpha vertices (decorated by degree ``r`` tensors over V)
and ``m`` beta vertices (degree ``r`` tensors over W) is stored as its
multiplicity matrix ``M``: ``M[i][j]`` arrows join alpha_i and beta_j, and all
row and column sums are ``r``. Each arrow contributes the pairing of the
decorations at its two ends, whatever its orientation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .exact import DimensionError, Matrix, SymPoly, to_scalar
from .symops import CON, MUL, OperatorFactor, OperatorWord, word_trace


def enumerate_graphs(m: int, r: int) -> list:
    """All ``m x m`` nonnegative integer matrices with every margin equal to ``r``.

    Depth-first over entries, largest value first, so the diagonal matrix
    ``r * I`` comes first.
    """
    if m < 1 or r < 1:
        raise ValueError("need m >= 1 and r >= 1")
    out = []
    rows: list = []

    def fill_row(i: int, j: int, left: int, cols: list, cur: list):
        if j == m - 1:
            # last entry is forced
            if left <= cols[j]:
                cur.append(left)
                cols[j] -= left
                rows.append(tuple(cur))
                next_row(i + 1, cols)
                rows.pop()
                cols[j] += left
                cur.pop()
            return
        # the remaining columns must be able to absorb what is left
        room = sum(cols[j + 1:])
        for x in range(min(left, cols[j]), max(0, left - room) - 1, -1):
            cur.append(x)
            cols[j] -= x
            fill_row(i, j + 1, left - x, cols, cur)
            cols[j] += x
            cur.pop()

    def next_row(i: int, cols: list):
        if i == m:
            out.append(tuple(rows))
            return
        fill_row(i, 0, r, cols, [])

    next_row(0, [r] * m)
    return out


def check_margins(M: Sequence[Sequence[int]], r: int) -> None:
    m = len(M)
    if any(len(row) != m for row in M):
        raise DimensionError("multiplicity matrix must be square")
    if any(x < 0 for row in M for x in row):
        raise ValueError("multiplicities must be nonnegative")
    if any(sum(row) != r for row in M) or any(sum(M[i][j] for i in range(m)) != r for j in range(m)):
        raise ValueError(f"every row and column of the multiplicity matrix must sum to {r}")


def symmetry_order(M: Sequence[Sequence[int]]) -> int:
    """Order of the vertex-preserving symmetry group: parallel arrows permute freely."""
    return math.prod(math.factorial(x) for row in M for x in row)


def expansion_count(M: Sequence[Sequence[int]], r: int) -> int:
    """Count labelled-arrow expansions of ``M`` by brute force.

    Every vertex is split into ``r`` labelled copies; an expansion is a perfect
    matching between alpha copies and beta copies whose block counts are ``M``.
    """
    m = len(M)
    n = m * r
    target = [list(row) for row in M]
    count = 0
    for perm in itertools.permutations(range(n)):
        counts = [[0] * m for _ in range(m)]
        for beta_slot, alpha_slot in enumerate(perm):
            counts[alpha_slot // r][beta_slot // r] += 1
        if counts == target:
            count += 1
    return count


def pairing_value(v: Sequence, w: Sequence, pairing: Matrix | None) -> Fraction:
    """``u(v (x) w) = v^T U w``."""
    if pairing is None:
        if len(v) != len(w):
            raise DimensionError("identity pairing needs equal dimensions")
        return sum((to_scalar(a) * to_scalar(b) for a, b in zip(v, w)), Fraction(0))
    return sum((to_scalar(a) * x for a, x in zip(v, pairing.apply(w))), Fraction(0))


def power_decomposition(p: SymPoly) -> list:
    """Write ``p`` as ``sum c * (l . x)^r`` over rational linear forms ``l``.

    Uses the finite-difference identity for a product of linear forms
    ``z_1 ... z_r = 1/r! sum_S (-1)^(r-|S|) (sum_{i in S} z_i)^r`` on each
    monomial. Returns ``[(c, l), ...]`` with each ``l`` scaled so that its
    first nonzero entry is 1 and no ``l`` repeated.
    """
    r = p.degree
    if r < 1:
        raise ValueError("power decomposition needs degree >= 1")
    acc: dict = {}
    rfact = math.factorial(r)
    for a, c in p.terms.items():
        for b in itertools.product(*(range(k + 1) for k in a)):
            size = sum(b)
            if size == 0:
                continue
            weight = math.prod(math.comb(k, j) for k, j in zip(a, b))
            sign = -1 if (r - size) % 2 else 1
            lead = next(x for x in b if x)
            key = tuple(Fraction(x, lead) for x in b)
            # (b . x)^r = lead^r (key . x)^r
            acc[key] = acc.get(key, 0) + c * sign * weight * Fraction(lead) ** r / rfact
    return [(coef, list(l)) for l, coef in acc.items() if coef]


@dataclass
class DecoratedGraph:
    mult: tuple
    vdecs: list
    wdecs: list
    pairing: Matrix | None = None

    def __post_init__(self):
        self.mult = tuple(tuple(int(x) for x in row) for row in self.mult)
        m = len(self.mult)
        if len(self.vdecs) != m or len(self.wdecs) != m:
            raise DimensionError("need one decoration per vertex")
        if m == 0:
            raise ValueError("a graph needs at least one vertex pair")
        r = self.vdecs[0].degree
        if any(p.degree != r for p in list(self.vdecs) + list(self.wdecs)):
            raise DimensionError("all decorations must have the same degree")
        check_margins(self.mult, r)
        d, e = self.vdecs[0].dim, self.wdecs[0].dim
        if any(p.dim != d for p in self.vdecs) or any(p.dim != e for p in self.wdecs):
            raise DimensionError("decorations on one side must share a dimension")
        if self.pairing is None and d != e:
            raise DimensionError("identity pairing needs d == e")
        if self.pairing is not None and self.pairing.shape != (d, e):
            raise DimensionError(f"pairing must have shape ({d}, {e})")

    @property
    def m(self) -> int:
        return len(self.mult)

    @property
    def r(self) -> int:
        return self.vdecs[0].degree


def graph_value_direct(M, vvecs: Sequence, wvecs: Sequence, pairing: Matrix | None = None) -> Fraction:
    """Value of ``M`` decorated by ``v_i^r`` and ``w_j^r``: ``prod (u(v_i, w_j))^M_ij``."""
    out = Fraction(1)
    for i, row in enumerate(M):
        for j, k in enumerate(row):
            if k:
                out *= pairing_value(vvecs[i], wvecs[j], pairing) ** k
    return out


def graph_value(g: DecoratedGraph) -> Fraction:
    """Exact value of a decorated graph, multilinear in every decoration.

    Each decoration is split into r-th powers of linear forms. The sum over
    beta-side choices factorises per beta vertex, so the cost is
    ``terms^m`` rather than ``terms^(2m)``.
    """
    m = g.m
    vparts = [power_decomposition(p) for p in g.vdecs]
    wparts = [power_decomposition(p) for p in g.wdecs]
    if not all(vparts) or not all(wparts):
        return Fraction(0)
    cols = [[(i, g.mult[i][j]) for i in range(m) if g.mult[i][j]] for j in range(m)]
    # pairings between the linear forms, memoised
    cache: dict = {}

    def gram(i, a, j, b):
        key = (i, a, j, b)
        if key not in cache:
            cache[key] = pairing_value(vparts[i][a][1], wparts[j][b][1], g.pairing)
        return cache[key]

    total = Fraction(0)
    for choice in itertools.product(*(range(len(vp)) for vp in vparts)):
        weight = Fraction(1)
        for i, a in enumerate(choice):
            weight *= vparts[i][a][0]
        for j in range(m):
            s = Fraction(0)
            for b, (cb, _) in enumerate(wparts[j]):
                t = cb
                for i, k in cols[j]:
                    t *= gram(i, choice[i], j, b) ** k
                    if not t:
                        break
                s += t
            weight *= s
            if not weight:
                break
        total += weight
    return total


def rho_of(M, word: OperatorWord) -> int:
    """Number of arrows whose mul factor stands to the right of their con factor."""
    m = len(M)
    mul_pos, con_pos = {}, {}
    for pos, f in enumerate(word.factors):
        table = mul_pos if f.kind == MUL else con_pos
        if f.vertex in table:
            raise ValueError(f"vertex {f.vertex} appears twice among {f.kind} factors")
        table[f.vertex] = pos
    if sorted(mul_pos) != list(range(m)) or sorted(con_pos) != list(range(m)):
        raise DimensionError("word must hold exactly one mul and one con factor per vertex")
    return sum(
        M[i][j] for i in range(m) for j in range(m) if M[i][j] and mul_pos[i] > con_pos[j]
    )


def c_gamma(M, rho: int, d: int, N: int, m: int, r: int) -> Fraction:
    """Trace coefficient ``(r!)^(2m) / s_gamma * C(d + rho + N - 1, d + r m - 1)``.

    ``rho`` counts arrows. For ``r = 1`` this is ``C(d + rho + N - 1, d + m - 1)``.
    """
    prefactor = Fraction(math.factorial(r) ** (2 * m), symmetry_order(M))
    top = d + rho + N - 1
    return prefactor * (math.comb(top, d + r * m - 1) if top >= 0 else 0)


def parse_word_order(order, m: int) -> list:
    """Accept ``"m0 i0 m1 i1"`` or a sequence of ``(kind, vertex)`` pairs."""
    if isinstance(order, str):
        items = []
        for tok in order.split():
            kind, idx = tok[0], tok[1:]
            if kind not in "mi" or not idx.isdigit():
                raise ValueError(f"bad word token {tok!r}")
            items.append((kind, int(idx)))
    else:
        items = [(k, int(i)) for k, i in order]
    muls = sorted(i for k, i in items if k == "m")
    cons = sorted(i for k, i in items if k == "i")
    if muls != list(range(m)) or cons != list(range(m)) or len(items) != 2 * m:
        raise ValueError("word must mention each of m0..m{m-1} and i0..i{m-1} exactly once")
    return items


def build_word(order, vdecs: Sequence[SymPoly], wdecs: Sequence[SymPoly], pairing: Matrix | None = None) -> OperatorWord:
    items = parse_word_order(order, len(vdecs))
    factors = [
        OperatorFactor(MUL, vdecs[i], i) if k == "m" else OperatorFactor(CON, wdecs[i], i)
        for k, i in items
    ]
    d = vdecs[0].dim
    e = wdecs[0].dim
    return OperatorWord(tuple(factors), d, e, pairing)


def word_label(word: OperatorWord) -> str:
    return " ".join(("m" if f.kind == MUL else "i") + str(f.vertex) for f in word.factors)


@dataclass
class GraphTerm:
    mult: tuple
    rho: int
    s_gamma: int
    c_gamma: Fraction
    value: Fraction


@dataclass
class TraceIdentityReport:
    lhs: Fraction
    rhs: Fraction
    per_graph: list = field(default_factory=list)

    @property
    def match(self) -> bool:
        return self.lhs == self.rhs


def trace_identity_check(
    vdecs: Sequence[SymPoly],
    wdecs: Sequence[SymPoly],
    word_order,
    pairing: Matrix | None,
    N: int,
    coefficient: Callable = c_gamma,
) -> TraceIdentityReport:
    """Compare ``tr P_N`` with ``sum_gamma c_gamma |gamma|``.

    ``coefficient`` is swappable so that a deliberately wrong coefficient can
    serve as a negative control.
    """
    word = build_word(word_order, vdecs, wdecs, pairing)
    m = len(vdecs)
    r = vdecs[0].degree
    d = vdecs[0].dim
    lhs = word_trace(word, N)
    terms = []
    rhs = Fraction(0)
    for M in enumerate_graphs(m, r):
        rho = rho_of(M, word)
        c = coefficient(M, rho, d, N, m, r)
        val = graph_value(DecoratedGraph(M, list(vdecs), list(wdecs), pairing))
        rhs += c * val
        terms.append(GraphTerm(M, rho, symmetry_order(M), c, val))
    return TraceIdentityReport(lhs, rhs, terms)
