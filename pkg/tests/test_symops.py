from fractions import Fraction

import pytest
from conftest import polys, rand_poly, rand_vec, vectors
from hypothesis import given, settings
from oracles import differential_operator_sympy, from_sympy, symbols, to_sympy

from symcert.exact import DimensionError, Matrix, SymPoly, matrix_power, matrix_trace
from symcert.graphs import build_word
from symcert.symops import (
    CON,
    MUL,
    OperatorFactor,
    OperatorWord,
    con1_apply,
    conr_apply,
    mul1_apply,
    mulr_apply,
    operator_matrix,
    word_matrix,
    word_trace,
)

x = SymPoly.monomial


def test_mul1_examples():
    assert mul1_apply([1], x((2,))) == x((3,))
    assert not mul1_apply([0, 0], x((1, 1)))
    got = mul1_apply([1, 1], x((1, 0)))
    xs = symbols(2)
    assert got == from_sympy((xs[0] + xs[1]) * xs[0], xs, 2)
    assert got == SymPoly(2, 2, {(2, 0): 1, (1, 1): 1})


@pytest.mark.parametrize("N", range(1, 6))
def test_con1_on_power(N):
    assert con1_apply([1], x((N,))) == x((N - 1,), N)


def test_con1_examples():
    v = [Fraction(2), Fraction(-1)]
    w = [Fraction(1), Fraction(2)]  # <w, v> = 0
    assert not con1_apply(w, SymPoly.power(v, 4))
    xs = symbols(2)
    expected = from_sympy(to_sympy(x((1, 1)), xs).diff(xs[1]), xs, 1)
    assert con1_apply([0, 1], x((1, 1))) == expected == x((1, 0))


def test_con1_general_identity():
    # i(w) v^N = N <w, v> v^(N-1)
    v, w = [Fraction(1, 2), 3, -1], [2, Fraction(1, 3), 5]
    pair = sum(Fraction(a) * b for a, b in zip(v, w))
    for N in range(1, 5):
        assert con1_apply(w, SymPoly.power(v, N)) == SymPoly.power(v, N - 1) * (N * pair)


def test_mulr_conr_examples():
    assert mulr_apply(x((2, 0)), x((0, 1))) == x((2, 1))
    xs = symbols(1)
    by_hand = to_sympy(x((3,)), xs).diff(xs[0], 2)
    assert conr_apply(x((2,)), x((3,))) == from_sympy(by_hand, xs, 1) == x((1,), 6)
    assert conr_apply(x((2,)), x((3,))) == con1_apply([1], con1_apply([1], x((3,))))


def test_conr_below_degree_is_zero():
    out = conr_apply(x((3, 0)), x((1, 1)))
    assert not out and out.degree == -1
    assert not conr_apply(x((2, 0)), SymPoly.zero(2, -1))


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        mul1_apply([1, 2, 3], x((1, 0)))
    with pytest.raises(DimensionError):
        con1_apply([1], x((1, 0)))


def test_operator_matrix_examples():
    assert operator_matrix(OperatorFactor(MUL, x((1,))), 0) == Matrix([[1]])
    assert operator_matrix(OperatorFactor(CON, x((1,))), 1) == Matrix([[1]])
    assert operator_matrix(OperatorFactor(CON, x((1,))), 2) == Matrix([[2]])


def test_word_trace_examples():
    one = x((1,))
    assert word_trace(build_word("m0 i0", [one], [one]), 3) == 3
    assert word_trace(build_word("i0 m0", [one], [one]), 3) == 4
    assert word_trace(OperatorWord((), 2, 2), 2) == 3


def test_word_trace_rejects_degree_shift():
    w = OperatorWord((OperatorFactor(MUL, x((1, 0))),), 2, 2)
    with pytest.raises(DimensionError):
        word_trace(w, 1)


def test_conr_matches_sympy(rng):
    for _ in range(25):
        d = rng.randint(1, 3)
        r = rng.randint(1, 3)
        N = rng.randint(0, 5)
        wt = rand_poly(rng, d, r, density=0.6)
        p = rand_poly(rng, d, N, density=0.6)
        assert conr_apply(wt, p) == differential_operator_sympy(wt, p)


def test_conr_with_pairing_matches_sympy(rng):
    for _ in range(20):
        d, e = rng.randint(1, 3), rng.randint(1, 3)
        U = Matrix([rand_vec(rng, e) for _ in range(d)])
        r = rng.randint(1, 2)
        wt = rand_poly(rng, e, r)
        p = rand_poly(rng, d, rng.randint(0, 4))
        assert conr_apply(wt, p, U) == differential_operator_sympy(wt, p, U)


def test_word_matrix_and_sparse_trace_agree(rng):
    for _ in range(20):
        d = rng.randint(1, 3)
        r = rng.randint(1, 2)
        m = rng.randint(1, 2)
        vd = [rand_poly(rng, d, r) for _ in range(m)]
        wd = [rand_poly(rng, d, r) for _ in range(m)]
        labels = [f"m{i}" for i in range(m)] + [f"i{i}" for i in range(m)]
        rng.shuffle(labels)
        word = build_word(" ".join(labels), vd, wd)
        N = rng.randint(0, 4)
        assert matrix_trace(word_matrix(word, N)) == word_trace(word, N)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_heisenberg_relation(rng, d):
    for N in range(5):
        v, w = rand_vec(rng, d), rand_vec(rng, d)
        mul = OperatorFactor(MUL, SymPoly.linear(v))
        con = OperatorFactor(CON, SymPoly.linear(w))
        lhs = operator_matrix(con, N + 1) @ operator_matrix(mul, N) - operator_matrix(mul, N - 1) @ operator_matrix(con, N)
        pair = sum(a * b for a, b in zip(v, w))
        assert lhs == Matrix.identity(len(lhs.entries)).scale(pair)


def test_power_compatibility(rng):
    for r in (1, 2, 3):
        d = rng.randint(1, 3)
        v, w = rand_vec(rng, d), rand_vec(rng, d)
        N = 2
        mul_r = operator_matrix(OperatorFactor(MUL, SymPoly.power(v, r)), N)
        steps = Matrix.identity(len(mul_r.entries[0]))
        for k in range(r):
            steps = operator_matrix(OperatorFactor(MUL, SymPoly.linear(v)), N + k) @ steps
        assert mul_r == steps
        M = N + r
        con_r = operator_matrix(OperatorFactor(CON, SymPoly.power(w, r)), M)
        steps = Matrix.identity(len(con_r.entries[0]))
        for k in range(r):
            steps = operator_matrix(OperatorFactor(CON, SymPoly.linear(w)), M - k) @ steps
        assert con_r == steps


def test_one_variable_powers():
    # d = 1: m(x) is a shift, i(e*) is d/dx
    m1 = operator_matrix(OperatorFactor(MUL, x((1,))), 0)
    assert matrix_power(m1, 1) == Matrix([[1]])


@settings(max_examples=50, deadline=None)
@given(vectors(2), polys(2, 2), polys(2, 3))
def test_con1_is_a_derivation(w, p, q):
    lhs = con1_apply(w, p * q)
    rhs = con1_apply(w, p) * q + p * con1_apply(w, q)
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(polys(2, 1), polys(2, 1), polys(2, 1), polys(2, 1))
def test_cyclic_invariance_of_word_traces(a, b, c, e):
    # tr(XY) = tr(YX) for X = m(a) i(b), Y = m(c) i(e)
    vd, wd = [a, c], [b, e]
    for N in range(4):
        assert word_trace(build_word("m0 i0 m1 i1", vd, wd), N) == word_trace(build_word("m1 i1 m0 i0", vd, wd), N)
