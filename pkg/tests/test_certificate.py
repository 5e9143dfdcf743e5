import itertools
import math
from fractions import Fraction

import pytest
from conftest import rand_poly, rand_vec
from oracles import brute_witness_search, tables_oracle, tensor_graph_value

from symcert.certificate import (
    NotBasepointFree,
    SearchExhausted,
    SearchOptions,
    algebra_chain,
    build_algebra_chain,
    certificate_search,
    is_nil,
    reduce_to_bijective,
)
from symcert.exact import Matrix, SymPoly, matrix_rank
from symcert.graphs import DecoratedGraph, enumerate_graphs, graph_value, graph_value_direct
from symcert.macaulay import InvalidInput, big_D, nu

x = SymPoly.monomial


def _coords(d, r):
    return [x(tuple(r if k == i else 0 for k in range(d))) for i in range(d)]


def _rand_pairing(rng, d, e, rank):
    while True:
        L = [rand_vec(rng, rank) for _ in range(d)]
        R = [rand_vec(rng, e) for _ in range(rank)]
        U = Matrix(L) @ Matrix(R) if rank else Matrix.zeros(d, e)
        if matrix_rank(U) == rank:
            return U


def test_reduce_invertible_is_identity_size():
    red = reduce_to_bijective([[2, 1], [1, 1]], _coords(2, 1), _coords(2, 1))
    assert red.dim == 2 and red.ker_V == [] and red.ker_W == []
    assert matrix_rank(red.pairing) == 2


def test_reduce_diag():
    A = [x((1, 1)), x((2, 0)), x((0, 2))]
    B = [x((0, 2)), x((1, 1))]
    red = reduce_to_bijective([[1, 0], [0, 0]], A, B)
    assert red.dim == 1
    assert [a.terms for a in red.A] == [{}, {(2,): 1}, {}]
    assert [b.terms for b in red.B] == [{}, {}]
    assert len(red.ker_V) == len(red.ker_W) == 1


def test_reduce_zero_pairing():
    with pytest.raises(InvalidInput):
        reduce_to_bijective(Matrix.zeros(2, 2), _coords(2, 1), _coords(2, 1))


def test_reduction_preserves_rank_one_values(rng):
    for _ in range(15):
        d, e = rng.randint(1, 3), rng.randint(1, 3)
        U = _rand_pairing(rng, d, e, rng.randint(1, min(d, e)))
        for r in (1, 2):
            for m in (1, 2):
                vv = [rand_vec(rng, d) for _ in range(m)]
                ww = [rand_vec(rng, e) for _ in range(m)]
                red = reduce_to_bijective(U, [SymPoly.power(v, r) for v in vv], [SymPoly.power(w, r) for w in ww])
                assert matrix_rank(red.pairing) == red.dim == matrix_rank(U)
                for M in enumerate_graphs(m, r):
                    before = graph_value_direct(M, vv, ww, U)
                    after = graph_value_direct(M, [red.project_V(v) for v in vv], [red.project_W(w) for w in ww], red.pairing)
                    assert before == after
                    assert graph_value(DecoratedGraph(M, red.A, red.B, red.pairing)) == before


def test_chain_single_generator():
    for r in (1, 2, 3):
        chain = build_algebra_chain([x((r,))], [x((r,))], r)
        assert chain.dims == [1] and chain.stabilized_at == 1
        assert not is_nil(chain)
        assert chain.basis[0].entries == ((math.factorial(r),),)


def test_chain_square_zero_generators():
    E12 = Matrix([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    E13 = Matrix([[0, 0, 1], [0, 0, 0], [0, 0, 0]])
    chain = algebra_chain([E12, E13], 5)
    assert chain.dims == [2] and chain.stabilized_at == 1
    assert is_nil(chain)


def test_chain_upper_triangular_is_nil():
    gens = [Matrix([[0, 1, 2], [0, 0, 3], [0, 0, 0]]), Matrix([[0, 0, 1], [0, 0, 1], [0, 0, 0]])]
    chain = algebra_chain(gens, 6)
    assert is_nil(chain)
    assert chain.dims == sorted(chain.dims)


def test_chain_empty_is_nil():
    chain = algebra_chain([Matrix.identity(2)], 0)
    assert chain.basis == [] and is_nil(chain)


def test_chain_full_matrix_algebra():
    chain = build_algebra_chain(_coords(2, 1), _coords(2, 1), 2)
    assert chain.dims[-1] == 9 == big_D(2, 2)
    assert chain.dims == sorted(chain.dims)
    assert not is_nil(chain)


def test_chain_not_nil_in_sweep(rng):
    for d in (1, 2):
        for r in (1, 2):
            for _ in range(3):
                A = _coords(d, r) + [rand_poly(rng, d, r)]
                B = _coords(d, r) + [rand_poly(rng, d, r)]
                chain = build_algebra_chain(A, B, r * d)
                assert chain.dims == sorted(chain.dims)
                assert chain.dims[-1] <= big_D(r * d, d)
                assert not is_nil(chain)


def test_certificate_one_dimensional():
    for r in (1, 2, 3):
        for c in (Fraction(3), Fraction(-1, 2)):
            cert = certificate_search([x((r,))], [x((r,))], [[c]])
            assert cert.m == 1 and cert.mult == ((r,),)
            assert cert.value == c ** r * cert.coeffsA[0][0] * cert.coeffsB[0][0]
            assert cert.revalidate() and cert.revalidate(A=[x((r,))], B=[x((r,))])


def test_certificate_errors():
    with pytest.raises(InvalidInput):
        certificate_search(_coords(2, 1), _coords(2, 1), Matrix.zeros(2, 2))
    with pytest.raises(NotBasepointFree):
        certificate_search([x((2, 0))], _coords(2, 2), Matrix.identity(2))
    with pytest.raises(InvalidInput):
        certificate_search(_coords(2, 1), _coords(3, 1), Matrix.identity(2))


def test_search_exhausted_reports_frontier():
    # with zero allowed length nothing can be found
    with pytest.raises(SearchExhausted) as info:
        certificate_search(_coords(2, 1), _coords(2, 1), Matrix.identity(2), SearchOptions(m_max=0))
    assert info.value.frontier["m_max"] == 0


def _check_against_brute(cert, A, B, U):
    """The certificate value is a multilinear combination of brute basis values."""
    m_brute, values = brute_witness_search(A, B, U, cert.m, tables_oracle)
    assert m_brute is not None and m_brute <= cert.m
    if m_brute != cert.m:
        _, values = _values_at(A, B, U, cert.m, cert.r)
    total = Fraction(0)
    for ta in itertools.product(range(len(A)), repeat=cert.m):
        for tb in itertools.product(range(len(B)), repeat=cert.m):
            w = math.prod((cert.coeffsA[i][k] for i, k in enumerate(ta)), start=Fraction(1))
            w *= math.prod((cert.coeffsB[i][k] for i, k in enumerate(tb)), start=Fraction(1))
            if w:
                total += w * values[(ta, tb, cert.mult)]
    assert total == cert.value != 0


def _values_at(A, B, U, m, r):
    Ul = [list(row) for row in U.entries]
    values = {}
    for ta in itertools.product(range(len(A)), repeat=m):
        for tb in itertools.product(range(len(B)), repeat=m):
            for M in tables_oracle(m, r):
                values[(ta, tb, M)] = tensor_graph_value(M, [A[k] for k in ta], [B[k] for k in tb], Ul)
    return m, values


def test_certificate_d2_r1_matches_brute(rng):
    A, B = _coords(2, 1), _coords(2, 1)
    for _ in range(5):
        U = _rand_pairing(rng, 2, 2, 2)
        cert = certificate_search(A, B, U, SearchOptions(seed=rng.randint(0, 99)))
        assert cert.m <= 2 and cert.revalidate(A=A, B=B)
        _check_against_brute(cert, A, B, U)


def test_certificate_rank_one_reduction(rng):
    A, B = _coords(2, 1), _coords(2, 1)
    for _ in range(5):
        U = _rand_pairing(rng, 2, 2, 1)
        cert = certificate_search(A, B, U)
        assert cert.reduced_dim == 1
        assert cert.revalidate(A=A, B=B)
        _check_against_brute(cert, A, B, U)


def test_certificate_r2_d2(rng):
    A = _coords(2, 2) + [x((1, 1))]
    B = _coords(2, 2)
    for rank in (1, 2):
        U = _rand_pairing(rng, 2, 2, rank)
        cert = certificate_search(A, B, U)
        assert cert.revalidate(A=A, B=B)
        assert cert.m <= nu(2, 2)
        _check_against_brute(cert, A, B, U)


def test_certificate_is_seed_deterministic():
    A, B = _coords(2, 1), _coords(2, 1)
    U = Matrix([[1, 2], [3, 4]])
    c1 = certificate_search(A, B, U, SearchOptions(seed=5))
    c2 = certificate_search(A, B, U, SearchOptions(seed=5))
    assert (c1.coeffsA, c1.coeffsB, c1.mult, c1.value) == (c2.coeffsA, c2.coeffsB, c2.mult, c2.value)
