import itertools
import math

import pytest
import sympy
from conftest import rand_poly
from oracles import grlex_oracle, rank_oracle, symbols, to_sympy

from symcert.exact import DimensionError, SymPoly
from symcert.macaulay import (
    InvalidInput,
    PolySystem,
    big_D,
    certify_basepoint_free,
    format_factorization,
    ideal_component_surjective,
    is_basepoint_free,
    nu,
    nu_factorization,
)

y = SymPoly.monomial


def _squares(e, r):
    return [y(tuple(r if k == i else 0 for k in range(e))) for i in range(e)]


def _rank_oracle_sympy(gens, N):
    """Rank of the degree-N ideal component, built from sympy products."""
    e, r = gens[0].dim, gens[0].degree
    ys = symbols(e, "y")
    rows = []
    target = grlex_oracle(e, N)
    for a in grlex_oracle(e, N - r):
        mono = sympy.Mul(*(s ** k for s, k in zip(ys, a)))
        for g in gens:
            poly = sympy.Poly(sympy.expand(mono * to_sympy(g, ys)), *ys)
            coeffs = dict(poly.terms())
            rows.append([coeffs.get(t, 0) for t in target])
    return rank_oracle(rows) if rows else 0


def test_surjectivity_examples():
    for r in (1, 2, 3):
        assert ideal_component_surjective(PolySystem(1, r, [y((r,))]), r).surjective
    B = PolySystem(2, 2, _squares(2, 2))
    s2 = ideal_component_surjective(B, 2)
    assert (s2.surjective, s2.rank, s2.target) == (False, 2, 3)
    assert ideal_component_surjective(B, 3).surjective


def test_surjectivity_below_degree():
    with pytest.raises(DimensionError):
        ideal_component_surjective(PolySystem(2, 2, _squares(2, 2)), 1)


def test_certify_examples():
    for r in (1, 2, 3):
        rep = certify_basepoint_free(PolySystem(1, r, [y((r,))]))
        assert rep.certified and rep.first_surjective_N == r
    rep = certify_basepoint_free(PolySystem(2, 2, [y((2, 0))]), 10)
    assert not rep.certified and rep.first_surjective_N is None
    assert len(rep.ranks_by_N) == 9
    rep = certify_basepoint_free(PolySystem(2, 2, _squares(2, 2)))
    assert rep.certified and rep.first_surjective_N == 3 <= 4


def test_certify_rejects_empty():
    with pytest.raises(InvalidInput):
        certify_basepoint_free(PolySystem(2, 2, []))


def test_rank_matches_sympy(rng):
    for _ in range(15):
        e, r = rng.randint(1, 3), rng.randint(1, 2)
        gens = [rand_poly(rng, e, r, density=0.5) for _ in range(rng.randint(1, 3))]
        for N in range(r, r + 3):
            assert ideal_component_surjective(PolySystem(e, r, gens), N).rank == _rank_oracle_sympy(gens, N)


def test_common_zero_means_not_certified(rng):
    # forms vanishing on the line spanned by (1, 1, 0) never generate everything
    ys = symbols(3, "y")
    for _ in range(5):
        gens = []
        for _ in range(3):
            p = rand_poly(rng, 3, 2)
            expr = to_sympy(p, ys)
            val = expr.subs({ys[0]: 1, ys[1]: 1, ys[2]: 0})
            p = p - y((2, 0, 0)) * val
            gens.append(p)
            assert p.evaluate([1, 1, 0]) == 0
        assert not is_basepoint_free(gens)


def test_monotone_growth_and_bound(rng):
    for _ in range(10):
        e, r = rng.randint(1, 3), rng.randint(1, 3)
        gens = _squares(e, r) + [rand_poly(rng, e, r) for _ in range(rng.randint(0, 2))]
        B = PolySystem(e, r, gens)
        rep = certify_basepoint_free(B)
        assert rep.certified and rep.first_surjective_N <= r * e
        for N in range(rep.first_surjective_N, rep.first_surjective_N + 2):
            assert ideal_component_surjective(B, N).surjective


def test_big_D_examples():
    assert big_D(1, 1) == 1
    assert big_D(2, 2) == 9
    for d in range(1, 5):
        assert big_D(0, d) == 1


def test_nu_examples():
    assert nu(1, 1) == 1
    assert nu(1, 2) == 2520
    assert nu(2, 1) == 1


@pytest.mark.parametrize("r,d", [(1, 1), (1, 2), (2, 2), (1, 3), (3, 2), (2, 3)])
def test_nu_divisibility_and_factorization(r, d):
    n = nu(r, d)
    D = big_D(r * d, d)
    assert all(n % k == 0 for k in range(1, D + 1))
    factors = nu_factorization(r, d)
    assert math.prod(p ** k for p, k in factors) == n
    assert all(sympy.isprime(p) for p, _ in factors)


def test_factorization_format():
    assert format_factorization(nu_factorization(1, 2)) == "2^3*3^2*5*7"
    assert format_factorization([]) == "1"


def test_basepoint_free_small_exhaustive():
    # all 0/1 combinations of the three quadratic monomials in two variables
    mons = [y(a) for a in grlex_oracle(2, 2)]
    for mask in itertools.product([0, 1], repeat=3):
        gens = [m for m, b in zip(mons, mask) if b]
        # a common zero exists unless both pure squares are present
        expected = mask[0] == 1 and mask[2] == 1
        assert is_basepoint_free(gens) == expected, mask
