"""Degree-wise ideal surjectivity, base-point-freeness certificates and the bound nu."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .exact import DimensionError, EchelonBasis, SymPoly, monomial_basis, sym_dim


class InvalidInput(ValueError):
    """Input violates a precondition of the requested computation."""


@dataclass(frozen=True)
class PolySystem:
    """Forms of common degree ``r`` in ``dim`` variables spanning a subspace ``B``."""

    dim: int
    r: int
    gens: tuple

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))
        for g in self.gens:
            if g.dim != self.dim or g.degree != self.r:
                raise DimensionError(f"generator {g!r} is not a degree {self.r} form in {self.dim} variables")


@dataclass
class Surjectivity:
    N: int
    rank: int
    target: int

    @property
    def surjective(self) -> bool:
        return self.rank == self.target


@dataclass
class MacaulayReport:
    certified: bool
    first_surjective_N: int | None
    ranks_by_N: list = field(default_factory=list)
    N_max: int = 0


def ideal_component_surjective(B: PolySystem, N: int) -> Surjectivity:
    """Rank of ``S^(N-r) W (x) span B -> S^N W``."""
    if N < B.r:
        raise DimensionError(f"degree {N} is below the generator degree {B.r}")
    target = sym_dim(B.dim, N)
    span = EchelonBasis(target)
    for a in monomial_basis(B.dim, N - B.r):
        mono = SymPoly.monomial(a)
        for g in B.gens:
            span.add((mono * g).coordinates())
            if len(span) == target:
                return Surjectivity(N, target, target)
    return Surjectivity(N, len(span), target)


def certify_basepoint_free(B: PolySystem, N_max: int | None = None) -> MacaulayReport:
    """Scan ``N = r .. N_max`` for the first degree where the ideal is everything.

    Success proves the forms have no common zero besides 0 over any field
    extension. Failure only settles the question once ``N_max >= r * dim``.
    Defaults to ``N_max = r * dim``.
    """
    if not B.gens:
        raise InvalidInput("empty generator list")
    if N_max is None:
        N_max = B.r * B.dim
    if N_max < B.r:
        raise InvalidInput(f"N_max={N_max} is below the generator degree {B.r}")
    ranks = []
    for N in range(B.r, N_max + 1):
        s = ideal_component_surjective(B, N)
        ranks.append((N, s.rank, s.target))
        if s.surjective:
            return MacaulayReport(True, N, ranks, N_max)
    return MacaulayReport(False, None, ranks, N_max)


def is_basepoint_free(gens: Sequence[SymPoly]) -> bool:
    """Decide whether the forms have 0 as their only common zero.

    Conclusive in both directions because the scan runs up to ``r * dim``.
    """
    gens = list(gens)
    if not gens:
        return False
    return certify_basepoint_free(PolySystem(gens[0].dim, gens[0].degree, gens)).certified


def big_D(N: int, d: int) -> int:
    """``(dim S^N V)^2`` for ``dim V = d``."""
    return sym_dim(d, N) ** 2


def nu(r: int, d: int) -> int:
    """``lcm(1, ..., big_D(r d, d))``."""
    if r < 1 or d < 1:
        raise ValueError("need r >= 1 and d >= 1")
    return math.lcm(*range(1, big_D(r * d, d) + 1))


def _primes_upto(n: int) -> list:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(range(p * p, n + 1, p)))
    return [p for p in range(n + 1) if sieve[p]]


def nu_factorization(r: int, d: int) -> list:
    """Prime factorisation of ``nu(r, d)`` as ``[(p, k), ...]``.

    The exponent of ``p`` is the largest ``k`` with ``p^k <= big_D(r d, d)``.
    """
    D = big_D(r * d, d)
    out = []
    for p in _primes_upto(D):
        k, q = 0, 1
        while q * p <= D:
            q *= p
            k += 1
        out.append((p, k))
    return out


def format_factorization(factors: Sequence) -> str:
    if not factors:
        return "1"
    return "*".join(f"{p}^{k}" if k > 1 else str(p) for p, k in factors)
