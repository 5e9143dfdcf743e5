"""Pointwise section data: direct sums, the tensor pairing of Phi-sections, and
end-to-end certificates that ``O(nr)`` on ``P(E (x) F)`` is generated at a point.

Sections are finite tables ``point -> SymPoly``; only their values at a single
point ever matter.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .certificate import (
    Certificate,
    NotBasepointFree,
    SearchOptions,
    VerificationFailed,
    as_matrix,
    certificate_search,
    nu_bound_holds,
)
from .exact import DimensionError, SymPoly, multinomial, to_scalar
from .graphs import check_margins
from .macaulay import InvalidInput, is_basepoint_free


def symmetric_tensor(p: SymPoly) -> np.ndarray:
    """The symmetric tensor in ``V^(x)r`` whose image in ``S^r V`` is ``p``."""
    shape = (p.dim,) * p.degree
    T = np.empty(shape, dtype=object)
    for idx in itertools.product(range(p.dim), repeat=p.degree):
        a = [0] * p.dim
        for k in idx:
            a[k] += 1
        a = tuple(a)
        T[idx] = p.coeff(a) / multinomial(a)
    return T


def _outer(tensors: Sequence[np.ndarray]) -> np.ndarray:
    out = tensors[0]
    for t in tensors[1:]:
        out = np.multiply.outer(out, t)
    return out


def slot_permutation(M, r: int) -> list:
    """Canonical ``sigma`` with ``sigma[k]`` = E-slot paired with F-slot ``k``.

    Slots ``i*r .. i*r + r - 1`` belong to vertex ``i`` on each side. F-block
    ``j`` takes ``M[i][j]`` unused slots from E-block ``i``, lowest ``i`` and
    lowest slot first.
    """
    m = len(M)
    nxt = [i * r for i in range(m)]
    sigma = []
    for j in range(m):
        for i in range(m):
            for _ in range(M[i][j]):
                sigma.append(nxt[i])
                nxt[i] += 1
    return sigma


def induced_mult(sigma: Sequence[int], r: int) -> tuple:
    m = len(sigma) // r
    M = [[0] * m for _ in range(m)]
    for k, s in enumerate(sigma):
        M[s // r][k // r] += 1
    return tuple(tuple(row) for row in M)


def phi_pairing_sigma(sigma: Sequence[int], sE: Sequence[SymPoly], tF: Sequence[SymPoly], u) -> Fraction:
    """``<J(sigma . I_E(s_1..s_n) (x) I_F(t_1..t_n)), u^(x)nr>`` by explicit tensor contraction."""
    U = as_matrix(u)
    n = len(sE)
    if len(tF) != n or n == 0:
        raise DimensionError("need the same positive number of E and F sections")
    r = sE[0].degree
    if any(s.degree != r for s in list(sE) + list(tF)):
        raise DimensionError("all section values must have the same degree")
    if sorted(sigma) != list(range(n * r)):
        raise ValueError("sigma must be a permutation of the n*r tensor slots")
    if U.shape != (sE[0].dim, tF[0].dim):
        raise DimensionError("pairing does not match the fibre dimensions")
    E = _outer([symmetric_tensor(s) for s in sE]).transpose(sigma)
    F = _outer([symmetric_tensor(t) for t in tF])
    Ua = np.array(U.entries, dtype=object)
    G = E
    for _ in range(n * r):
        G = np.tensordot(G, Ua, axes=([0], [0]))
    return to_scalar(np.sum(G * F))


def phi_pairing(M, sE: Sequence[SymPoly], tF: Sequence[SymPoly], u) -> Fraction:
    """Pairing of the Phi-section for the slot permutation realising ``M``."""
    r = sE[0].degree
    check_margins(M, r)
    if len(M) != len(sE):
        raise DimensionError("multiplicity matrix size differs from the number of sections")
    return phi_pairing_sigma(slot_permutation(M, r), sE, tF, u)


# ---------------------------------------------------------------------------
# direct sums


@dataclass
class DirectSumCertificate:
    summand: str
    index: int
    section: SymPoly
    value: Fraction
    summand_value: Fraction


def direct_sum_certificate(uE: Sequence, uF: Sequence, sectionsE: Sequence[SymPoly], sectionsF: Sequence[SymPoly]) -> DirectSumCertificate:
    """Find a section of ``S^r(E + F)`` not killed by ``u^(x)r`` for ``u = (uE, uF)``.

    Takes a section of the summand on which ``u`` is nonzero and pushes it in
    through the inclusion of variables.
    """
    uE = [to_scalar(x) for x in uE]
    uF = [to_scalar(x) for x in uF]
    e, f = len(uE), len(uF)
    u = uE + uF
    if any(uE):
        summand, sections, local, offset = "E", sectionsE, uE, 0
    elif any(uF):
        summand, sections, local, offset = "F", sectionsF, uF, e
    else:
        raise InvalidInput("u is zero on both summands")
    for k, s in enumerate(sections):
        if s.dim != len(local):
            raise DimensionError(f"section {k} of {summand} has the wrong dimension")
        local_value = s.evaluate(local)
        if local_value:
            embedded = s.embed(e + f, offset)
            value = embedded.evaluate(u)
            if value != local_value:
                raise VerificationFailed("inclusion changed the pairing")
            return DirectSumCertificate(summand, k, embedded, value, local_value)
    raise NotBasepointFree(f"every section of {summand} vanishes at u_{summand}; it is not generated there")


# ---------------------------------------------------------------------------
# fibre models


@dataclass
class FiberModel:
    points: list
    e: int
    f: int
    r: int
    sections_E: list
    sections_F: list

    def __post_init__(self):
        for side, dim, secs in (("E", self.e, self.sections_E), ("F", self.f, self.sections_F)):
            for k, s in enumerate(secs):
                for x in self.points:
                    if x not in s:
                        raise InvalidInput(f"section {k} of {side} has no value at point {x!r}")
                    p = s[x]
                    if p.dim != dim or p.degree != self.r:
                        raise InvalidInput(f"section {k} of {side} at {x!r} is not a degree {self.r} form in {dim} variables")

    def values_E(self, point) -> list:
        return [s[point] for s in self.sections_E]

    def values_F(self, point) -> list:
        return [s[point] for s in self.sections_F]


def generates_at(values: Sequence[SymPoly], v: Sequence) -> bool:
    """Whether some section value is not annihilated by ``v^(x)r``."""
    return any(p.evaluate(v) for p in values)


@dataclass
class GbsCertificate:
    point: str
    certificate: Certificate
    sigma: list
    phi_value: Fraction
    sections_E: list
    sections_F: list

    @property
    def n(self) -> int:
        return self.certificate.m


def tensor_gbs_certificate(model: FiberModel, point, u, options: SearchOptions | None = None) -> GbsCertificate:
    """Certificate that the fibre of ``O(nr)`` over ``(point, u^perp)`` is generated.

    ``u`` is an ``e x f`` matrix, a nonzero element of ``(E_x (x) F_x)^*``.
    """
    if point not in model.points:
        raise InvalidInput(f"unknown point {point!r}")
    U = as_matrix(u)
    if U.shape != (model.e, model.f):
        raise InvalidInput(f"u must be an {model.e} x {model.f} matrix")
    if U.is_zero():
        raise InvalidInput("u is zero")
    A = model.values_E(point)
    B = model.values_F(point)
    if not A or not is_basepoint_free(A):
        raise NotBasepointFree(f"sections of S^r E have a common zero at point {point!r}")
    if not B or not is_basepoint_free(B):
        raise NotBasepointFree(f"sections of S^r F have a common zero at point {point!r}")
    cert = certificate_search(A, B, U, options)
    sigma = slot_permutation(cert.mult, model.r)
    phi_value = phi_pairing_sigma(sigma, cert.vdecs, cert.wdecs, U)
    if phi_value != cert.value:
        raise VerificationFailed(f"Phi-section pairs to {phi_value}, graph value is {cert.value}")
    if not nu_bound_holds(cert.m, model.r, model.e):
        raise VerificationFailed("n exceeds nu(r, rank E)")
    used_E = sorted({k for c in cert.coeffsA for k, x in enumerate(c) if x})
    used_F = sorted({k for c in cert.coeffsB for k, x in enumerate(c) if x})
    return GbsCertificate(point, cert, sigma, phi_value, used_E, used_F)
