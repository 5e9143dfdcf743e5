"""Exact symmetric-tensor calculus and certificates of global generation for
tensor products of vector bundles, computed pointwise over the rationals."""

from .certificate import (
    AlgebraChain,
    Certificate,
    NotBasepointFree,
    ReducedProblem,
    SearchExhausted,
    SearchOptions,
    VerificationFailed,
    build_algebra_chain,
    certificate_search,
    is_nil,
    reduce_to_bijective,
)
from .exact import Matrix, SymPoly, matrix_product, matrix_rank, matrix_trace, monomial_basis, sym_dim
from .fiber import FiberModel, direct_sum_certificate, phi_pairing, tensor_gbs_certificate
from .graphs import (
    DecoratedGraph,
    TraceIdentityReport,
    c_gamma,
    enumerate_graphs,
    graph_value,
    rho_of,
    trace_identity_check,
)
from .macaulay import InvalidInput, PolySystem, big_D, certify_basepoint_free, ideal_component_surjective, nu
from .symops import (
    OperatorFactor,
    OperatorWord,
    con1_apply,
    conr_apply,
    mul1_apply,
    mulr_apply,
    operator_matrix,
    word_trace,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraChain",
    "Certificate",
    "DecoratedGraph",
    "FiberModel",
    "InvalidInput",
    "Matrix",
    "NotBasepointFree",
    "OperatorFactor",
    "OperatorWord",
    "PolySystem",
    "ReducedProblem",
    "SearchExhausted",
    "SearchOptions",
    "SymPoly",
    "TraceIdentityReport",
    "VerificationFailed",
    "big_D",
    "build_algebra_chain",
    "c_gamma",
    "certificate_search",
    "certify_basepoint_free",
    "con1_apply",
    "conr_apply",
    "direct_sum_certificate",
    "enumerate_graphs",
    "graph_value",
    "ideal_component_surjective",
    "is_nil",
    "matrix_product",
    "matrix_rank",
    "matrix_trace",
    "monomial_basis",
    "mul1_apply",
    "mulr_apply",
    "nu",
    "operator_matrix",
    "phi_pairing",
    "reduce_to_bijective",
    "rho_of",
    "sym_dim",
    "tensor_gbs_certificate",
    "trace_identity_check",
    "word_trace",
]
