"""Approximate k x k subdeterminant maximization by local search, with exact
checks of the extended Plücker relations behind its guarantee."""

from .indices import Exchange, IndexPair, distance, exchange_count, exchanges, neighborhood, sign_delta
from .matrix import DetValue, Matrix, cauchy_binet_check, det_sub, parse_matrix, rank, read_matrix
from .plucker import (
    STerms,
    compute_s_terms,
    verify_disjoint_identity,
    verify_exchange_inequality,
    verify_general_identity,
)
from .report import IdentityReport
from .search import (
    SearchConfig,
    SearchTrace,
    crude_init,
    detlb,
    local_search,
    local_to_global_certificate,
    make_hadamard_fixture,
    maxdet_oracle,
    maximize,
)

__all__ = [
    "DetValue",
    "Exchange",
    "IdentityReport",
    "IndexPair",
    "Matrix",
    "STerms",
    "SearchConfig",
    "SearchTrace",
    "cauchy_binet_check",
    "compute_s_terms",
    "crude_init",
    "det_sub",
    "detlb",
    "distance",
    "exchange_count",
    "exchanges",
    "local_search",
    "local_to_global_certificate",
    "make_hadamard_fixture",
    "maxdet_oracle",
    "maximize",
    "neighborhood",
    "parse_matrix",
    "rank",
    "read_matrix",
    "sign_delta",
    "verify_disjoint_identity",
    "verify_exchange_inequality",
    "verify_general_identity",
]
