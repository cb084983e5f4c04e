"""Decision engine for exponential families of lumpable stochastic matrices.

Given a strongly connected digraph and a lumping of its states, the package
decides whether the family of lumpable stochastic matrices supported on that
graph is an exponential family, and backs every verdict with a certificate:
a combinatorial rule, an exact rank computation, or a numerical witness.
"""

from .census import FamilyClass, canonical_form, classify_three_state, enumerate_families
from .criteria import (
    E_FAMILY,
    NOT_E_FAMILY,
    Redundancy,
    Verdict,
    chain,
    chain_length,
    check_monotone_pair,
    decide,
    is_redundant_block,
    strip_diagonal_blocks,
)
from .digraph import Digraph, scc, strongly_connected
from .dimension import (
    DimensionReport,
    cone_basis,
    dimensional_criterion,
    manifold_dim,
    n_basis,
    simplified_inequality,
)
from .families import bundled_family, decode_document, encode_document
from .lumping import (
    LumpingMap,
    VacuousFamilyError,
    block_profile,
    complete_family,
    hudson_expansion,
    is_lumpable_matrix,
    is_nonvacuous,
    lumpability_violation,
    lumped_graph,
    push_forward,
    uniform_type_matrix,
)
from .spectral import ConvergenceError, e_geodesic_point, pf_eigenpair, s_normalize
from .witness import Witness, merging_pair_construction, search_witness, verify_witness

__version__ = "0.1.0"

__all__ = [
    "Digraph",
    "LumpingMap",
    "VacuousFamilyError",
    "ConvergenceError",
    "Verdict",
    "Redundancy",
    "DimensionReport",
    "FamilyClass",
    "Witness",
    "E_FAMILY",
    "NOT_E_FAMILY",
    "strongly_connected",
    "scc",
    "lumped_graph",
    "is_nonvacuous",
    "block_profile",
    "is_lumpable_matrix",
    "lumpability_violation",
    "push_forward",
    "uniform_type_matrix",
    "hudson_expansion",
    "complete_family",
    "pf_eigenpair",
    "s_normalize",
    "e_geodesic_point",
    "n_basis",
    "cone_basis",
    "manifold_dim",
    "dimensional_criterion",
    "simplified_inequality",
    "decide",
    "is_redundant_block",
    "chain",
    "chain_length",
    "check_monotone_pair",
    "strip_diagonal_blocks",
    "canonical_form",
    "enumerate_families",
    "classify_three_state",
    "search_witness",
    "verify_witness",
    "merging_pair_construction",
    "bundled_family",
    "decode_document",
    "encode_document",
]
