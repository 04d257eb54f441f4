"""Rank triples of bipartite quantum states: feasibility, witnesses and checks."""

from .bipartite import (
    BipartiteDims,
    CorrelationVerdict,
    DensityOperator,
    RankTriple,
    bell_state,
    is_uncorrelated,
    partial_trace_over_1,
    partial_trace_over_2,
    product_state,
    rank_triple,
    schmidt_rank,
    swap_subsystems,
)
from .constructions import (
    INF,
    Kind,
    TripleClass,
    classify_triple,
    classify_triple_extended,
    construct_product_mixture,
    construct_subbasis_mixture,
    construct_uncorrelated,
    construct_witness,
    sample_random_state,
    scramble_local,
)
from .linalg import (
    EigenSystem,
    frobenius_distance,
    hermitian_eigensystem,
    numerical_rank,
    random_unitary,
    tensor_product,
)
from .verification import analyze_state, sweep_theorem, verify_necessity_chain

__version__ = "0.1.0"
