"""Anomalous signs in determinant expansions of sign patterns and of ``S U`` Jacobians."""

from .bigraph import (
    Cycle,
    Matching,
    SignedBipartiteGraph,
    build_graph,
    enumerate_cycles,
    enumerate_perfect_matchings,
    interlacing_cycles,
    to_dot,
)
from .coredet import (
    ReducedSystem,
    anomalous_bounds,
    cf_determinant,
    cf_determinant_oracle,
    core_determinant,
    core_determinant_oracle,
    genericity_check,
    reduce,
    square_case_counts,
    zero_one_algorithm,
)
from .detsign import classify, count_signs_graph, fast_counts, is_ssd, j_sign_bound, zero_one_square
from .errors import *  # noqa: F401,F403
from .jacobian import (
    classify_reaction_form,
    flux_pattern,
    jacobian_sign_pattern,
    wrf_sign_pattern_sufficient,
)
from .matrix_core import (
    RationalMatrix,
    SignCounts,
    SignPattern,
    Var,
    determinant,
    parse_matrix,
    rank,
    sign_pattern_of,
)
from .symexpand import MultilinearPoly, det_expansion, det_poly_matrix, sign_counts, symbolic_product

__version__ = "0.1.0"
