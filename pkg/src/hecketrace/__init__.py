"""Traces of Hecke-algebra products on graph path spaces, their fusion-basis
expansions, and a verification suite for the recursion identities they obey."""
from .chebyshev import cheb_coeffs, cheb_eval, cheb_matrix
from .fusion import check_fusion_ring, fusion_matrix, n_expand
from .graphs import GraphRep, ade_graph, basic_graph, make_graph, perron_vector
from .hecke import build_generator, build_path_space, check_hecke_relations, check_quotient, diamond
from .identities import IdentityReport, run_suite
from .traces import TraceMatrix, markov_average, partial_trace_edge, word_trace, z_trace, ztilde_trace
from .weights import RankLevel

__version__ = "0.1.0"

__all__ = [
    "RankLevel",
    "GraphRep",
    "basic_graph",
    "ade_graph",
    "make_graph",
    "perron_vector",
    "cheb_eval",
    "cheb_coeffs",
    "cheb_matrix",
    "fusion_matrix",
    "n_expand",
    "check_fusion_ring",
    "diamond",
    "build_path_space",
    "build_generator",
    "check_hecke_relations",
    "check_quotient",
    "TraceMatrix",
    "z_trace",
    "ztilde_trace",
    "word_trace",
    "partial_trace_edge",
    "markov_average",
    "IdentityReport",
    "run_suite",
]
