"""Coloring and partitioning sparse rank-k hypergraphs."""
__version__ = "0.1.0"

from ._accel import JIT_ENABLED
from .hypercore import (
    Hypergraph,
    HypergraphError,
    SparsityProfile,
    b_codegree,
    degree,
    induced,
    is_sparse,
    link,
    load,
    max_degree,
    max_jl_degree,
    profile,
    save,
)
from .census import Pattern, all_copy_sets, copies_at, delta_H, named_pattern, triangle_family, two_edge_pattern
from .oracles import (
    check_pattern_free,
    check_proper,
    chromatic_number_exact,
    greedy_link_matching,
    max_matching_exact,
    transversal_number_exact,
)
from .resample import moser_tardos, rankk_color, rankk_color_count
from .process import generate, random_greedy_is, triangle_hypergraph

__all__ = [
    "JIT_ENABLED",
    "Hypergraph",
    "HypergraphError",
    "Pattern",
    "SparsityProfile",
    "all_copy_sets",
    "b_codegree",
    "check_pattern_free",
    "check_proper",
    "chromatic_number_exact",
    "copies_at",
    "degree",
    "delta_H",
    "generate",
    "greedy_link_matching",
    "induced",
    "is_sparse",
    "link",
    "load",
    "max_degree",
    "max_jl_degree",
    "max_matching_exact",
    "moser_tardos",
    "named_pattern",
    "profile",
    "random_greedy_is",
    "rankk_color",
    "rankk_color_count",
    "save",
    "transversal_number_exact",
    "triangle_family",
    "triangle_hypergraph",
    "two_edge_pattern",
]
