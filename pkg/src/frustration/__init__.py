"""Exact frustration index (line index of balance) of signed graphs."""

from .sgraph import (
    BalanceCertificate,
    Colouring,
    EdgeListError,
    FrustrationResult,
    SignedGraph,
    circuit_rank,
    connected_components,
    format_edge_list,
    frustrated_edges,
    frustration_count,
    is_balanced,
    net_degree,
    parse_edge_list,
    read_edge_list,
    switch,
    write_edge_list,
)
from .solver import SolverOptions, local_search, lower_bound_root, solve_exact, upper_bound_trivial
from .oracle import brute_force

__all__ = [
    "BalanceCertificate", "Colouring", "EdgeListError", "FrustrationResult", "SignedGraph", "SolverOptions",
    "brute_force", "circuit_rank", "connected_components", "format_edge_list", "frustrated_edges",
    "frustration_count", "is_balanced", "local_search", "lower_bound_root", "net_degree", "parse_edge_list",
    "read_edge_list", "solve_exact", "switch", "upper_bound_trivial", "write_edge_list",
]
__version__ = "0.1.0"
