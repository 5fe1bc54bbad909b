"""Ordered Ramsey numbers r_<(M, K3) for matchings: search, bounds and embedders."""

from ordered_ramsey.core import (
    BLUE,
    RED,
    EmbeddingWitness,
    FormatError,
    OrderedColoring,
    OrderedGraph,
    OrderedMatching,
    complete_graph,
    contains_ordered,
    find_blue_triangle,
    max_blue_degree,
)

__version__ = "0.1.0"

__all__ = [
    "BLUE",
    "RED",
    "EmbeddingWitness",
    "FormatError",
    "OrderedColoring",
    "OrderedGraph",
    "OrderedMatching",
    "complete_graph",
    "contains_ordered",
    "find_blue_triangle",
    "max_blue_degree",
    "__version__",
]
