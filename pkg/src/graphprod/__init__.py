"""Exact computation in graph products of cyclic groups."""
from .graph import (
    INF,
    DefiningGraph,
    GraphError,
    ParseError,
    SilWitness,
    blow_up,
    center_split,
    components_outside_star,
    find_sils,
    graph_distance,
    link_star,
    parse_graph,
)
from .words import GroupWord, identity, multiply, invert, normalize, oracle_equal, parse_word

__all__ = [
    "INF", "DefiningGraph", "GraphError", "ParseError", "SilWitness", "blow_up", "center_split",
    "components_outside_star", "find_sils", "graph_distance", "link_star", "parse_graph",
    "GroupWord", "identity", "multiply", "invert", "normalize", "oracle_equal", "parse_word",
]

__version__ = "0.1.0"
