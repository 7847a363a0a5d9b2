"""Graph similarity: node mapping heuristic and pair/program scores."""

from .matching import (
    GraphScore,
    NodeMapping,
    ProgramScore,
    expand_mapping,
    mapping_dump,
    match_graphs,
    score_mapping,
    seed_mapping,
    sim_graph,
    sim_program,
    valid_match,
)

__all__ = [
    "GraphScore", "NodeMapping", "ProgramScore",
    "expand_mapping", "mapping_dump", "match_graphs", "score_mapping",
    "seed_mapping", "sim_graph", "sim_program", "valid_match",
]
