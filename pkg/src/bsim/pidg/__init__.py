"""Interaction dependency graphs: construction and serialization."""

from .build import build_pidg, build_pidg_set
from .graph import (
    AGGREGATION,
    CALL,
    DATA,
    ENTRY,
    OPERATOR,
    PARAMETER,
    SCOPE,
    SUPPLIED,
    TRANSFORMATION,
    Pidg,
    PidgEdge,
    PidgNode,
)
from .io import deserialize_pidg, serialize_pidg, to_dot

__all__ = [
    "AGGREGATION", "CALL", "DATA", "ENTRY", "OPERATOR", "PARAMETER", "SCOPE",
    "SUPPLIED", "TRANSFORMATION",
    "Pidg", "PidgEdge", "PidgNode",
    "build_pidg", "build_pidg_set", "deserialize_pidg", "serialize_pidg", "to_dot",
]
