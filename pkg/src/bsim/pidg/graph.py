"""The interaction dependency graph: labelled directed graph of one path.

Nodes are Data (object/array/value), Operator, MethodCall, or the unique
EntryPoint; edges are Scope, Parameter, Supplied, Aggregation, Transformation.
Node identity follows datum identity: objects, arrays and symbolic values
appear once per graph, while each textual literal evaluation minted a fresh
concrete datum and therefore a fresh node.
"""

from __future__ import annotations

from dataclasses import dataclass, field

ENTRY = "entry"
DATA = "data"
OPERATOR = "operator"
CALL = "call"

SCOPE = "scope"
PARAMETER = "parameter"
SUPPLIED = "supplied"
AGGREGATION = "aggregation"
TRANSFORMATION = "transformation"

EDGE_TYPES = (SCOPE, PARAMETER, SUPPLIED, AGGREGATION, TRANSFORMATION)


@dataclass(frozen=True)
class PidgNode:
    idx: int
    node_type: str  # entry | data | operator | call
    data_kind: str | None = None  # object | array | value (data nodes only)
    attrs: tuple = ()  # sorted (key, value) pairs
    flags: frozenset = frozenset()
    source_defined: bool = False

    def attr(self, key: str, default=None):
        for k, v in self.attrs:
            if k == key:
                return v
        return default


def make_attrs(**kw) -> tuple:
    return tuple(sorted((k, v) for k, v in kw.items() if v is not None))


@dataclass(frozen=True)
class PidgEdge:
    src: int
    dst: int
    edge_type: str
    label: str | None = None
    label_comparable: bool = True


@dataclass
class Pidg:
    nodes: list[PidgNode] = field(default_factory=list)
    edges: list[PidgEdge] = field(default_factory=list)
    entry: int = 0

    _adjacency: list | None = field(default=None, repr=False, compare=False)

    def size(self) -> int:
        """Total element count: nodes plus edges."""
        return len(self.nodes) + len(self.edges)

    def adjacency(self) -> list[list[tuple[int, int, str]]]:
        """Per node: (edge index, neighbour index, direction 'out'/'in')."""
        if self._adjacency is None:
            adj: list[list[tuple[int, int, str]]] = [[] for _ in self.nodes]
            for ei, e in enumerate(self.edges):
                adj[e.src].append((ei, e.dst, "out"))
                adj[e.dst].append((ei, e.src, "in"))
            self._adjacency = adj
        return self._adjacency

    def degree(self, idx: int) -> int:
        return len(self.adjacency()[idx])

    def edge_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for e in self.edges:
            counts[e.edge_type] = counts.get(e.edge_type, 0) + 1
        return counts

    def node_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for node in self.nodes:
            counts[node.node_type] = counts.get(node.node_type, 0) + 1
        return counts
