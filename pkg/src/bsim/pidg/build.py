"""Event-to-graph construction: one graph per execution trace.

The first node of every graph is the entry point, followed by the entry
parameter data. Events then map to elements:

  api call        -> MethodCall node; Scope edge from the receiver, Parameter
                     edges from arguments, Supplied edge to the synthetic result
  field access    -> static: the datum's node is flagged Static (no edge);
                     instance: Aggregation edge owner -> datum, labelled by
                     field name
  array access    -> Aggregation edge array -> element, labelled by the index
                     when it is concrete
  primary op      -> Operator node; Transformation edges operands -> op -> result
  string concat   -> Operator node labelled concatenation, same shape
  stringify       -> Transformation edge operand -> result
  assertion       -> nothing

Operator and MethodCall nodes are created per usage; Data nodes follow datum
identity.
"""

from __future__ import annotations

from ..errors import MalformedTrace
from ..executor.events import (
    ApiCall,
    ArrayAccess,
    Assertion,
    ExecutionTrace,
    FieldAccess,
    PrimaryOperation,
    StringConcat,
    Stringify,
)
from ..executor.values import Datum
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
    make_attrs,
)

CONCAT_OPERATOR = "concat"


class _Builder:
    def __init__(self, trace: ExecutionTrace):
        self.trace = trace
        self.graph = Pidg()
        self.by_datum: dict[int, int] = {}
        self.edge_seen: set[tuple] = set()

    def add_node(self, node_type: str, data_kind=None, attrs=(), flags=frozenset(),
                 source_defined=False) -> int:
        idx = len(self.graph.nodes)
        self.graph.nodes.append(PidgNode(idx=idx, node_type=node_type,
                                         data_kind=data_kind, attrs=attrs,
                                         flags=flags,
                                         source_defined=source_defined))
        return idx

    def add_edge(self, src: int, dst: int, edge_type: str, label: str | None = None,
                 label_comparable: bool = True):
        key = (src, dst, edge_type, label)
        if key in self.edge_seen:
            return
        self.edge_seen.add(key)
        self.graph.edges.append(PidgEdge(src=src, dst=dst, edge_type=edge_type,
                                         label=label,
                                         label_comparable=label_comparable))

    def data_node(self, datum: Datum) -> int:
        if datum is None:
            raise MalformedTrace("event references a missing datum")
        if datum.id in self.by_datum:
            return self.by_datum[datum.id]
        kind = datum.serial_kind()
        if kind == "null":
            kind = "value"
            attrs = make_attrs(literal="null")
        elif kind == "value":
            literal = None
            if datum.concrete:
                literal = str(datum.literal).lower() if datum.type == "boolean" \
                    else str(datum.literal)
            attrs = make_attrs(runtime_type=datum.type, literal=literal)
        elif kind == "array":
            attrs = make_attrs(runtime_type=datum.type)
        else:  # object
            attrs = make_attrs(runtime_type=datum.type,
                               string=datum.text if datum.concrete else None)
        idx = self.add_node(DATA, data_kind=kind, attrs=attrs,
                            flags=frozenset(datum.flags),
                            source_defined=datum.source_defined)
        self.by_datum[datum.id] = idx
        return idx

    def build(self) -> Pidg:
        trace = self.trace
        name, _, arity = trace.entry_signature.rpartition("/")
        entry_idx = self.add_node(ENTRY, attrs=make_attrs(
            signature=trace.entry_signature,
            entry_name=name.rpartition(".")[2],
            entry_arity=arity))
        self.graph.entry = entry_idx
        for p in trace.parameters:
            self.add_edge(entry_idx, self.data_node(p), PARAMETER)

        for event in trace.events:
            if isinstance(event, ApiCall):
                call_idx = self.add_node(CALL, attrs=make_attrs(signature=event.signature))
                if event.scope is not None:
                    self.add_edge(self.data_node(event.scope), call_idx, SCOPE)
                for param in event.params:
                    self.add_edge(self.data_node(param), call_idx, PARAMETER)
                if event.result is not None:
                    self.add_edge(call_idx, self.data_node(event.result), SUPPLIED)
            elif isinstance(event, FieldAccess):
                if event.static_type is not None:
                    self.data_node(event.datum)  # flagged Static, no edge
                else:
                    scope_idx = self.data_node(event.scope)
                    scope_defined = self.graph.nodes[scope_idx].source_defined
                    self.add_edge(scope_idx, self.data_node(event.datum), AGGREGATION,
                                  label=event.field,
                                  label_comparable=not scope_defined)
            elif isinstance(event, ArrayAccess):
                concrete_index = event.index.concrete and event.index.kind == "value"
                self.add_edge(self.data_node(event.scope), self.data_node(event.datum),
                              AGGREGATION,
                              label=str(event.index.literal) if concrete_index else None,
                              label_comparable=concrete_index)
            elif isinstance(event, PrimaryOperation):
                op_idx = self.add_node(OPERATOR, attrs=make_attrs(
                    operator=event.operator, result_type=event.result.type))
                self.add_edge(self.data_node(event.lhs), op_idx, TRANSFORMATION)
                if event.rhs is not None:
                    self.add_edge(self.data_node(event.rhs), op_idx, TRANSFORMATION)
                self.add_edge(op_idx, self.data_node(event.result), TRANSFORMATION)
            elif isinstance(event, StringConcat):
                op_idx = self.add_node(OPERATOR, attrs=make_attrs(
                    operator=CONCAT_OPERATOR, result_type="String"))
                for operand in event.operands:
                    self.add_edge(self.data_node(operand), op_idx, TRANSFORMATION)
                self.add_edge(op_idx, self.data_node(event.result), TRANSFORMATION)
            elif isinstance(event, Stringify):
                self.add_edge(self.data_node(event.operand),
                              self.data_node(event.result), TRANSFORMATION)
            elif isinstance(event, Assertion):
                pass  # assertions are not represented
            else:
                raise MalformedTrace(f"unknown event {event!r}")
        return self.graph


def build_pidg(trace: ExecutionTrace) -> Pidg:
    """Construct the graph for one trace."""
    return _Builder(trace).build()


def build_pidg_set(traces: list[ExecutionTrace]) -> list[Pidg]:
    """Elementwise construction, order preserved, no deduplication."""
    return [build_pidg(t) for t in traces]
