"""Graph (de)serialization: canonical JSON documents and a DOT export."""

from __future__ import annotations

from ..errors import SchemaError
from .graph import EDGE_TYPES, Pidg, PidgEdge, PidgNode

SCHEMA = "pidg/1"

_NODE_TYPES = {"entry", "data", "operator", "call"}


def serialize_pidg(graph: Pidg) -> dict:
    """Canonical document: nodes in creation order, edges sorted."""
    nodes = []
    for node in graph.nodes:
        doc = {"id": node.idx, "node_type": node.node_type,
               "attributes": {k: v for k, v in node.attrs}}
        if node.node_type == "data":
            doc["data_kind"] = node.data_kind
            doc["flags"] = sorted(node.flags)
            doc["source_defined"] = node.source_defined
        nodes.append(doc)
    edges = []
    for e in sorted(graph.edges, key=_edge_key):
        doc = {"from": e.src, "to": e.dst, "edge_type": e.edge_type}
        if e.label is not None:
            doc["label"] = e.label
        if not e.label_comparable:
            doc["label_comparable"] = False
        edges.append(doc)
    return {"schema": SCHEMA, "entry": graph.entry, "nodes": nodes, "edges": edges}


def _edge_key(e: PidgEdge):
    return (e.src, e.dst, e.edge_type, e.label or "")


def deserialize_pidg(doc: dict) -> Pidg:
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise SchemaError(f"expected schema {SCHEMA!r}")
    try:
        nodes = []
        ids = set()
        for k, nd in enumerate(doc["nodes"]):
            if nd["id"] != k:
                raise SchemaError(f"non-canonical node id {nd['id']} at position {k}")
            if nd["node_type"] not in _NODE_TYPES:
                raise SchemaError(f"unknown node type {nd['node_type']!r}")
            nodes.append(PidgNode(
                idx=k, node_type=nd["node_type"],
                data_kind=nd.get("data_kind"),
                attrs=tuple(sorted(nd.get("attributes", {}).items())),
                flags=frozenset(nd.get("flags", [])),
                source_defined=nd.get("source_defined", False)))
            ids.add(k)
        edges = []
        for ed in doc["edges"]:
            src, dst = ed["from"], ed["to"]
            for endpoint in (src, dst):
                if endpoint not in ids:
                    raise SchemaError(f"edge references dangling node id {endpoint}")
            if ed["edge_type"] not in EDGE_TYPES:
                raise SchemaError(f"unknown edge type {ed['edge_type']!r}")
            edges.append(PidgEdge(src=src, dst=dst, edge_type=ed["edge_type"],
                                  label=ed.get("label"),
                                  label_comparable=ed.get("label_comparable", True)))
        entry = doc["entry"]
        if entry not in ids:
            raise SchemaError(f"entry references dangling node id {entry}")
        if nodes[entry].node_type != "entry":
            raise SchemaError("entry id does not reference an entry node")
        return Pidg(nodes=nodes, edges=edges, entry=entry)
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed graph document: {exc}") from exc


_DOT_SHAPE = {"entry": "doublecircle", "data": "ellipse",
              "operator": "diamond", "call": "box"}

_DOT_STYLE = {"scope": "bold", "parameter": "solid", "supplied": "solid",
              "aggregation": "dashed", "transformation": "dotted"}


def to_dot(graph: Pidg) -> str:
    """Debug rendering of a graph in Graphviz DOT format."""
    out = ["digraph pidg {"]
    for node in graph.nodes:
        bits = [f"{k}={v}" for k, v in node.attrs if v is not None]
        if node.flags:
            bits.append("{" + ",".join(sorted(node.flags)) + "}")
        label = f"n{node.idx}\\n" + "\\n".join(str(b) for b in bits)
        out.append(f'  n{node.idx} [shape={_DOT_SHAPE[node.node_type]} label="{label}"];')
    for e in graph.edges:
        label = f' [style={_DOT_STYLE[e.edge_type]} label="{e.edge_type[0]}'
        if e.label is not None:
            label += f":{e.label}"
        label += '"]'
        out.append(f"  n{e.src} -> n{e.dst}{label};")
    out.append("}")
    return "\n".join(out)
