"""Graph construction and serialization tests."""

import pytest

from bsim.errors import SchemaError
from bsim.pidg import build_pidg, build_pidg_set, deserialize_pidg, serialize_pidg, to_dot
from bsim.matcher import sim_graph

from helpers import FIG_HASH, graphs_of, run_source


class TestWorkedExampleGraph:
    @pytest.fixture()
    def graph(self):
        return build_pidg(run_source(FIG_HASH, entry="hashPassword")[0])

    def test_node_inventory(self, graph):
        assert len(graph.nodes) == 9
        assert graph.node_counts() == {"entry": 1, "data": 6, "operator": 1, "call": 1}

    def test_edge_inventory(self, graph):
        counts = graph.edge_counts()
        assert counts["aggregation"] == 2
        assert counts["transformation"] == 3
        assert counts["scope"] == 1
        assert counts["supplied"] == 1
        # one call-parameter edge plus the two entry-parameter edges
        call = next(n.idx for n in graph.nodes if n.node_type == "call")
        call_params = [e for e in graph.edges
                       if e.edge_type == "parameter" and e.dst == call]
        entry_params = [e for e in graph.edges
                        if e.edge_type == "parameter" and e.src == graph.entry]
        assert len(call_params) == 1
        assert len(entry_params) == 2

    def test_aggregation_labels(self, graph):
        labels = sorted(e.label for e in graph.edges if e.edge_type == "aggregation")
        assert labels == ["password", "salt"]
        assert all(not e.label_comparable for e in graph.edges
                   if e.edge_type == "aggregation")  # User is source-defined

    def test_operator_shape(self, graph):
        op = next(n for n in graph.nodes if n.node_type == "operator")
        assert op.attr("operator") == "concat"
        incoming = [e for e in graph.edges
                    if e.dst == op.idx and e.edge_type == "transformation"]
        outgoing = [e for e in graph.edges
                    if e.src == op.idx and e.edge_type == "transformation"]
        assert len(incoming) == 2 and len(outgoing) == 1


class TestConstruction:
    def test_trace_without_events(self):
        graph = graphs_of("class T { static void main(int x, int[] a) { } }")[0]
        assert graph.node_counts() == {"entry": 1, "data": 2}
        assert all(e.edge_type == "parameter" for e in graph.edges)

    def test_concrete_addition_micro_program(self):
        graph = graphs_of("""
            class T { static void main(int u) { Sink.put(2 + 3); } }
        """)[0]
        values = [n for n in graph.nodes if n.node_type == "data"
                  and n.attr("literal") in ("2", "3", "5")]
        assert len(values) == 3
        op = next(n for n in graph.nodes if n.node_type == "operator")
        assert op.attr("operator") == "+" and op.attr("result_type") == "int"
        trans = [e for e in graph.edges if e.edge_type == "transformation"]
        assert len(trans) == 3

    def test_repeated_literals_duplicate(self):
        graph = graphs_of("""
            class T { static void main(int u) { Sink.put(5 + 5); } }
        """)[0]
        fives = [n for n in graph.nodes if n.attr("literal") == "5"]
        assert len(fives) == 2

    def test_unique_data_appear_once(self):
        graph = graphs_of("""
            class T {
                static int main(Holder h) { return h.value + h.value; }
            }
            class Holder { int value; }
        """)[0]
        holders = [n for n in graph.nodes if n.attr("runtime_type") == "Holder"]
        assert len(holders) == 1

    def test_assertions_not_represented(self):
        graphs = graphs_of("""
            class T { static void main(boolean s) { if (s) { A.a(); } else { A.b(); } }
            }""")
        for g in graphs:
            assert "assertion" not in {n.node_type for n in g.nodes}
            # the assertion contributed no element: entry + param + call only
            assert len(g.nodes) == 3

    def test_set_semantics_not_deduplicated(self):
        graphs = graphs_of("""
            class T { static void main(boolean s) { Sink.put(1); if (s) { } } }
        """)
        assert len(graphs) == 2
        docs = [serialize_pidg(g) for g in graphs]
        assert docs[0] == docs[1]

    def test_elementwise_build(self):
        traces = run_source("""
            class T { static void main(boolean s, int k) { while (s) { k = k + 1; } } }
        """)
        graphs = build_pidg_set(traces)
        op_counts = sorted(sum(1 for n in g.nodes if n.node_type == "operator")
                           for g in graphs)
        assert op_counts == [0, 1, 2, 3]

    def test_static_write_yields_degree_zero_node(self):
        graph = graphs_of("""
            class T {
                static int unused = 42;
                static void main(int x) { Sink.put(x + 1); }
            }""")[0]
        const = next(n for n in graph.nodes if n.attr("literal") == "42")
        assert graph.degree(const.idx) == 0
        assert "static" in const.flags

    def test_array_access_labels(self):
        graph = graphs_of("""
            class T {
                static int main(int[] a, int i) {
                    a[0] = 7;
                    return a[i];
                }
            }""")[0]
        agg = [e for e in graph.edges if e.edge_type == "aggregation"]
        by_label = {e.label: e.label_comparable for e in agg}
        assert by_label["0"] is True
        assert by_label[None] is False  # symbolic index


class TestNonLinearity:
    def test_independent_statement_permutation_same_graph(self):
        a = graphs_of("""
            class T {
                static void main(int x, int y) {
                    int a = x + 1;
                    int b = y * 2;
                    Sink.put(a); Sink.put(b);
                }
            }""")[0]
        b = graphs_of("""
            class T {
                static void main(int x, int y) {
                    int b = y * 2;
                    int a = x + 1;
                    Sink.put(a); Sink.put(b);
                }
            }""")[0]
        assert sorted((n.node_type, n.attrs, n.flags) for n in a.nodes) == \
            sorted((n.node_type, n.attrs, n.flags) for n in b.nodes)
        assert sim_graph(a, b).value == 1.0


class TestSerialization:
    def test_round_trip(self):
        for graph in graphs_of(FIG_HASH, entry="hashPassword"):
            doc = serialize_pidg(graph)
            again = deserialize_pidg(doc)
            assert serialize_pidg(again) == doc

    def test_byte_stable(self):
        import json
        g1 = graphs_of(FIG_HASH, entry="hashPassword")[0]
        g2 = graphs_of(FIG_HASH, entry="hashPassword")[0]
        assert json.dumps(serialize_pidg(g1), sort_keys=True) == \
            json.dumps(serialize_pidg(g2), sort_keys=True)

    def test_minimal_document(self):
        graph = graphs_of("class T { static void main() { } }")[0]
        doc = serialize_pidg(graph)
        assert doc["nodes"][0]["node_type"] == "entry"
        assert doc["edges"] == []

    def test_dangling_edge_rejected(self):
        doc = serialize_pidg(graphs_of(FIG_HASH, entry="hashPassword")[0])
        doc["edges"][0]["to"] = 404
        with pytest.raises(SchemaError) as err:
            deserialize_pidg(doc)
        assert "404" in str(err.value)

    def test_wrong_schema_rejected(self):
        with pytest.raises(SchemaError):
            deserialize_pidg({"schema": "nope/9"})

    def test_dot_export(self):
        dot = to_dot(graphs_of(FIG_HASH, entry="hashPassword")[0])
        assert dot.startswith("digraph")
        assert "->" in dot
