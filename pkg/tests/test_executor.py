"""Executor tests: spec'd path behaviour, event completeness, determinism."""

import copy

import pytest

from bsim.executor import ExecutorLimits, execute_program, trace_from_doc
from bsim.errors import MalformedTrace
from bsim.executor.machine import Executor, fork_context
from bsim.lang import SourceUnit, resolve_program

from helpers import FIG_HASH, behaviour_shapes, canonical_shape, run_source


def events_of(trace, kind=None):
    docs = [e.to_doc() for e in trace.events]
    return [d for d in docs if kind is None or d["event"] == kind]


class TestWorkedExample:
    def test_single_path_events(self):
        traces = run_source(FIG_HASH, entry="hashPassword")
        assert len(traces) == 1
        trace = traces[0]
        assert trace.termination == "normal"
        assert len(events_of(trace, "field_access")) == 2
        assert len(events_of(trace, "string_concat")) == 1
        api = events_of(trace, "api_call")
        assert len(api) == 1
        assert api[0]["signature"] == "HashFunction.hash/1"
        assert api[0]["scope"] == 1  # HashFunction@1
        data = trace.to_doc()["data"]
        assert data["5"]["flags"] == ["symbolic", "synthetic"]
        assert data["5"]["type"] == "String"

    def test_figure_datum_numbering(self):
        trace = run_source(FIG_HASH, entry="hashPassword")[0]
        doc = trace.to_doc()
        assert doc["parameters"] == [0, 1]
        assert [d["type"] for d in doc["data"].values()] == \
            ["User", "HashFunction", "String", "String", "String", "String"]


class TestBranching:
    def test_symbolic_if_forks(self):
        traces = run_source("""
            class T {
                static void main(boolean s) {
                    if (s) { A.a(); } else { A.b(); }
                }
            }""")
        assert len(traces) == 2
        first = [t.events[0].to_doc() for t in traces]
        assert [e["truth"] for e in first] == [True, False]
        assert all(e["event"] == "assertion" for e in first)

    def test_concrete_condition_no_fork(self):
        traces = run_source("""
            class T {
                static void main(int x) {
                    if (true) { A.a(); } else { A.b(); }
                }
            }""")
        assert len(traces) == 1
        assert events_of(traces[0], "assertion") == []
        assert events_of(traces[0], "api_call")[0]["signature"] == "A.a/0"

    def test_nested_ifs_four_leaves(self):
        traces = run_source("""
            class T {
                static void main(boolean a, boolean b) {
                    if (a) { A.p(); } else { A.q(); }
                    if (b) { A.r(); } else { A.s(); }
                }
            }""")
        assert len(traces) == 4

    def test_conditional_expression_forks(self):
        traces = run_source("""
            class T { static int main(int x) { return x > 0 ? 1 : 2; } }""")
        assert len(traces) == 2

    def test_switch_forks_per_case_plus_default(self):
        traces = run_source("""
            class T {
                static void main(int x) {
                    switch (x) { case 1: A.a(); break; case 2: A.b(); break;
                                 default: A.c(); break; }
                }
            }""")
        assert len(traces) == 3
        eq_counts = [len([e for e in events_of(t, "primary_operation")
                          if e["operator"] == "=="]) for t in traces]
        assert eq_counts == [1, 2, 2]


class TestLoops:
    WHILE = """
        class T { static void main(boolean s, int k) { while (s) { k = k + 1; } } }
    """

    def test_symbolic_while_bounded(self):
        traces = run_source(self.WHILE)
        adds = sorted(len(events_of(t, "primary_operation")) for t in traces)
        assert adds == [0, 1, 2, 3]

    def test_loop_bound_configurable(self):
        traces = run_source(self.WHILE, limits=ExecutorLimits(loop_bound=5))
        assert len(traces) == 6

    def test_concrete_loop_capped(self):
        traces = run_source("""
            class T {
                static int main(int seed) {
                    int acc = seed;
                    for (int i = 0; i < 100; i++) { acc = acc + 1; }
                    return acc;
                }
            }""")
        assert len(traces) == 1
        ops = [e for e in events_of(traces[0], "primary_operation")
               if e["operator"] == "+"]
        assert len(ops) == 6  # 3 accumulations + 3 increments

    def test_do_while_runs_at_least_once(self):
        traces = run_source("""
            class T { static void main(boolean go) { do { A.tick(); } while (go); } }
        """)
        ticks = sorted(len(events_of(t, "api_call")) for t in traces)
        assert ticks == [1, 2, 3]

    def test_enhanced_for_matches_index_loop(self):
        foreach = """
            class T {
                static int main(int[] data) {
                    int s = 0;
                    for (int v : data) { s = s + v; }
                    return s;
                }
            }"""
        indexed = """
            class T {
                static int main(int[] data) {
                    int s = 0;
                    for (int i = 0; i < data.length; i = i + 1) {
                        int v = data[i];
                        s = s + v;
                    }
                    return s;
                }
            }"""
        assert behaviour_shapes(foreach) == behaviour_shapes(indexed)


class TestRecursion:
    def test_recursion_bound(self):
        traces = run_source("""
            class T {
                static int main(int x) { return fact(x); }
                static int fact(int v) {
                    if (v <= 1) { return 1; }
                    return v * fact(v - 1);
                }
            }""")
        # two activations explored, the third is skipped
        assert len(traces) == 3
        assert all(t.termination == "normal" for t in traces)

    def test_recursion_bound_configurable(self):
        traces = run_source("""
            class T {
                static int main(int x) { return fact(x); }
                static int fact(int v) {
                    if (v <= 1) { return 1; }
                    return v * fact(v - 1);
                }
            }""", limits=ExecutorLimits(recursion_bound=4))
        assert len(traces) == 5


class TestStubbing:
    def test_instance_stub_with_result(self):
        trace = run_source("""
            class T { static String main(Hasher h, String s) { return h.hash(s); } }
        """)[0]
        api = events_of(trace, "api_call")[0]
        assert api["signature"] == "Hasher.hash/1"
        assert api["scope"] == 0
        assert "result" in api

    def test_statement_position_has_no_result(self):
        trace = run_source("""
            class T { static void main(Logger log, int x) { log.print(x); } }
        """)[0]
        api = events_of(trace, "api_call")[0]
        assert "result" not in api

    def test_result_behaves_as_value_in_arithmetic(self):
        trace = run_source("""
            class T { static int main(Api api) { int r = api.get() + 1; return r; } }
        """)[0]
        op = events_of(trace, "primary_operation")[0]
        data = trace.to_doc()["data"]
        assert data[str(op["lhs"])]["kind"] == "value"
        assert "synthetic" in data[str(op["lhs"])]["flags"]

    def test_boundary_constructor_is_stubbed(self):
        trace = run_source("""
            class T { static void main(int x) { Widget w = new Widget(x); w.go(); } }
        """)[0]
        api = events_of(trace, "api_call")
        assert api[0]["signature"] == "Widget.<init>/1"
        assert api[1]["signature"] == "Widget.go/0"

    def test_declared_calls_are_followed(self):
        trace = run_source("""
            class T {
                static int main(int x) { return helper(x); }
                static int helper(int v) { return v * 2; }
            }""")[0]
        assert events_of(trace, "api_call") == []
        assert len(events_of(trace, "primary_operation")) == 1


class TestMembers:
    def test_unset_field_read_memoized(self):
        trace = run_source("""
            class T {
                static int main(Holder h) { return h.value + h.value; }
            }
            class Holder { int value; }
        """)[0]
        reads = events_of(trace, "field_access")
        assert len(reads) == 2
        assert reads[0]["datum"] == reads[1]["datum"]

    def test_write_then_read(self):
        trace = run_source("""
            class T {
                static int main(Holder h) { h.value = 7; return h.value; }
            }
            class Holder { int value; }
        """)[0]
        write, read = events_of(trace, "field_access")
        assert write["direction"] == "write"
        assert read["direction"] == "read"
        assert write["datum"] == read["datum"]

    def test_symbolic_index_read_memoized(self):
        trace = run_source("""
            class T {
                static int main(int[] arr, int i) { return arr[i] + arr[i]; }
            }""")[0]
        reads = events_of(trace, "array_access")
        assert len(reads) == 2
        assert reads[0]["datum"] == reads[1]["datum"]

    def test_explicit_null_dereference_kills_only_that_path(self):
        traces = run_source("""
            class T {
                static int main(Holder h, boolean go) {
                    Holder target = h;
                    if (go) { target = null; }
                    return target.value;
                }
            }
            class Holder { int value; }
        """)
        assert sorted(t.termination for t in traces) == ["limit", "normal"]

    def test_static_fields_flag_data(self):
        trace = run_source("""
            class T {
                static int counter;
                static int main(int x) { T.counter = x * 2; return counter; }
            }""")[0]
        writes = [e for e in events_of(trace, "field_access")
                  if e["direction"] == "write"]
        assert writes[0]["static_type"] == "T"
        data = trace.to_doc()["data"]
        assert "static" in data[str(writes[0]["datum"])]["flags"]


class TestConcreteSemantics:
    def test_arithmetic_folds(self):
        trace = run_source("""
            class T { static void main(int x) { Sink.put(2 + 3); } }
        """)[0]
        op = events_of(trace, "primary_operation")[0]
        data = trace.to_doc()["data"]
        assert data[str(op["result"])]["literal"] == 5
        assert data[str(op["result"])]["mode"] == "concrete"

    @pytest.mark.parametrize("expr,expected", [
        ("7 / 2", 3), ("-7 / 2", -3), ("7 % -2", 1), ("-7 % 2", -1),
        ("6 * 7", 42), ("1 - 9", -8),
    ])
    def test_java_integer_semantics(self, expr, expected):
        trace = run_source(f"""
            class T {{ static void main(int x) {{ Sink.put({expr}); }} }}
        """)[0]
        ops = events_of(trace, "primary_operation")
        data = trace.to_doc()["data"]
        assert data[str(ops[-1]["result"])]["literal"] == expected

    def test_division_by_zero_diagnoses_path(self):
        traces = run_source("""
            class T { static void main(int x) { Sink.put(1 / 0); } }
        """)
        assert traces[0].termination == "limit"

    def test_concat_and_stringify(self):
        trace = run_source("""
            class T { static void main(int x) { Sink.put("n=" + 5); } }
        """)[0]
        stringify = events_of(trace, "stringify")
        concat = events_of(trace, "string_concat")
        assert len(stringify) == 1 and len(concat) == 1
        data = trace.to_doc()["data"]
        assert data[str(concat[0]["result"])]["string"] == "n=5"

    def test_string_concat_left_associative_chain(self):
        trace = run_source("""
            class T { static void main(String a, String b, String c) {
                Sink.put(a + b + c); } }
        """)[0]
        concats = events_of(trace, "string_concat")
        assert len(concats) == 2
        assert concats[1]["operands"][0] == concats[0]["result"]

    def test_logical_operators_do_not_fork(self):
        traces = run_source("""
            class T { static void main(boolean a, boolean b) {
                boolean c = a && b; Sink.put(c); } }
        """)
        assert len(traces) == 1
        ops = events_of(traces[0], "primary_operation")
        assert [o["operator"] for o in ops] == ["&&"]

    def test_unary_operators(self):
        trace = run_source("""
            class T { static void main(boolean b, int v) {
                Sink.put(!b); Sink.put(-v); } }
        """)[0]
        ops = events_of(trace, "primary_operation")
        assert [o["operator"] for o in ops] == ["!", "neg"]
        assert "rhs" not in ops[0]


class TestForkContext:
    def _context(self):
        prog = resolve_program([SourceUnit("t.src", """
            class T { static void main(Holder h, boolean s) { h.value = 1; } }
            class Holder { int value; }
        """)])
        executor = Executor(prog, ExecutorLimits())
        ctx = executor.build_root_context(prog.entry_points[0],
                                          prog.entry_method(prog.entry_points[0]))
        while ctx.frames and not ctx.events:
            executor.step(ctx)
        return ctx

    def test_children_fully_independent(self):
        ctx = self._context()
        left, right = fork_context(ctx)
        holder_left = left.frames[0].locals["h"]
        holder_right = right.frames[0].locals["h"]
        assert holder_left is not holder_right
        holder_left.fields["value"] = None
        assert holder_right.fields["value"] is not None

    def test_fork_preserves_event_datum_aliasing(self):
        ctx = self._context()
        _, clone = fork_context(ctx)
        evt = clone.events[0]
        assert evt.scope is clone.frames[0].locals["h"]


class TestDeterminismAndBudget:
    PROGRAM = """
        class T {
            static int main(int x, int[] data) {
                int acc = x;
                for (int i = 0; i < data.length; i++) { acc = acc + data[i]; }
                if (acc > 10) { acc = helper(acc); } else { acc = acc - 1; }
                return acc;
            }
            static int helper(int v) { return v % 3; }
        }
    """

    def test_identical_runs_identical_traces(self):
        a = [t.to_doc() for t in run_source(self.PROGRAM)]
        b = [t.to_doc() for t in run_source(self.PROGRAM)]
        assert a == b

    def test_budget_records_termination(self):
        traces = run_source(self.PROGRAM, limits=ExecutorLimits(context_budget=3))
        assert len(traces) == 3
        assert traces[-1].termination == "budget"
        assert any(t.termination == "budget" for t in traces)

    def test_trace_document_round_trip(self):
        traces = run_source(self.PROGRAM)
        for t in traces:
            doc = t.to_doc()
            again = trace_from_doc(doc)
            assert again.to_doc() == doc

    def test_malformed_document_rejected(self):
        doc = run_source(self.PROGRAM)[0].to_doc()
        doc["events"][0]["datum"] = 9999
        with pytest.raises(MalformedTrace):
            trace_from_doc(doc)


class TestRenamingNeutrality:
    BASE = """
        class Account {
            int balance;
            int fee() { return this.balance % 97; }
        }
        class T {
            static int main(Account acct, int amount) {
                acct.balance = amount * 3;
                return acct.fee() + 1;
            }
        }
    """
    RENAMED = """
        class Wallet {
            int credits;
            int charge() { return this.credits % 97; }
        }
        class T {
            static int main(Wallet w, int units) {
                w.credits = units * 3;
                return w.charge() + 1;
            }
        }
    """

    def test_traces_identical_up_to_source_defined_names(self):
        assert behaviour_shapes(self.BASE) == behaviour_shapes(self.RENAMED)

    def test_source_defined_names_do_differ(self):
        base = behaviour_shapes(self.BASE, strip_source_defined=False)
        renamed = behaviour_shapes(self.RENAMED, strip_source_defined=False)
        assert base != renamed
