"""Shared test utilities: fixture programs and trace canonicalization."""

from __future__ import annotations

from bsim.executor import ExecutorLimits, execute_program
from bsim.lang import SourceUnit, resolve_program
from bsim.pidg import build_pidg_set

FIG_HASH = """
class Main {
    static String hashPassword(User user, HashFunction hasher) {
        String password = user.getPassword();
        String salt = user.getSalt();
        String input = password + salt;
        String hash = hasher.hash(input);
        return hash;
    }
}

class User {
    String password;
    String salt;

    String getPassword() { return this.password; }
    String getSalt() { return this.salt; }
}
"""


def run_source(src: str, entry: str = "main", limits: ExecutorLimits | None = None,
               path: str = "unit.src"):
    program = resolve_program([SourceUnit(path, src)], entry_name=entry)
    return execute_program(program, limits or ExecutorLimits())


def graphs_of(src: str, entry: str = "main", limits: ExecutorLimits | None = None):
    return build_pidg_set(run_source(src, entry, limits))


def canonical_shape(trace, strip_source_defined: bool = True) -> tuple:
    """Event stream with datum ids renumbered by first appearance and
    source-defined identifier attributes blanked, for behavioural equality."""
    doc = trace.to_doc()
    data = doc["data"]
    mapping: dict[int, int] = {}

    def ref(i):
        if i not in mapping:
            mapping[i] = len(mapping)
        d = data[str(i)]
        ty = d.get("type")
        if strip_source_defined and d.get("source_defined"):
            ty = "<sd>"
        return (mapping[i], d["kind"], d["mode"], ty, tuple(d.get("flags", [])),
                d.get("literal"), d.get("string"))

    out = [tuple(ref(p) for p in doc["parameters"])]
    for e in doc["events"]:
        kind = e["event"]
        if kind == "api_call":
            out.append(("api", e["signature"],
                        ref(e["scope"]) if "scope" in e else None,
                        tuple(ref(p) for p in e["params"]),
                        ref(e["result"]) if "result" in e else None))
        elif kind == "field_access":
            scope_sd = "scope" in e and data[str(e["scope"])].get("source_defined")
            static_type = e.get("static_type")
            field = e["field"]
            if strip_source_defined and scope_sd:
                field = "<field>"
            if strip_source_defined and static_type is not None:
                static_type, field = "<sd>", "<field>"
            out.append(("field", e["direction"], static_type, field,
                        ref(e["scope"]) if "scope" in e else None, ref(e["datum"])))
        elif kind == "array_access":
            out.append(("array", e["direction"], ref(e["scope"]),
                        ref(e["index"]), ref(e["datum"])))
        elif kind == "primary_operation":
            out.append(("op", e["operator"], ref(e["lhs"]),
                        ref(e["rhs"]) if "rhs" in e else None, ref(e["result"])))
        elif kind == "string_concat":
            out.append(("concat", tuple(ref(o) for o in e["operands"]),
                        ref(e["result"])))
        elif kind == "stringify":
            out.append(("stringify", ref(e["operand"]), ref(e["result"])))
        elif kind == "assertion":
            out.append(("assert", ref(e["condition"]), e["truth"]))
        else:
            raise AssertionError(kind)
    return tuple(out)


def behaviour_shapes(src_or_traces, strip_source_defined: bool = True):
    """Sorted multiset of canonical trace shapes for a program."""
    traces = run_source(src_or_traces) if isinstance(src_or_traces, str) \
        else src_or_traces
    return sorted(canonical_shape(t, strip_source_defined) for t in traces)
