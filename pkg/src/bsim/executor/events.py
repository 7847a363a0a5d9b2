"""Trace events and the execution trace document.

Seven event kinds are recorded while interpreting a path: API method calls,
field assignment/retrieval, array index assignment/retrieval, primary
operations, string concatenation, stringification, and asserted constraints
on symbolic branch conditions. One ExecutionTrace is produced per explored
path; its serialized form references data by stable id with a side table of
kind/mode/type/flags.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import MalformedTrace
from .values import Datum

READ = "read"
WRITE = "write"


@dataclass
class ApiCall:
    signature: str
    scope: Datum | None
    params: list[Datum]
    result: Datum | None

    def data(self):
        out = list(self.params)
        if self.scope is not None:
            out.append(self.scope)
        if self.result is not None:
            out.append(self.result)
        return out

    def to_doc(self):
        doc = {"event": "api_call", "signature": self.signature,
               "params": [p.id for p in self.params]}
        if self.scope is not None:
            doc["scope"] = self.scope.id
        if self.result is not None:
            doc["result"] = self.result.id
        return doc


@dataclass
class FieldAccess:
    direction: str  # read | write
    static_type: str | None
    scope: Datum | None
    field: str
    datum: Datum

    def data(self):
        return [self.datum] if self.scope is None else [self.scope, self.datum]

    def to_doc(self):
        doc = {"event": "field_access", "direction": self.direction,
               "field": self.field, "datum": self.datum.id}
        if self.static_type is not None:
            doc["static_type"] = self.static_type
        if self.scope is not None:
            doc["scope"] = self.scope.id
        return doc


@dataclass
class ArrayAccess:
    direction: str
    scope: Datum
    index: Datum
    datum: Datum

    def data(self):
        return [self.scope, self.index, self.datum]

    def to_doc(self):
        return {"event": "array_access", "direction": self.direction,
                "scope": self.scope.id, "index": self.index.id, "datum": self.datum.id}


@dataclass
class PrimaryOperation:
    operator: str
    lhs: Datum
    rhs: Datum | None
    result: Datum

    def data(self):
        out = [self.lhs]
        if self.rhs is not None:
            out.append(self.rhs)
        out.append(self.result)
        return out

    def to_doc(self):
        doc = {"event": "primary_operation", "operator": self.operator,
               "lhs": self.lhs.id, "result": self.result.id}
        if self.rhs is not None:
            doc["rhs"] = self.rhs.id
        return doc


@dataclass
class StringConcat:
    operands: list[Datum]
    result: Datum

    def data(self):
        return [*self.operands, self.result]

    def to_doc(self):
        return {"event": "string_concat", "operands": [o.id for o in self.operands],
                "result": self.result.id}


@dataclass
class Stringify:
    operand: Datum
    result: Datum

    def data(self):
        return [self.operand, self.result]

    def to_doc(self):
        return {"event": "stringify", "operand": self.operand.id,
                "result": self.result.id}


@dataclass
class Assertion:
    condition: Datum
    truth: bool

    def data(self):
        return [self.condition]

    def to_doc(self):
        return {"event": "assertion", "condition": self.condition.id,
                "truth": self.truth}


TraceEvent = (ApiCall, FieldAccess, ArrayAccess, PrimaryOperation,
              StringConcat, Stringify, Assertion)

TERMINATION_NORMAL = "normal"
TERMINATION_BUDGET = "budget"
TERMINATION_LIMIT = "limit"


@dataclass
class ExecutionTrace:
    entry_signature: str
    parameters: list[Datum]
    events: list
    termination: str = TERMINATION_NORMAL
    diagnostic: str | None = None
    declared_types: frozenset[str] = field(default_factory=frozenset)

    def referenced_data(self) -> dict[int, Datum]:
        table: dict[int, Datum] = {}
        for p in self.parameters:
            table[p.id] = p
        for event in self.events:
            for d in event.data():
                table[d.id] = d
        return table

    def to_doc(self) -> dict:
        data = self.referenced_data()
        doc = {
            "schema": "trace/1",
            "entry": self.entry_signature,
            "parameters": [p.id for p in self.parameters],
            "events": [e.to_doc() for e in self.events],
            "termination": self.termination,
            "data": {str(i): data[i].describe() for i in sorted(data)},
        }
        if self.diagnostic:
            doc["diagnostic"] = self.diagnostic
        return doc


def trace_from_doc(doc: dict) -> ExecutionTrace:
    """Rebuild a trace from its serialized form (data become shallow stubs)."""
    try:
        table: dict[int, Datum] = {}
        for key, dd in doc["data"].items():
            datum = Datum(id=int(key), kind=dd["kind"], mode=dd["mode"],
                          type=dd.get("type"),
                          literal=dd.get("literal"), text=dd.get("string"),
                          source_defined=dd.get("source_defined", False))
            datum.flags = set(dd.get("flags", []))
            table[int(key)] = datum

        def ref(i) -> Datum:
            if int(i) not in table:
                raise MalformedTrace(f"event references unknown datum id {i}")
            return table[int(i)]

        events = []
        for ed in doc["events"]:
            kind = ed["event"]
            if kind == "api_call":
                events.append(ApiCall(ed["signature"],
                                      ref(ed["scope"]) if "scope" in ed else None,
                                      [ref(p) for p in ed["params"]],
                                      ref(ed["result"]) if "result" in ed else None))
            elif kind == "field_access":
                events.append(FieldAccess(ed["direction"], ed.get("static_type"),
                                          ref(ed["scope"]) if "scope" in ed else None,
                                          ed["field"], ref(ed["datum"])))
            elif kind == "array_access":
                events.append(ArrayAccess(ed["direction"], ref(ed["scope"]),
                                          ref(ed["index"]), ref(ed["datum"])))
            elif kind == "primary_operation":
                events.append(PrimaryOperation(ed["operator"], ref(ed["lhs"]),
                                               ref(ed["rhs"]) if "rhs" in ed else None,
                                               ref(ed["result"])))
            elif kind == "string_concat":
                events.append(StringConcat([ref(o) for o in ed["operands"]],
                                           ref(ed["result"])))
            elif kind == "stringify":
                events.append(Stringify(ref(ed["operand"]), ref(ed["result"])))
            elif kind == "assertion":
                events.append(Assertion(ref(ed["condition"]), ed["truth"]))
            else:
                raise MalformedTrace(f"unknown event kind {kind!r}")
        return ExecutionTrace(entry_signature=doc["entry"],
                              parameters=[ref(p) for p in doc["parameters"]],
                              events=events,
                              termination=doc.get("termination", TERMINATION_NORMAL),
                              diagnostic=doc.get("diagnostic"))
    except MalformedTrace:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedTrace(f"malformed trace document: {exc}") from exc
