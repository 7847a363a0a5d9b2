"""Runtime data model: concrete/symbolic values, objects and arrays.

A Datum is one runtime value. Ids are assigned in creation order within an
execution context, which makes trace output deterministic and lets forked
contexts share the ids of everything created before the fork. Arrays are
always symbolic: any interaction may involve a symbolic index. Results of
environment interactions start out type-agnostic ("synthetic" kind) and are
refined by their first typed use (arithmetic, member access, a declared-type
store, and so on).
"""

from __future__ import annotations

from ..lang import nodes as n

FLAG_STATIC = "static"
FLAG_SYMBOLIC = "symbolic"
FLAG_CONCRETE = "concrete"
FLAG_SYNTHETIC = "synthetic"
FLAG_ENTRY_PARAM = "entry_point_parameter"

KIND_VALUE = "value"
KIND_OBJECT = "object"
KIND_ARRAY = "array"
KIND_NULL = "null"
KIND_SYNTHETIC = "synthetic"


class Datum:
    __slots__ = ("id", "kind", "mode", "type", "literal", "text", "fields",
                 "slots", "length", "flags", "source_defined")

    def __init__(self, id: int, kind: str, mode: str, type: str | None = None,
                 literal: object = None, text: str | None = None,
                 length: int | None = None, source_defined: bool = False,
                 flags: set[str] | None = None):
        self.id = id
        self.kind = kind
        self.mode = mode
        self.type = type  # primitive name / class name / array component name
        self.literal = literal
        self.text = text
        self.fields: dict[str, Datum] = {}
        self.slots: dict[tuple, Datum] = {}
        self.length = length
        self.flags = set(flags) if flags else set()
        self.flags.add(FLAG_SYMBOLIC if mode == "symbolic" else FLAG_CONCRETE)
        self.source_defined = source_defined

    def __repr__(self):
        tag = self.type or "?"
        return f"<{self.kind} {tag}@{self.id} {self.mode}>"

    @property
    def concrete(self) -> bool:
        return self.mode == "concrete"

    @property
    def symbolic(self) -> bool:
        return self.mode == "symbolic"

    def is_string(self) -> bool:
        return self.kind == KIND_OBJECT and self.type == "String"

    def is_null(self) -> bool:
        return self.kind == KIND_NULL

    def mark_static(self):
        self.flags.add(FLAG_STATIC)

    def serial_kind(self) -> str:
        # unrefined synthetics behave as symbolic objects when never used
        return KIND_OBJECT if self.kind == KIND_SYNTHETIC else self.kind

    def describe(self) -> dict:
        doc: dict = {
            "id": self.id,
            "kind": self.serial_kind(),
            "mode": self.mode,
            "type": self.type,
            "flags": sorted(self.flags),
            "source_defined": self.source_defined,
        }
        if self.kind == KIND_VALUE and self.concrete:
            doc["literal"] = _portable_literal(self.type, self.literal)
        if self.is_string() and self.concrete:
            doc["string"] = self.text
        if self.kind == KIND_NULL:
            doc["kind"] = KIND_NULL
        return doc


def _portable_literal(type_name: str | None, value: object) -> object:
    # JSON has no char type; keep chars as 1-char strings, booleans as booleans.
    if type_name == "char":
        return str(value)
    return value


def java_str(datum: Datum) -> str:
    """The text a concrete datum stringifies to (Java formatting rules)."""
    if datum.is_null():
        return "null"
    if datum.is_string():
        return datum.text or ""
    if datum.type == "boolean":
        return "true" if datum.literal else "false"
    if datum.type in ("float", "double"):
        return repr(float(datum.literal))
    if datum.type == "char":
        return str(datum.literal)
    return str(datum.literal)


class DatumFactory:
    """Mints data with sequential ids; owned by one execution context."""

    def __init__(self, declared_types: frozenset[str], next_id: int = 0):
        self.declared_types = declared_types
        self.next_id = next_id

    def _new(self, **kw) -> Datum:
        d = Datum(id=self.next_id, **kw)
        self.next_id += 1
        return d

    def source_defined(self, type_name: str | None) -> bool:
        return type_name is not None and type_name in self.declared_types

    def concrete_value(self, type_name: str, literal: object) -> Datum:
        return self._new(kind=KIND_VALUE, mode="concrete", type=type_name, literal=literal)

    def concrete_string(self, text: str) -> Datum:
        return self._new(kind=KIND_OBJECT, mode="concrete", type="String", text=text)

    def null(self) -> Datum:
        return self._new(kind=KIND_NULL, mode="concrete", type=None)

    def symbolic_value(self, type_name: str | None, flags: set[str] | None = None) -> Datum:
        return self._new(kind=KIND_VALUE, mode="symbolic", type=type_name, flags=flags)

    def symbolic_object(self, type_name: str | None, flags: set[str] | None = None) -> Datum:
        return self._new(kind=KIND_OBJECT, mode="symbolic", type=type_name,
                         source_defined=self.source_defined(type_name), flags=flags)

    def symbolic_array(self, component: str | None, length: int | None = None,
                       flags: set[str] | None = None) -> Datum:
        return self._new(kind=KIND_ARRAY, mode="symbolic", type=component,
                         length=length,
                         source_defined=self.source_defined(component), flags=flags)

    def concrete_object(self, type_name: str) -> Datum:
        return self._new(kind=KIND_OBJECT, mode="concrete", type=type_name,
                         source_defined=self.source_defined(type_name))

    def synthetic(self, type_name: str | None = None) -> Datum:
        """Type-agnostic result of an environment interaction."""
        d = self._new(kind=KIND_SYNTHETIC, mode="symbolic", type=type_name,
                      source_defined=self.source_defined(type_name),
                      flags={FLAG_SYNTHETIC})
        return d

    def for_declared_type(self, ty: n.TypeRef, flags: set[str] | None = None) -> Datum:
        """Fresh symbolic datum shaped by a declared type."""
        if ty.is_array():
            return self.symbolic_array(ty.name, flags=flags)
        if ty.name in n.PRIMITIVES:
            return self.symbolic_value(ty.name, flags=flags)
        return self.symbolic_object(ty.name, flags=flags)

    def refine(self, datum: Datum, ty: n.TypeRef | None):
        """Give an unrefined synthetic the shape of a declared type."""
        if ty is None or datum.kind != KIND_SYNTHETIC:
            return
        if ty.is_array():
            datum.kind = KIND_ARRAY
            datum.type = ty.name
        elif ty.name in n.PRIMITIVES:
            datum.kind = KIND_VALUE
            datum.type = ty.name
        else:
            datum.kind = KIND_OBJECT
            datum.type = ty.name
        datum.source_defined = self.source_defined(datum.type)
