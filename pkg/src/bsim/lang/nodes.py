"""AST node definitions for the analyzed mini-language.

Every node carries a source position; positions are excluded from equality so
that two parses of differently formatted but structurally identical sources
compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Pos:
    line: int
    column: int


NO_POS = Pos(0, 0)


@dataclass
class Node:
    pos: Pos = field(default=NO_POS, compare=False, kw_only=True, repr=False)


# ---------------------------------------------------------------- types

@dataclass
class TypeRef(Node):
    """A declared type: primitive, `String`, a class name, or a 1-D array of those."""

    name: str = ""
    dims: int = 0

    def is_array(self) -> bool:
        return self.dims > 0

    def text(self) -> str:
        return self.name + "[]" * self.dims


# ---------------------------------------------------------------- expressions

@dataclass
class Expr(Node):
    pass


@dataclass
class Literal(Expr):
    kind: str = "int"  # int | long | float | double | char | string | boolean | null
    value: object = None


@dataclass
class Name(Expr):
    id: str = ""


@dataclass
class This(Expr):
    pass


@dataclass
class FieldAccess(Expr):
    target: Expr = None
    name: str = ""


@dataclass
class IndexAccess(Expr):
    target: Expr = None
    index: Expr = None


@dataclass
class Call(Expr):
    """`target.name(args)`; target is None for an unqualified call."""

    target: Expr | None = None
    name: str = ""
    args: list[Expr] = field(default_factory=list)


@dataclass
class New(Expr):
    type: TypeRef = None
    args: list[Expr] = field(default_factory=list)


@dataclass
class NewArray(Expr):
    """`new T[length]` or `new T[] { ... }` (exactly one of length/init set)."""

    type: TypeRef = None
    length: Expr | None = None
    init: list[Expr] | None = None


@dataclass
class ArrayInit(Expr):
    """A brace initializer in declarator position: `int[] a = {1, 2};`."""

    values: list[Expr] = field(default_factory=list)


@dataclass
class Unary(Expr):
    op: str = ""  # "!" | "-" | "+"
    operand: Expr = None


@dataclass
class PreIncDec(Expr):
    op: str = "++"
    target: Expr = None


@dataclass
class PostIncDec(Expr):
    op: str = "++"
    target: Expr = None


@dataclass
class Binary(Expr):
    op: str = ""
    lhs: Expr = None
    rhs: Expr = None


@dataclass
class Conditional(Expr):
    cond: Expr = None
    then: Expr = None
    other: Expr = None


@dataclass
class Assign(Expr):
    target: Expr = None
    op: str = "="  # "=" | "+=" | "-=" | "*=" | "/=" | "%="
    value: Expr = None


@dataclass
class Paren(Expr):
    inner: Expr = None


# ---------------------------------------------------------------- statements

@dataclass
class Stmt(Node):
    pass


@dataclass
class Block(Stmt):
    statements: list[Stmt] = field(default_factory=list)


@dataclass
class Declarator(Node):
    name: str = ""
    init: Expr | None = None


@dataclass
class LocalDecl(Stmt):
    mods: list[str] = field(default_factory=list)
    type: TypeRef = None
    declarators: list[Declarator] = field(default_factory=list)


@dataclass
class ExprStmt(Stmt):
    expr: Expr = None


@dataclass
class If(Stmt):
    cond: Expr = None
    then: Stmt = None
    orelse: Stmt | None = None


@dataclass
class While(Stmt):
    cond: Expr = None
    body: Stmt = None


@dataclass
class DoWhile(Stmt):
    body: Stmt = None
    cond: Expr = None


@dataclass
class For(Stmt):
    init: Stmt | None = None  # LocalDecl or ExprStmt
    cond: Expr | None = None
    update: Expr | None = None
    body: Stmt = None


@dataclass
class ForEach(Stmt):
    var_type: TypeRef = None
    var_name: str = ""
    iterable: Expr = None
    body: Stmt = None


@dataclass
class SwitchGroup(Node):
    """One run of labels and the statements that follow them.

    A label is a Literal, or None for `default`.
    """

    labels: list[Literal | None] = field(default_factory=list)
    statements: list[Stmt] = field(default_factory=list)


@dataclass
class Switch(Stmt):
    selector: Expr = None
    groups: list[SwitchGroup] = field(default_factory=list)


@dataclass
class Return(Stmt):
    value: Expr | None = None


@dataclass
class Break(Stmt):
    pass


@dataclass
class Empty(Stmt):
    pass


# ---------------------------------------------------------------- declarations

@dataclass
class Param(Node):
    type: TypeRef = None
    name: str = ""


@dataclass
class FieldDecl(Node):
    mods: list[str] = field(default_factory=list)
    type: TypeRef = None
    declarators: list[Declarator] = field(default_factory=list)

    def is_static(self) -> bool:
        return "static" in self.mods

    def is_final(self) -> bool:
        return "final" in self.mods


@dataclass
class MethodDecl(Node):
    mods: list[str] = field(default_factory=list)
    return_type: TypeRef | None = None  # None = void
    name: str = ""
    params: list[Param] = field(default_factory=list)
    body: Block = None

    def is_static(self) -> bool:
        return "static" in self.mods

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass
class CtorDecl(Node):
    mods: list[str] = field(default_factory=list)
    name: str = ""
    params: list[Param] = field(default_factory=list)
    body: Block = None

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass
class ClassDecl(Node):
    mods: list[str] = field(default_factory=list)
    name: str = ""
    superclass: str | None = None
    members: list[FieldDecl | MethodDecl | CtorDecl] = field(default_factory=list)


@dataclass
class Ast(Node):
    """A parsed source unit: one or more class declarations."""

    classes: list[ClassDecl] = field(default_factory=list)


@dataclass(frozen=True)
class SourceUnit:
    path: str
    text: str


PRIMITIVES = {"byte", "short", "int", "long", "float", "double", "char", "boolean"}
NUMERIC = {"byte", "short", "int", "long", "float", "double", "char"}
