"""Name resolution: turn parsed units into a ResolvedProgram.

Resolution establishes:
  * the class table (duplicate names and broken inheritance are errors),
  * the API boundary: every type name referenced but not declared in any unit
    (calls into the boundary get stubbed by the executor),
  * the entry points: all declared static methods named `main` (or an
    explicitly requested method name),
  * that every bare identifier in a method body binds to something (local,
    field, static field, or a type for qualified access) and that calls on
    statically-known declared types resolve to a declaration.

Block-scoped local declarations, `this` in static contexts and duplicate
members are validated here so the executor can assume well-formed input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ResolveError
from . import nodes as n
from .parser import parse_unit

DEFAULT_ENTRY_NAME = "main"


@dataclass
class FieldInfo:
    name: str
    type: n.TypeRef
    static: bool
    final: bool
    init: n.Expr | None
    declaring_class: str


@dataclass
class ClassInfo:
    decl: n.ClassDecl
    unit_index: int
    name: str
    superclass: str | None
    fields: dict[str, FieldInfo] = field(default_factory=dict)
    field_order: list[str] = field(default_factory=list)
    methods: dict[tuple[str, int], n.MethodDecl] = field(default_factory=dict)
    ctors: dict[int, n.CtorDecl] = field(default_factory=dict)


@dataclass(frozen=True)
class EntryPoint:
    class_name: str
    method_name: str
    arity: int

    @property
    def signature(self) -> str:
        return f"{self.class_name}.{self.method_name}/{self.arity}"


@dataclass
class ResolvedProgram:
    units: list[n.Ast]
    unit_paths: list[str]
    classes: dict[str, ClassInfo]
    class_order: list[str]
    entry_points: list[EntryPoint]
    api_boundary: set[str]
    warnings: list[str]

    # ----------------------------------------------------- lookup helpers

    def is_declared(self, type_name: str) -> bool:
        return type_name in self.classes

    def superchain(self, class_name: str) -> list[ClassInfo]:
        """The class and its superclasses, subclass first."""
        chain = []
        cur = class_name
        while cur is not None:
            info = self.classes[cur]
            chain.append(info)
            cur = info.superclass
        return chain

    def lookup_method(self, class_name: str, name: str, arity: int) -> tuple[ClassInfo, n.MethodDecl] | None:
        if class_name not in self.classes:
            return None
        for info in self.superchain(class_name):
            decl = info.methods.get((name, arity))
            if decl is not None:
                return info, decl
        return None

    def lookup_field(self, class_name: str, name: str) -> FieldInfo | None:
        if class_name not in self.classes:
            return None
        for info in self.superchain(class_name):
            if name in info.fields:
                return info.fields[name]
        return None

    def entry_method(self, entry: EntryPoint) -> n.MethodDecl:
        return self.classes[entry.class_name].methods[(entry.method_name, entry.arity)]


def resolve_program(units: list[n.SourceUnit], entry_name: str = DEFAULT_ENTRY_NAME) -> ResolvedProgram:
    """Resolve parsed units into a program; raises ParseError / ResolveError."""
    asts = [parse_unit(u) for u in units]
    paths = [u.path for u in units]
    return resolve_asts(asts, paths, entry_name)


def resolve_asts(asts: list[n.Ast], paths: list[str] | None = None,
                 entry_name: str = DEFAULT_ENTRY_NAME) -> ResolvedProgram:
    paths = paths if paths is not None else [f"<unit{i}>" for i in range(len(asts))]
    classes: dict[str, ClassInfo] = {}
    class_order: list[str] = []

    for ui, ast in enumerate(asts):
        for cls in ast.classes:
            if cls.name in classes:
                raise ResolveError(f"duplicate class name {cls.name!r}")
            info = ClassInfo(decl=cls, unit_index=ui, name=cls.name, superclass=cls.superclass)
            for member in cls.members:
                if isinstance(member, n.FieldDecl):
                    for d in member.declarators:
                        if d.name in info.fields:
                            raise ResolveError(
                                f"duplicate field {d.name!r} in class {cls.name}")
                        info.fields[d.name] = FieldInfo(
                            name=d.name, type=member.type, static=member.is_static(),
                            final=member.is_final(), init=d.init, declaring_class=cls.name)
                        info.field_order.append(d.name)
                elif isinstance(member, n.MethodDecl):
                    key = (member.name, member.arity)
                    if key in info.methods:
                        raise ResolveError(
                            f"duplicate method {member.name}/{member.arity} in class {cls.name}")
                    info.methods[key] = member
                elif isinstance(member, n.CtorDecl):
                    if member.name != cls.name:
                        raise ResolveError(
                            f"constructor {member.name!r} does not match class {cls.name}")
                    if member.arity in info.ctors:
                        raise ResolveError(
                            f"duplicate constructor arity {member.arity} in class {cls.name}")
                    info.ctors[member.arity] = member
            classes[cls.name] = info
            class_order.append(cls.name)

    for info in classes.values():
        if info.superclass is not None and info.superclass not in classes:
            raise ResolveError(
                f"class {info.name} extends unresolvable type {info.superclass!r}")
    for info in classes.values():
        seen = {info.name}
        cur = info.superclass
        while cur is not None:
            if cur in seen:
                raise ResolveError(f"cyclic inheritance involving class {info.name}")
            seen.add(cur)
            cur = classes[cur].superclass
    for info in classes.values():
        cur = info.superclass
        while cur is not None:
            shared = set(info.fields) & set(classes[cur].fields)
            if shared:
                raise ResolveError(
                    f"class {info.name} hides field {sorted(shared)[0]!r} "
                    f"of {cur} (field hiding is not supported)")
            cur = classes[cur].superclass

    program = ResolvedProgram(units=asts, unit_paths=paths, classes=classes,
                              class_order=class_order, entry_points=[],
                              api_boundary=set(), warnings=[])

    checker = _BodyChecker(program)
    for cname in class_order:
        checker.check_class(classes[cname])
    program.api_boundary = {t for t in checker.referenced_types
                            if t not in classes and t not in n.PRIMITIVES}

    for cname in class_order:
        for (mname, arity), decl in classes[cname].methods.items():
            if mname == entry_name and decl.is_static():
                program.entry_points.append(EntryPoint(cname, mname, arity))
    if not program.entry_points:
        program.warnings.append(f"no static {entry_name!r} method declared; no entry points")
    return program


class _Scopes:
    """Method-wide local scopes; Java-style, no local-over-local shadowing."""

    def __init__(self):
        self.frames: list[dict[str, n.TypeRef]] = [{}]

    def push(self):
        self.frames.append({})

    def pop(self):
        self.frames.pop()

    def declare(self, name: str, ty: n.TypeRef, where: n.Pos):
        for frame in self.frames:
            if name in frame:
                raise ResolveError(
                    f"duplicate local variable {name!r} at {where.line}:{where.column}")
        self.frames[-1][name] = ty

    def lookup(self, name: str) -> n.TypeRef | None:
        for frame in reversed(self.frames):
            if name in frame:
                return frame[name]
        return None


class _BodyChecker:
    def __init__(self, program: ResolvedProgram):
        self.program = program
        self.referenced_types: set[str] = set()
        self.cls: ClassInfo | None = None
        self.static_ctx = False
        self.scopes: _Scopes | None = None

    # ------------------------------------------------------------ plumbing

    def err(self, msg: str, pos: n.Pos) -> ResolveError:
        return ResolveError(f"{msg} at {pos.line}:{pos.column}")

    def note_type(self, ty: n.TypeRef | str | None):
        if ty is None:
            return
        name = ty if isinstance(ty, str) else ty.name
        if name not in n.PRIMITIVES:
            self.referenced_types.add(name)

    def check_class(self, info: ClassInfo):
        self.cls = info
        if info.superclass:
            self.note_type(info.superclass)
        for member in info.decl.members:
            if isinstance(member, n.FieldDecl):
                self.note_type(member.type)
                self.static_ctx = member.is_static()
                self.scopes = _Scopes()
                for d in member.declarators:
                    if d.init is not None:
                        self.check_expr(d.init, expected=member.type)
            elif isinstance(member, n.MethodDecl):
                self.note_type(member.return_type)
                self.check_callable(member, member.is_static())
            elif isinstance(member, n.CtorDecl):
                self.check_callable(member, False)

    def check_callable(self, decl: n.MethodDecl | n.CtorDecl, static: bool):
        self.static_ctx = static
        self.scopes = _Scopes()
        for p in decl.params:
            self.note_type(p.type)
            self.scopes.declare(p.name, p.type, p.pos)
        self.check_block(decl.body)

    # ------------------------------------------------------------ statements

    def check_block(self, block: n.Block):
        self.scopes.push()
        for stmt in block.statements:
            self.check_stmt(stmt)
        self.scopes.pop()

    def check_stmt(self, stmt: n.Stmt):
        if isinstance(stmt, n.Block):
            self.check_block(stmt)
        elif isinstance(stmt, n.LocalDecl):
            self.note_type(stmt.type)
            for d in stmt.declarators:
                if d.init is not None:
                    self.check_expr(d.init, expected=stmt.type)
                self.scopes.declare(d.name, stmt.type, d.pos)
        elif isinstance(stmt, n.ExprStmt):
            self.check_expr(stmt.expr)
        elif isinstance(stmt, n.If):
            self.check_expr(stmt.cond)
            self.check_stmt(stmt.then)
            if stmt.orelse is not None:
                self.check_stmt(stmt.orelse)
        elif isinstance(stmt, n.While):
            self.check_expr(stmt.cond)
            self.check_stmt(stmt.body)
        elif isinstance(stmt, n.DoWhile):
            self.check_stmt(stmt.body)
            self.check_expr(stmt.cond)
        elif isinstance(stmt, n.For):
            self.scopes.push()
            if stmt.init is not None:
                self.check_stmt(stmt.init)
            if stmt.cond is not None:
                self.check_expr(stmt.cond)
            if stmt.update is not None:
                self.check_expr(stmt.update)
            self.check_stmt(stmt.body)
            self.scopes.pop()
        elif isinstance(stmt, n.ForEach):
            self.note_type(stmt.var_type)
            self.check_expr(stmt.iterable)
            self.scopes.push()
            self.scopes.declare(stmt.var_name, stmt.var_type, stmt.pos)
            self.check_stmt(stmt.body)
            self.scopes.pop()
        elif isinstance(stmt, n.Switch):
            self.check_expr(stmt.selector)
            for group in stmt.groups:
                self.scopes.push()
                for s in group.statements:
                    self.check_stmt(s)
                self.scopes.pop()
        elif isinstance(stmt, n.Return):
            if stmt.value is not None:
                self.check_expr(stmt.value)
        elif isinstance(stmt, (n.Break, n.Empty)):
            pass
        else:
            raise TypeError(f"unknown statement {stmt!r}")

    # ------------------------------------------------------------ expressions

    def classify_base(self, name: n.Name) -> str:
        """What a bare identifier refers to: local | field | static_field | class | boundary_type."""
        if self.scopes.lookup(name.id) is not None:
            return "local"
        finfo = self.program.lookup_field(self.cls.name, name.id)
        if finfo is not None:
            return "static_field" if finfo.static else "field"
        if name.id in self.program.classes:
            return "class"
        return "boundary_type"

    def check_expr(self, e: n.Expr, expected: n.TypeRef | None = None):
        if isinstance(e, n.Literal):
            if e.kind == "string":
                self.referenced_types.add("String")
        elif isinstance(e, n.Name):
            kind = self.classify_base(e)
            if kind == "field" and self.static_ctx:
                raise self.err(f"instance field {e.id!r} referenced from a static context", e.pos)
            if kind in ("class", "boundary_type"):
                raise self.err(f"unknown identifier {e.id!r}", e.pos)
        elif isinstance(e, n.This):
            if self.static_ctx:
                raise self.err("'this' used in a static context", e.pos)
        elif isinstance(e, n.FieldAccess):
            self.check_access_base(e.target, e.name, is_call=False, arity=0, pos=e.pos)
        elif isinstance(e, n.IndexAccess):
            self.check_expr(e.target)
            self.check_expr(e.index)
        elif isinstance(e, n.Call):
            if e.target is None:
                found = self.program.lookup_method(self.cls.name, e.name, len(e.args))
                if found is None:
                    raise self.err(f"unknown method {e.name}/{len(e.args)}", e.pos)
                if self.static_ctx and not found[1].is_static():
                    raise self.err(
                        f"instance method {e.name!r} called from a static context", e.pos)
            else:
                self.check_access_base(e.target, e.name, is_call=True,
                                       arity=len(e.args), pos=e.pos)
            for a in e.args:
                self.check_expr(a)
        elif isinstance(e, n.New):
            self.note_type(e.type)
            if e.type.name in self.program.classes:
                info = self.program.classes[e.type.name]
                if info.ctors and len(e.args) not in info.ctors:
                    raise self.err(
                        f"no constructor {e.type.name}/{len(e.args)}", e.pos)
                if not info.ctors and e.args:
                    raise self.err(
                        f"no constructor {e.type.name}/{len(e.args)}", e.pos)
            for a in e.args:
                self.check_expr(a)
        elif isinstance(e, n.NewArray):
            self.note_type(e.type)
            if e.length is not None:
                self.check_expr(e.length)
            for v in e.init or []:
                self.check_expr(v)
        elif isinstance(e, n.ArrayInit):
            if expected is None or not expected.is_array():
                raise self.err("array initializer outside an array declaration", e.pos)
            for v in e.values:
                self.check_expr(v)
        elif isinstance(e, n.Unary):
            self.check_expr(e.operand)
        elif isinstance(e, (n.PreIncDec, n.PostIncDec)):
            self.check_expr(e.target)
        elif isinstance(e, n.Binary):
            self.check_expr(e.lhs)
            self.check_expr(e.rhs)
        elif isinstance(e, n.Conditional):
            self.check_expr(e.cond)
            self.check_expr(e.then)
            self.check_expr(e.other)
        elif isinstance(e, n.Assign):
            self.check_expr(e.target)
            self.check_expr(e.value)
        elif isinstance(e, n.Paren):
            self.check_expr(e.inner, expected=expected)
        else:
            raise TypeError(f"unknown expression {e!r}")

    def check_access_base(self, target: n.Expr, member: str, is_call: bool,
                          arity: int, pos: n.Pos):
        """Validate `target.member` / `target.member(...)` for Name bases.

        A bare-name base is a variable when one is in scope, otherwise a type
        (declared or boundary); other bases are validated structurally and
        checked against statically inferable declared types.
        """
        if isinstance(target, n.Name):
            kind = self.classify_base(target)
            if kind == "class":
                info = self.program.classes[target.id]
                if is_call:
                    found = self.program.lookup_method(target.id, member, arity)
                    if found is None:
                        raise self.err(
                            f"unknown static method {target.id}.{member}/{arity}", pos)
                    if not found[1].is_static():
                        raise self.err(
                            f"instance method {target.id}.{member} accessed statically", pos)
                else:
                    finfo = self.program.lookup_field(target.id, member)
                    if finfo is None:
                        raise self.err(f"unknown static field {target.id}.{member}", pos)
                    if not finfo.static:
                        raise self.err(
                            f"instance field {target.id}.{member} accessed statically", pos)
                return
            if kind == "boundary_type":
                self.referenced_types.add(target.id)
                return
            if kind == "field" and self.static_ctx:
                raise self.err(
                    f"instance field {target.id!r} referenced from a static context", pos)
            # a local/field variable: fall through to value-typed validation
        else:
            self.check_expr(target)
        ty = infer_static_type(target, self)
        if ty is not None and not ty.is_array() and ty.name in self.program.classes:
            if is_call:
                if self.program.lookup_method(ty.name, member, arity) is None:
                    raise self.err(f"unknown method {ty.name}.{member}/{arity}", pos)
            else:
                if self.program.lookup_field(ty.name, member) is None:
                    raise self.err(f"unknown field {ty.name}.{member}", pos)
        if ty is not None and ty.is_array() and not is_call and member != "length":
            raise self.err(f"arrays have no field {member!r}", pos)


_LITERAL_TYPES = {"int": "int", "long": "long", "float": "float", "double": "double",
                  "char": "char", "boolean": "boolean", "string": "String"}

_NUMERIC_RANK = ["byte", "short", "char", "int", "long", "float", "double"]


def promote(a: str | None, b: str | None) -> str | None:
    if a not in _NUMERIC_RANK or b not in _NUMERIC_RANK:
        return None
    winner = max(_NUMERIC_RANK.index(a), _NUMERIC_RANK.index(b))
    return _NUMERIC_RANK[max(winner, _NUMERIC_RANK.index("int"))]


def infer_static_type(e: n.Expr, ctx: _BodyChecker) -> n.TypeRef | None:
    """Best-effort declared type of an expression; None when unknowable."""
    program = ctx.program
    if isinstance(e, n.Literal):
        if e.kind == "null":
            return None
        return n.TypeRef(name=_LITERAL_TYPES[e.kind], dims=0)
    if isinstance(e, n.Name):
        ty = ctx.scopes.lookup(e.id)
        if ty is not None:
            return ty
        finfo = program.lookup_field(ctx.cls.name, e.id)
        return finfo.type if finfo else None
    if isinstance(e, n.This):
        return n.TypeRef(name=ctx.cls.name, dims=0)
    if isinstance(e, n.FieldAccess):
        if isinstance(e.target, n.Name) and ctx.classify_base(e.target) == "class":
            finfo = program.lookup_field(e.target.id, e.name)
            return finfo.type if finfo else None
        base = infer_static_type(e.target, ctx)
        if base is None:
            return None
        if base.is_array():
            return n.TypeRef(name="int", dims=0) if e.name == "length" else None
        finfo = program.lookup_field(base.name, e.name)
        return finfo.type if finfo else None
    if isinstance(e, n.IndexAccess):
        base = infer_static_type(e.target, ctx)
        if base is not None and base.is_array():
            return n.TypeRef(name=base.name, dims=0)
        return None
    if isinstance(e, n.Call):
        if e.target is None:
            found = program.lookup_method(ctx.cls.name, e.name, len(e.args))
        elif isinstance(e.target, n.Name) and ctx.classify_base(e.target) == "class":
            found = program.lookup_method(e.target.id, e.name, len(e.args))
        else:
            base = infer_static_type(e.target, ctx)
            if base is None or base.is_array():
                return None
            found = program.lookup_method(base.name, e.name, len(e.args))
        if found is None:
            return None
        return found[1].return_type
    if isinstance(e, n.New):
        return n.TypeRef(name=e.type.name, dims=0)
    if isinstance(e, n.NewArray):
        return n.TypeRef(name=e.type.name, dims=1)
    if isinstance(e, n.Paren):
        return infer_static_type(e.inner, ctx)
    if isinstance(e, n.Unary):
        if e.op == "!":
            return n.TypeRef(name="boolean", dims=0)
        return infer_static_type(e.operand, ctx)
    if isinstance(e, (n.PreIncDec, n.PostIncDec)):
        return infer_static_type(e.target, ctx)
    if isinstance(e, n.Assign):
        return infer_static_type(e.target, ctx)
    if isinstance(e, n.Binary):
        if e.op in ("==", "!=", "<", "<=", ">", ">=", "&&", "||"):
            return n.TypeRef(name="boolean", dims=0)
        lt = infer_static_type(e.lhs, ctx)
        rt = infer_static_type(e.rhs, ctx)
        lname = lt.name if lt is not None and not lt.is_array() else None
        rname = rt.name if rt is not None and not rt.is_array() else None
        if e.op == "+" and (lname == "String" or rname == "String"):
            return n.TypeRef(name="String", dims=0)
        p = promote(lname, rname)
        return n.TypeRef(name=p, dims=0) if p else None
    if isinstance(e, n.Conditional):
        tt = infer_static_type(e.then, ctx)
        ot = infer_static_type(e.other, ctx)
        if tt is not None and ot is not None and tt == ot:
            return tt
        return None
    return None
