"""Lowering from ASTs to the executor's linear instruction form.

Each method body becomes a flat list of instruction tuples executed by a
stack machine. Compound assignments and increments lower to exactly the same
instruction pattern as their expanded forms, and `switch` lowers to the same
comparison chain as the equivalent if/else ladder over a temporary, so the
semantics-preserving rewrites of the mutation engine are trace-identical by
construction.

Loop sites get stable ids used by the per-path iteration bound; compile-time
constants (static final fields with literal initializers) are inlined at
their use sites, mirroring how a Java compiler treats constant expressions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import CompileError
from ..lang import nodes as n
from ..lang.resolver import FieldInfo, ResolvedProgram

# Instruction opcodes (first tuple element):
#   const, const_null, load, store, load_this,
#   load_field, store_field, load_static, store_static, load_index, store_index,
#   binop, unop, dup, dup_x1, dup2, dup_x2, pop,
#   new, new_array, array_lit, call, call_static,
#   jump, branch_false, loop_branch_false, loop_enter, return


def is_compile_time_const(info: FieldInfo) -> bool:
    return info.static and info.final and isinstance(info.init, n.Literal)


@dataclass
class Code:
    """Compiled body plus the declared types needed at run time."""

    name: str
    instructions: list[tuple]
    return_type: n.TypeRef | None = None


@dataclass
class CompiledProgram:
    program: ResolvedProgram
    methods: dict[tuple[str, str, int], Code] = field(default_factory=dict)
    ctors: dict[tuple[str, int], Code] = field(default_factory=dict)
    field_inits: dict[str, Code] = field(default_factory=dict)  # per class, chain-local
    static_init: Code | None = None

    def method_code(self, class_name: str, name: str, arity: int) -> Code:
        key = (class_name, name, arity)
        if key not in self.methods:
            info, decl = self.program.lookup_method(class_name, name, arity)
            self.methods[key] = _Compiler(self.program, info.name).compile_method(decl)
        return self.methods[key]

    def ctor_code(self, class_name: str, arity: int) -> Code | None:
        key = (class_name, arity)
        if key not in self.ctors:
            info = self.program.classes[class_name]
            decl = info.ctors.get(arity)
            self.ctors[key] = (None if decl is None
                               else _Compiler(self.program, class_name).compile_ctor(decl))
        return self.ctors[key]

    def field_init_code(self, class_name: str) -> Code:
        """Instance-field initializers for the full superclass chain, root first."""
        if class_name not in self.field_inits:
            chain = list(reversed(self.program.superchain(class_name)))
            items = [(info.name, info.fields[fname])
                     for info in chain for fname in info.field_order
                     if not info.fields[fname].static
                     and info.fields[fname].init is not None]
            comp = _Compiler(self.program, class_name)
            self.field_inits[class_name] = comp.compile_inits(
                items, static=False, name=f"{class_name}.<fields>")
        return self.field_inits[class_name]

    def static_init_code(self) -> Code:
        if self.static_init is None:
            items = []
            for cname in self.program.class_order:
                info = self.program.classes[cname]
                for fname in info.field_order:
                    finfo = info.fields[fname]
                    if (finfo.static and finfo.init is not None
                            and not is_compile_time_const(finfo)):
                        items.append((cname, finfo))
            if not self.program.class_order:
                self.static_init = Code("<clinit>", [("return", False)])
            else:
                comp = _Compiler(self.program, self.program.class_order[0])
                self.static_init = comp.compile_inits(items, static=True, name="<clinit>")
        return self.static_init


def compile_program(program: ResolvedProgram) -> CompiledProgram:
    return CompiledProgram(program=program)


_COMPOUND = {"+=": "+", "-=": "-", "*=": "*", "/=": "/", "%=": "%"}


class _Scopes:
    def __init__(self):
        self.frames: list[dict[str, n.TypeRef]] = [{}]

    def push(self):
        self.frames.append({})

    def pop(self):
        self.frames.pop()

    def declare(self, name: str, ty: n.TypeRef):
        self.frames[-1][name] = ty

    def lookup(self, name: str) -> n.TypeRef | None:
        for frame in reversed(self.frames):
            if name in frame:
                return frame[name]
        return None


class _Compiler:
    def __init__(self, program: ResolvedProgram, class_name: str):
        self.program = program
        self.cls = program.classes[class_name]
        self.scopes = _Scopes()
        self.static_ctx = False
        self.out: list[tuple] = []
        self.loop_seq = 0
        self.switch_seq = 0
        self.switch_ends: list[int] = []  # label ids for `break`
        self.labels: dict[int, int] = {}
        self.label_seq = 0

    # ------------------------------------------------------------ plumbing

    def emit(self, *ins):
        self.out.append(tuple(ins))

    def new_label(self) -> int:
        self.label_seq += 1
        return self.label_seq

    def place(self, label: int):
        self.labels[label] = len(self.out)

    def finish(self, name: str, return_type: n.TypeRef | None) -> Code:
        self.emit("return", False)
        resolved = []
        for ins in self.out:
            if ins[0] in ("jump", "branch_false"):
                resolved.append((ins[0], self.labels[ins[1]]))
            elif ins[0] == "loop_branch_false":
                resolved.append((ins[0], ins[1], self.labels[ins[2]]))
            elif ins[0] == "loop_enter":
                resolved.append((ins[0], ins[1], self.labels[ins[2]]))
            else:
                resolved.append(ins)
        return Code(name=name, instructions=resolved, return_type=return_type)

    def loop_site(self) -> str:
        self.loop_seq += 1
        return f"{self.cls.name}.{self._owner}.L{self.loop_seq}"

    # ------------------------------------------------------------- entry

    def compile_method(self, decl: n.MethodDecl) -> Code:
        self._owner = f"{decl.name}/{decl.arity}"
        self.static_ctx = decl.is_static()
        for p in decl.params:
            self.scopes.declare(p.name, p.type)
        self.compile_block(decl.body)
        return self.finish(f"{self.cls.name}.{self._owner}", decl.return_type)

    def compile_ctor(self, decl: n.CtorDecl) -> Code:
        self._owner = f"<init>/{decl.arity}"
        self.static_ctx = False
        for p in decl.params:
            self.scopes.declare(p.name, p.type)
        self.compile_block(decl.body)
        return self.finish(f"{self.cls.name}.{self._owner}", None)

    def compile_inits(self, items: list[tuple[str, FieldInfo]], static: bool,
                      name: str) -> Code:
        """One code object running a sequence of field initializers."""
        self._owner = "<clinit>" if static else "<fields>"
        self.static_ctx = static
        for cls_name, finfo in items:
            self.cls = self.program.classes[cls_name]
            if not static:
                self.emit("load_this")
            if isinstance(finfo.init, n.ArrayInit):
                for v in finfo.init.values:
                    self.expr(v, used=True)
                self.emit("array_lit", finfo.type.name, len(finfo.init.values))
            else:
                self.expr(finfo.init, used=True)
            if static:
                self.emit("store_static", finfo.declaring_class, finfo.name)
            else:
                self.emit("store_field", finfo.name)
        return self.finish(name, None)

    # ------------------------------------------------------------ statements

    def compile_block(self, block: n.Block):
        self.scopes.push()
        for stmt in block.statements:
            self.stmt(stmt)
        self.scopes.pop()

    def stmt(self, stmt: n.Stmt):
        if isinstance(stmt, n.Block):
            self.compile_block(stmt)
        elif isinstance(stmt, n.LocalDecl):
            for d in stmt.declarators:
                if d.init is not None:
                    if isinstance(d.init, n.ArrayInit):
                        for v in d.init.values:
                            self.expr(v, used=True)
                        self.emit("array_lit", stmt.type.name, len(d.init.values))
                    else:
                        self.expr(d.init, used=True)
                    self.emit("store", d.name, stmt.type.name, stmt.type.dims)
                self.scopes.declare(d.name, stmt.type)
        elif isinstance(stmt, n.ExprStmt):
            self.expr(stmt.expr, used=False)
        elif isinstance(stmt, n.If):
            self.if_stmt(stmt)
        elif isinstance(stmt, n.While):
            site = self.loop_site()
            top = self.new_label()
            end = self.new_label()
            self.place(top)
            self.expr(stmt.cond, used=True)
            self.emit("loop_branch_false", site, end)
            self.emit("loop_enter", site, end)
            self.compile_block(stmt.body)
            self.emit("jump", top)
            self.place(end)
        elif isinstance(stmt, n.DoWhile):
            site = self.loop_site()
            top = self.new_label()
            end = self.new_label()
            self.place(top)
            self.emit("loop_enter", site, end)
            self.compile_block(stmt.body)
            self.expr(stmt.cond, used=True)
            self.emit("loop_branch_false", site, end)
            self.emit("jump", top)
            self.place(end)
        elif isinstance(stmt, n.For):
            self.for_stmt(stmt)
        elif isinstance(stmt, n.ForEach):
            self.foreach_stmt(stmt)
        elif isinstance(stmt, n.Switch):
            self.switch_stmt(stmt)
        elif isinstance(stmt, n.Return):
            if stmt.value is not None:
                self.expr(stmt.value, used=True)
                self.emit("return", True)
            else:
                self.emit("return", False)
        elif isinstance(stmt, n.Break):
            if not self.switch_ends:
                raise CompileError("break outside switch")
            self.emit("jump", self.switch_ends[-1])
        elif isinstance(stmt, n.Empty):
            pass
        else:
            raise CompileError(f"unknown statement {stmt!r}")

    def if_stmt(self, stmt: n.If):
        self.expr(stmt.cond, used=True)
        els = self.new_label()
        end = self.new_label()
        self.emit("branch_false", els)
        self.compile_block(stmt.then)
        self.emit("jump", end)
        self.place(els)
        if stmt.orelse is not None:
            self.stmt(stmt.orelse)
        self.place(end)

    def for_stmt(self, stmt: n.For):
        site = self.loop_site()
        self.scopes.push()
        if stmt.init is not None:
            self.stmt(stmt.init)
        top = self.new_label()
        end = self.new_label()
        self.place(top)
        if stmt.cond is not None:
            self.expr(stmt.cond, used=True)
            self.emit("loop_branch_false", site, end)
        self.emit("loop_enter", site, end)
        self.compile_block(stmt.body)
        if stmt.update is not None:
            self.expr(stmt.update, used=False)
        self.emit("jump", top)
        self.place(end)
        self.scopes.pop()

    def foreach_stmt(self, stmt: n.ForEach):
        """Lowered to an index loop over `.length`, like the handwritten form."""
        site = self.loop_site()
        arr = f"$arr{self.loop_seq}"
        idx = f"$i{self.loop_seq}"
        self.scopes.push()
        self.expr(stmt.iterable, used=True)
        self.emit("store", arr, stmt.var_type.name, 1)
        self.emit("const", "int", 0)
        self.emit("store", idx, "int", 0)
        top = self.new_label()
        end = self.new_label()
        self.place(top)
        self.emit("load", idx, "int", 0)
        self.emit("load", arr, stmt.var_type.name, 1)
        self.emit("load_field", "length")
        self.emit("binop", "<")
        self.emit("loop_branch_false", site, end)
        self.emit("loop_enter", site, end)
        self.emit("load", arr, stmt.var_type.name, 1)
        self.emit("load", idx, "int", 0)
        self.emit("load_index")
        self.emit("store", stmt.var_name, stmt.var_type.name, stmt.var_type.dims)
        self.scopes.declare(stmt.var_name, stmt.var_type)
        self.compile_block(stmt.body)
        self.emit("load", idx, "int", 0)
        self.emit("const", "int", 1)
        self.emit("binop", "+")
        self.emit("store", idx, "int", 0)
        self.emit("jump", top)
        self.place(end)
        self.scopes.pop()

    def switch_stmt(self, stmt: n.Switch):
        self.switch_seq += 1
        temp = f"$sw{self.switch_seq}"
        end = self.new_label()
        self.scopes.push()
        self.expr(stmt.selector, used=True)
        self.emit("store", temp, None, 0)
        group_labels = [self.new_label() for _ in stmt.groups]
        default_target = end
        for group, glabel in zip(stmt.groups, group_labels):
            for label in group.labels:
                if label is None:
                    default_target = glabel
                    continue
                next_test = self.new_label()
                self.emit("load", temp, None, 0)
                self.emit("const", label.kind, label.value)
                self.emit("binop", "==")
                self.emit("branch_false", next_test)
                self.emit("jump", glabel)
                self.place(next_test)
        self.emit("jump", default_target)
        self.switch_ends.append(end)
        for group, glabel in zip(stmt.groups, group_labels):
            self.place(glabel)
            self.scopes.push()
            for s in group.statements:
                self.stmt(s)
            self.scopes.pop()
        self.switch_ends.pop()
        self.place(end)
        self.scopes.pop()

    # ------------------------------------------------------------ expressions

    def classify_name(self, name: str) -> tuple[str, object]:
        ty = self.scopes.lookup(name)
        if ty is not None:
            return "local", ty
        finfo = self.program.lookup_field(self.cls.name, name)
        if finfo is not None:
            return ("static_field" if finfo.static else "field"), finfo
        if name in self.program.classes:
            return "class", self.program.classes[name]
        return "boundary_type", name

    def expr(self, e: n.Expr, used: bool):
        if isinstance(e, n.Literal):
            if e.kind == "null":
                self.emit("const_null")
            else:
                self.emit("const", e.kind, e.value)
            if not used:
                self.emit("pop")
        elif isinstance(e, n.Paren):
            self.expr(e.inner, used)
        elif isinstance(e, n.Name):
            kind, info = self.classify_name(e.id)
            if kind == "local":
                self.emit("load", e.id, info.name, info.dims)
            elif kind == "field":
                self.emit("load_this")
                self.emit("load_field", e.id)
            elif kind == "static_field":
                self.load_static_field(info)
            else:
                raise CompileError(f"unknown identifier {e.id!r}")
            if not used:
                self.emit("pop")
        elif isinstance(e, n.This):
            self.emit("load_this")
            if not used:
                self.emit("pop")
        elif isinstance(e, n.FieldAccess):
            self.field_access(e, used)
        elif isinstance(e, n.IndexAccess):
            self.expr(e.target, used=True)
            self.expr(e.index, used=True)
            self.emit("load_index")
            if not used:
                self.emit("pop")
        elif isinstance(e, n.Call):
            self.call(e, used)
        elif isinstance(e, n.New):
            for a in e.args:
                self.expr(a, used=True)
            self.emit("new", e.type.name, len(e.args), used)
        elif isinstance(e, n.NewArray):
            if e.init is not None:
                for v in e.init:
                    self.expr(v, used=True)
                self.emit("array_lit", e.type.name, len(e.init))
            else:
                self.expr(e.length, used=True)
                self.emit("new_array", e.type.name)
            if not used:
                self.emit("pop")
        elif isinstance(e, n.Unary):
            self.expr(e.operand, used=True)
            self.emit("unop", "!" if e.op == "!" else "neg")
            if not used:
                self.emit("pop")
        elif isinstance(e, n.Binary):
            self.expr(e.lhs, used=True)
            self.expr(e.rhs, used=True)
            self.emit("binop", e.op)
            if not used:
                self.emit("pop")
        elif isinstance(e, n.Conditional):
            self.expr(e.cond, used=True)
            els = self.new_label()
            end = self.new_label()
            self.emit("branch_false", els)
            self.expr(e.then, used)
            self.emit("jump", end)
            self.place(els)
            self.expr(e.other, used)
            self.place(end)
        elif isinstance(e, n.Assign):
            self.assign(e, used)
        elif isinstance(e, (n.PreIncDec, n.PostIncDec)):
            self.incdec(e, used)
        elif isinstance(e, n.ArrayInit):
            raise CompileError("array initializer outside a declaration")
        else:
            raise CompileError(f"unknown expression {e!r}")

    def load_static_field(self, finfo: FieldInfo):
        if is_compile_time_const(finfo):
            self.emit("const", finfo.init.kind, finfo.init.value)
        else:
            self.emit("load_static", finfo.declaring_class, finfo.name)

    def field_access(self, e: n.FieldAccess, used: bool):
        if isinstance(e.target, n.Name):
            kind, info = self.classify_name(e.target.id)
            if kind == "class":
                finfo = self.program.lookup_field(info.name, e.name)
                if finfo is None:
                    raise CompileError(f"unknown static field {info.name}.{e.name}")
                self.load_static_field(finfo)
                if not used:
                    self.emit("pop")
                return
            if kind == "boundary_type":
                self.emit("load_static", e.target.id, e.name)
                if not used:
                    self.emit("pop")
                return
        self.expr(e.target, used=True)
        self.emit("load_field", e.name)
        if not used:
            self.emit("pop")

    def call(self, e: n.Call, used: bool):
        if e.target is None:
            found = self.program.lookup_method(self.cls.name, e.name, len(e.args))
            if found is None:
                raise CompileError(f"unknown method {e.name}/{len(e.args)}")
            info, decl = found
            if decl.is_static():
                for a in e.args:
                    self.expr(a, used=True)
                self.emit("call_static", info.name, e.name, len(e.args), used)
            else:
                self.emit("load_this")
                for a in e.args:
                    self.expr(a, used=True)
                self.emit("call", e.name, len(e.args), used)
            return
        if isinstance(e.target, n.Name):
            kind, info = self.classify_name(e.target.id)
            if kind == "class":
                for a in e.args:
                    self.expr(a, used=True)
                self.emit("call_static", info.name, e.name, len(e.args), used)
                return
            if kind == "boundary_type":
                for a in e.args:
                    self.expr(a, used=True)
                self.emit("call_static", e.target.id, e.name, len(e.args), used)
                return
        self.expr(e.target, used=True)
        for a in e.args:
            self.expr(a, used=True)
        self.emit("call", e.name, len(e.args), used)

    # --------------------------------------------------- assignment lowering

    def assign(self, e: n.Assign, used: bool):
        op = _COMPOUND.get(e.op)
        target = e.target
        if isinstance(target, n.Name):
            kind, info = self.classify_name(target.id)
            if kind == "local":
                if op:
                    self.emit("load", target.id, info.name, info.dims)
                    self.expr(e.value, used=True)
                    self.emit("binop", op)
                else:
                    self.expr(e.value, used=True)
                if used:
                    self.emit("dup")
                self.emit("store", target.id, info.name, info.dims)
                return
            if kind == "field":
                self.emit("load_this")
                self.store_field_value(None, target.id, op, e.value, used)
                return
            if kind == "static_field":
                self.store_static_value(info.declaring_class, target.id, op, e.value, used)
                return
            raise CompileError(f"unknown assignment target {target.id!r}")
        if isinstance(target, n.FieldAccess):
            if isinstance(target.target, n.Name):
                kind, info = self.classify_name(target.target.id)
                if kind == "class":
                    finfo = self.program.lookup_field(info.name, target.name)
                    if finfo is None:
                        raise CompileError(
                            f"unknown static field {info.name}.{target.name}")
                    self.store_static_value(finfo.declaring_class, target.name,
                                            op, e.value, used)
                    return
                if kind == "boundary_type":
                    self.store_static_value(target.target.id, target.name,
                                            op, e.value, used)
                    return
            self.expr(target.target, used=True)
            self.store_field_value(None, target.name, op, e.value, used)
            return
        if isinstance(target, n.IndexAccess):
            self.expr(target.target, used=True)
            self.expr(target.index, used=True)
            if op:
                self.emit("dup2")
                self.emit("load_index")
                self.expr(e.value, used=True)
                self.emit("binop", op)
            else:
                self.expr(e.value, used=True)
            if used:
                self.emit("dup_x2")
            self.emit("store_index")
            return
        raise CompileError("invalid assignment target")

    def store_field_value(self, _scope, name: str, op: str | None,
                          value: n.Expr, used: bool):
        # stack on entry: [scope]
        if op:
            self.emit("dup")
            self.emit("load_field", name)
            self.expr(value, used=True)
            self.emit("binop", op)
        else:
            self.expr(value, used=True)
        if used:
            self.emit("dup_x1")
        self.emit("store_field", name)

    def store_static_value(self, class_name: str, name: str, op: str | None,
                           value: n.Expr, used: bool):
        if op:
            self.emit("load_static", class_name, name)
            self.expr(value, used=True)
            self.emit("binop", op)
        else:
            self.expr(value, used=True)
        if used:
            self.emit("dup")
        self.emit("store_static", class_name, name)

    def incdec(self, e: n.PreIncDec | n.PostIncDec, used: bool):
        op = "+" if e.op == "++" else "-"
        post = isinstance(e, n.PostIncDec)
        target = e.target
        if isinstance(target, n.Name):
            kind, info = self.classify_name(target.id)
            if kind == "local":
                self.emit("load", target.id, info.name, info.dims)
                if used and post:
                    self.emit("dup")
                self.emit("const", "int", 1)
                self.emit("binop", op)
                if used and not post:
                    self.emit("dup")
                self.emit("store", target.id, info.name, info.dims)
                return
            if kind == "field":
                self.emit("load_this")
                self.incdec_field(target.id, op, post, used)
                return
            if kind == "static_field":
                self.emit("load_static", info.declaring_class, target.id)
                if used and post:
                    self.emit("dup")
                self.emit("const", "int", 1)
                self.emit("binop", op)
                if used and not post:
                    self.emit("dup")
                self.emit("store_static", info.declaring_class, target.id)
                return
            raise CompileError(f"unknown identifier {target.id!r}")
        if isinstance(target, n.FieldAccess):
            if isinstance(target.target, n.Name):
                kind, info = self.classify_name(target.target.id)
                if kind in ("class", "boundary_type"):
                    cname = info.name if kind == "class" else target.target.id
                    if kind == "class":
                        finfo = self.program.lookup_field(info.name, target.name)
                        if finfo is None:
                            raise CompileError(
                                f"unknown static field {info.name}.{target.name}")
                        cname = finfo.declaring_class
                    self.emit("load_static", cname, target.name)
                    if used and post:
                        self.emit("dup")
                    self.emit("const", "int", 1)
                    self.emit("binop", op)
                    if used and not post:
                        self.emit("dup")
                    self.emit("store_static", cname, target.name)
                    return
            self.expr(target.target, used=True)
            self.incdec_field(target.name, op, post, used)
            return
        if isinstance(target, n.IndexAccess):
            self.expr(target.target, used=True)
            self.expr(target.index, used=True)
            self.emit("dup2")
            self.emit("load_index")
            if used and post:
                self.emit("dup_x2")
            self.emit("const", "int", 1)
            self.emit("binop", op)
            if used and not post:
                self.emit("dup_x2")
            self.emit("store_index")
            return
        raise CompileError("invalid increment/decrement target")

    def incdec_field(self, name: str, op: str, post: bool, used: bool):
        # stack on entry: [scope]
        self.emit("dup")
        self.emit("load_field", name)
        if used and post:
            self.emit("dup_x1")
        self.emit("const", "int", 1)
        self.emit("binop", op)
        if used and not post:
            self.emit("dup_x1")
        self.emit("store_field", name)
