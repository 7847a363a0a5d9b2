"""The symbolic interpreter: contexts, forking, and path exploration.

Each explored path lives in an ExecutionContext holding a frame stack, the
static (class) area, loop/recursion counters and the event list. Branching on
a symbolic condition clones the context (deep copy, nothing shared) and
explores both outcomes; exploration is depth-first with the true branch
first, which fixes the output order of traces.

Calls into the API boundary are stubbed: the call is recorded and a fresh
synthetic datum is returned when the result is consumed. Unassigned fields,
statics and array slots produce memoized fresh symbolic data instead of null;
explicitly assigned nulls dereference to a diagnostic that terminates only
the offending path.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

from ..lang import nodes as n
from ..lang.resolver import EntryPoint, ResolvedProgram
from .compiler import Code, CompiledProgram, compile_program
from .events import (
    READ,
    WRITE,
    ApiCall,
    ArrayAccess,
    Assertion,
    ExecutionTrace,
    FieldAccess,
    PrimaryOperation,
    StringConcat,
    Stringify,
    TERMINATION_BUDGET,
    TERMINATION_LIMIT,
    TERMINATION_NORMAL,
)
from .limits import ExecutorLimits
from .values import (
    FLAG_ENTRY_PARAM,
    KIND_ARRAY,
    KIND_OBJECT,
    KIND_SYNTHETIC,
    KIND_VALUE,
    Datum,
    DatumFactory,
    java_str,
)


class PathDiagnostic(Exception):
    """Terminates interpretation of one path; other paths are unaffected."""


class Frame:
    __slots__ = ("code", "ip", "stack", "locals", "this", "push_result",
                 "return_type", "method_key")

    def __init__(self, code: Code, locals: dict[str, Datum], this: Datum | None,
                 push_result: bool, method_key: tuple | None):
        self.code = code
        self.ip = 0
        self.stack: list[Datum] = []
        self.locals = locals
        self.this = this
        self.push_result = push_result
        self.return_type = code.return_type
        self.method_key = method_key

    def __deepcopy__(self, memo):
        clone = Frame.__new__(Frame)
        clone.code = self.code  # instruction lists are immutable and shared
        clone.ip = self.ip
        clone.stack = copy.deepcopy(self.stack, memo)
        clone.locals = copy.deepcopy(self.locals, memo)
        clone.this = copy.deepcopy(self.this, memo)
        clone.push_result = self.push_result
        clone.return_type = self.return_type
        clone.method_key = self.method_key
        return clone


@dataclass
class ExecutionContext:
    factory: DatumFactory
    frames: list[Frame] = field(default_factory=list)
    class_area: dict[tuple[str, str], Datum] = field(default_factory=dict)
    events: list = field(default_factory=list)
    loop_counts: dict[str, int] = field(default_factory=dict)
    active_methods: dict[tuple, int] = field(default_factory=dict)
    entry_params: list[Datum] = field(default_factory=list)
    steps: int = 0
    budget_hit: bool = False
    diagnostic: str | None = None

    @property
    def frame(self) -> Frame:
        return self.frames[-1]


def fork_context(ctx: ExecutionContext) -> tuple[ExecutionContext, ExecutionContext]:
    """Two fully independent successors of a context at a symbolic branch."""
    return ctx, copy.deepcopy(ctx)


class Executor:
    def __init__(self, program: ResolvedProgram, limits: ExecutorLimits | None = None):
        self.program = program
        self.limits = limits or ExecutorLimits()
        self.compiled: CompiledProgram = compile_program(program)
        self.declared = frozenset(program.classes)

    # ------------------------------------------------------------ top level

    def execute_program(self) -> list[ExecutionTrace]:
        traces: list[ExecutionTrace] = []
        for entry in self.program.entry_points:
            traces.extend(self.execute_entry(entry))
        return traces

    def execute_entry(self, entry: EntryPoint) -> list[ExecutionTrace]:
        decl = self.program.entry_method(entry)
        traces: list[ExecutionTrace] = []
        root = self.build_root_context(entry, decl)
        worklist = [root]
        created = 1
        while worklist:
            ctx = worklist.pop()
            while ctx.frames and ctx.diagnostic is None:
                forked = self.step(ctx)
                if forked is not None:
                    if created < self.limits.context_budget:
                        created += 1
                        worklist.append(forked)
                    else:
                        ctx.budget_hit = True
            traces.append(self.make_trace(ctx, entry))
        return traces

    def build_root_context(self, entry: EntryPoint, decl: n.MethodDecl) -> ExecutionContext:
        factory = DatumFactory(self.declared)
        ctx = ExecutionContext(factory=factory)
        locals_: dict[str, Datum] = {}
        for p in decl.params:
            datum = factory.for_declared_type(p.type, flags={FLAG_ENTRY_PARAM})
            locals_[p.name] = datum
            ctx.entry_params.append(datum)
        entry_code = self.compiled.method_code(entry.class_name, entry.method_name,
                                               entry.arity)
        entry_key = (entry.class_name, entry.method_name, entry.arity)
        ctx.active_methods[entry_key] = 1
        ctx.frames.append(Frame(entry_code, locals_, None, push_result=False,
                                method_key=entry_key))
        clinit = self.compiled.static_init_code()
        if len(clinit.instructions) > 1:
            ctx.frames.append(Frame(clinit, {}, None, push_result=False,
                                    method_key=None))
        return ctx

    def make_trace(self, ctx: ExecutionContext, entry: EntryPoint) -> ExecutionTrace:
        if ctx.budget_hit:
            termination = TERMINATION_BUDGET
        elif ctx.diagnostic is not None:
            termination = TERMINATION_LIMIT
        else:
            termination = TERMINATION_NORMAL
        return ExecutionTrace(entry_signature=entry.signature,
                              parameters=list(ctx.entry_params),
                              events=list(ctx.events),
                              termination=termination,
                              diagnostic=ctx.diagnostic,
                              declared_types=self.declared)

    # ------------------------------------------------------------ stepping

    def step(self, ctx: ExecutionContext) -> ExecutionContext | None:
        """Execute one instruction; returns a forked context at symbolic branches."""
        ctx.steps += 1
        if ctx.steps > self.limits.step_limit:
            ctx.diagnostic = "step limit exceeded"
            ctx.frames.clear()
            return None
        frame = ctx.frame
        ins = frame.code.instructions[frame.ip]
        frame.ip += 1
        try:
            return self._dispatch(ctx, frame, ins)
        except PathDiagnostic as diag:
            ctx.diagnostic = str(diag)
            ctx.frames.clear()
            return None

    def _dispatch(self, ctx: ExecutionContext, frame: Frame, ins: tuple):
        op = ins[0]
        stack = frame.stack

        if op == "const":
            stack.append(self._const(ctx, ins[1], ins[2]))
        elif op == "const_null":
            stack.append(ctx.factory.null())
        elif op == "load":
            stack.append(self._load_local(ctx, frame, ins[1], ins[2], ins[3]))
        elif op == "store":
            v = stack.pop()
            if ins[2] is not None:
                ctx.factory.refine(v, n.TypeRef(name=ins[2], dims=ins[3]))
            frame.locals[ins[1]] = v
        elif op == "load_this":
            if frame.this is None:
                raise PathDiagnostic("'this' outside an instance context")
            stack.append(frame.this)
        elif op == "load_field":
            scope = stack.pop()
            stack.append(self.read_member(ctx, scope, ins[1]))
        elif op == "store_field":
            v = stack.pop()
            scope = stack.pop()
            self.write_member(ctx, scope, ins[1], v)
        elif op == "load_static":
            stack.append(self._load_static(ctx, ins[1], ins[2]))
        elif op == "store_static":
            v = stack.pop()
            self._store_static(ctx, ins[1], ins[2], v)
        elif op == "load_index":
            index = stack.pop()
            target = stack.pop()
            stack.append(self._read_index(ctx, target, index))
        elif op == "store_index":
            v = stack.pop()
            index = stack.pop()
            target = stack.pop()
            self._write_index(ctx, target, index, v)
        elif op == "binop":
            rhs = stack.pop()
            lhs = stack.pop()
            stack.append(self._binop(ctx, ins[1], lhs, rhs))
        elif op == "unop":
            operand = stack.pop()
            stack.append(self._unop(ctx, ins[1], operand))
        elif op == "dup":
            stack.append(stack[-1])
        elif op == "dup_x1":
            stack.insert(-2, stack[-1])
        elif op == "dup2":
            stack.extend(stack[-2:])
        elif op == "dup_x2":
            stack.insert(-3, stack[-1])
        elif op == "pop":
            stack.pop()
        elif op == "new":
            self._new(ctx, frame, ins[1], ins[2], ins[3])
        elif op == "new_array":
            length = stack.pop()
            known = length.literal if (length.kind == KIND_VALUE and length.concrete) else None
            stack.append(ctx.factory.symbolic_array(ins[1], length=known))
        elif op == "array_lit":
            count = ins[2]
            values = stack[len(stack) - count:] if count else []
            del stack[len(stack) - count:]
            arr = ctx.factory.symbolic_array(ins[1], length=count)
            for k, v in enumerate(values):
                idx = ctx.factory.concrete_value("int", k)
                arr.slots[("c", k)] = v
                ctx.events.append(ArrayAccess(WRITE, arr, idx, v))
            stack.append(arr)
        elif op == "call":
            self._call_instance(ctx, frame, ins[1], ins[2], ins[3])
        elif op == "call_static":
            self._call_static(ctx, frame, ins[1], ins[2], ins[3], ins[4])
        elif op == "jump":
            frame.ip = ins[1]
        elif op == "branch_false":
            return self._branch(ctx, frame, ins[1], loop_site=None)
        elif op == "loop_branch_false":
            return self._branch(ctx, frame, ins[2], loop_site=ins[1])
        elif op == "loop_enter":
            site = ins[1]
            if ctx.loop_counts.get(site, 0) >= self.limits.loop_bound:
                frame.ip = ins[2]
            else:
                ctx.loop_counts[site] = ctx.loop_counts.get(site, 0) + 1
        elif op == "return":
            value = stack.pop() if ins[1] else None
            done = ctx.frames.pop()
            if done.method_key is not None:
                count = ctx.active_methods.get(done.method_key, 0)
                if count > 1:
                    ctx.active_methods[done.method_key] = count - 1
                else:
                    ctx.active_methods.pop(done.method_key, None)
            if value is not None and done.return_type is not None:
                ctx.factory.refine(value, done.return_type)
            if done.push_result:
                if value is None:
                    raise PathDiagnostic(
                        f"void result of {done.code.name} used as a value")
                ctx.frame.stack.append(value)
        else:
            raise PathDiagnostic(f"unknown instruction {op!r}")
        return None

    # ------------------------------------------------------------ operands

    def _const(self, ctx: ExecutionContext, kind: str, value: object) -> Datum:
        if kind == "string":
            return ctx.factory.concrete_string(value)
        if kind == "boolean":
            return ctx.factory.concrete_value("boolean", bool(value))
        return ctx.factory.concrete_value(kind, value)

    def _load_local(self, ctx: ExecutionContext, frame: Frame, name: str,
                    type_name: str | None, dims: int) -> Datum:
        datum = frame.locals.get(name)
        if datum is None:
            # never-assigned local: symbolic stand-in, memoized per variable
            ty = n.TypeRef(name=type_name, dims=dims) if type_name else None
            datum = (ctx.factory.for_declared_type(ty) if ty
                     else ctx.factory.synthetic())
            frame.locals[name] = datum
        return datum

    # ------------------------------------------------------------ members

    def read_member(self, ctx: ExecutionContext, scope: Datum, name: str) -> Datum:
        """Field read with the no-null guarantee: unset fields come back symbolic."""
        if scope.is_null():
            raise PathDiagnostic(f"null dereference reading field {name!r}")
        if scope.kind == KIND_SYNTHETIC:
            scope.kind = KIND_OBJECT
        if scope.kind == KIND_ARRAY and name == "length":
            datum = scope.fields.get("length")
            if datum is None:
                if scope.length is not None:
                    datum = ctx.factory.concrete_value("int", scope.length)
                else:
                    datum = ctx.factory.symbolic_value("int")
                scope.fields["length"] = datum
            ctx.events.append(FieldAccess(READ, None, scope, "length", datum))
            return datum
        if scope.kind == KIND_VALUE:
            raise PathDiagnostic(f"field access {name!r} on a primitive value")
        if scope.kind == KIND_ARRAY:
            raise PathDiagnostic(f"arrays have no field {name!r}")
        datum = scope.fields.get(name)
        if datum is None:
            datum = self._fresh_field_value(ctx, scope, name)
            scope.fields[name] = datum
        ctx.events.append(FieldAccess(READ, None, scope, name, datum))
        return datum

    def _fresh_field_value(self, ctx: ExecutionContext, scope: Datum, name: str) -> Datum:
        if scope.type in self.program.classes:
            finfo = self.program.lookup_field(scope.type, name)
            if finfo is not None:
                return ctx.factory.for_declared_type(finfo.type)
        return ctx.factory.synthetic()

    def write_member(self, ctx: ExecutionContext, scope: Datum, name: str, value: Datum):
        if scope.is_null():
            raise PathDiagnostic(f"null dereference writing field {name!r}")
        if scope.kind == KIND_SYNTHETIC:
            scope.kind = KIND_OBJECT
        if scope.kind not in (KIND_OBJECT,):
            raise PathDiagnostic(f"field write {name!r} on a non-object")
        scope.fields[name] = value
        ctx.events.append(FieldAccess(WRITE, None, scope, name, value))

    def _load_static(self, ctx: ExecutionContext, class_name: str, name: str) -> Datum:
        slot = (class_name, name)
        datum = ctx.class_area.get(slot)
        if datum is None:
            if class_name in self.program.classes:
                finfo = self.program.lookup_field(class_name, name)
                datum = (ctx.factory.for_declared_type(finfo.type)
                         if finfo is not None else ctx.factory.synthetic())
            else:
                datum = ctx.factory.synthetic()
            ctx.class_area[slot] = datum
        datum.mark_static()
        ctx.events.append(FieldAccess(READ, class_name, None, name, datum))
        return datum

    def _store_static(self, ctx: ExecutionContext, class_name: str, name: str,
                      value: Datum):
        ctx.class_area[(class_name, name)] = value
        value.mark_static()
        ctx.events.append(FieldAccess(WRITE, class_name, None, name, value))

    def _array_key(self, index: Datum) -> tuple:
        if index.kind == KIND_VALUE and index.concrete:
            return ("c", index.literal)
        return ("s", index.id)

    def _read_index(self, ctx: ExecutionContext, target: Datum, index: Datum) -> Datum:
        if target.is_null():
            raise PathDiagnostic("null dereference indexing an array")
        if target.kind == KIND_SYNTHETIC:
            target.kind = KIND_ARRAY
        if target.kind != KIND_ARRAY:
            raise PathDiagnostic("indexing a non-array")
        key = self._array_key(index)
        datum = target.slots.get(key)
        if datum is None:
            # indexes are never out of bounds and never null: symbolic element
            if target.type is not None:
                datum = ctx.factory.for_declared_type(n.TypeRef(name=target.type, dims=0))
            else:
                datum = ctx.factory.synthetic()
            target.slots[key] = datum
        ctx.events.append(ArrayAccess(READ, target, index, datum))
        return datum

    def _write_index(self, ctx: ExecutionContext, target: Datum, index: Datum,
                     value: Datum):
        if target.is_null():
            raise PathDiagnostic("null dereference indexing an array")
        if target.kind == KIND_SYNTHETIC:
            target.kind = KIND_ARRAY
        if target.kind != KIND_ARRAY:
            raise PathDiagnostic("indexing a non-array")
        target.slots[self._array_key(index)] = value
        ctx.events.append(ArrayAccess(WRITE, target, index, value))

    # ------------------------------------------------------------ operators

    def _stringish(self, d: Datum) -> bool:
        return d.is_string()

    def _binop(self, ctx: ExecutionContext, op: str, lhs: Datum, rhs: Datum) -> Datum:
        if op == "+" and (self._stringish(lhs) or self._stringish(rhs)):
            return self._concat(ctx, lhs, rhs)
        if op in ("==", "!="):
            return self._equality(ctx, op, lhs, rhs)
        for d in (lhs, rhs):
            if d.is_null():
                raise PathDiagnostic(f"null operand of {op!r}")
            if d.kind == KIND_SYNTHETIC:
                other = rhs if d is lhs else lhs
                hint = other.type if other.kind == KIND_VALUE else None
                d.kind = KIND_VALUE
                d.type = hint
                d.source_defined = False
        if lhs.kind != KIND_VALUE or rhs.kind != KIND_VALUE:
            raise PathDiagnostic(f"operator {op!r} on non-primitive data")
        if lhs.concrete and rhs.concrete:
            result = self._fold(ctx, op, lhs, rhs)
        else:
            result = ctx.factory.symbolic_value(self._result_type(op, lhs, rhs))
        ctx.events.append(PrimaryOperation(op, lhs, rhs, result))
        return result

    _BOOL_OPS = {"==", "!=", "<", "<=", ">", ">=", "&&", "||"}

    def _result_type(self, op: str, lhs: Datum, rhs: Datum) -> str | None:
        if op in self._BOOL_OPS:
            return "boolean"
        from ..lang.resolver import promote
        return promote(lhs.type, rhs.type)

    def _numeric(self, d: Datum):
        if d.type == "char":
            return ord(d.literal) if isinstance(d.literal, str) else d.literal
        if d.type == "boolean":
            raise PathDiagnostic("arithmetic on a boolean")
        return d.literal

    def _fold(self, ctx: ExecutionContext, op: str, lhs: Datum, rhs: Datum) -> Datum:
        if op in ("&&", "||"):
            if lhs.type != "boolean" or rhs.type != "boolean":
                raise PathDiagnostic(f"logical {op!r} on non-boolean values")
            value = (lhs.literal and rhs.literal) if op == "&&" else (lhs.literal or rhs.literal)
            return ctx.factory.concrete_value("boolean", bool(value))
        a = self._numeric(lhs)
        b = self._numeric(rhs)
        if op in ("<", "<=", ">", ">="):
            value = {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]
            return ctx.factory.concrete_value("boolean", value)
        rtype = self._result_type(op, lhs, rhs) or "int"
        integral = rtype in ("byte", "short", "int", "long", "char")
        if op == "+":
            value = a + b
        elif op == "-":
            value = a - b
        elif op == "*":
            value = a * b
        elif op == "/":
            if integral:
                if b == 0:
                    raise PathDiagnostic("integer division by zero")
                value = abs(a) // abs(b) * (1 if (a >= 0) == (b >= 0) else -1)
            else:
                if b == 0:
                    value = float("inf") if a > 0 else float("-inf") if a < 0 else float("nan")
                else:
                    value = a / b
        elif op == "%":
            if integral:
                if b == 0:
                    raise PathDiagnostic("integer remainder by zero")
                value = abs(a) % abs(b) * (1 if a >= 0 else -1)
            else:
                value = float("nan") if b == 0 else __import__("math").fmod(a, b)
        else:
            raise PathDiagnostic(f"unknown operator {op!r}")
        if integral and rtype == "char":
            rtype = "int"
        return ctx.factory.concrete_value(rtype, value)

    def _equality(self, ctx: ExecutionContext, op: str, lhs: Datum, rhs: Datum) -> Datum:
        result = None
        if lhs is rhs:
            result = op == "=="
        elif lhs.is_null() and rhs.is_null():
            result = op == "=="
        elif lhs.concrete and rhs.concrete:
            if lhs.kind == KIND_VALUE and rhs.kind == KIND_VALUE:
                result = (self._numeric(lhs) == self._numeric(rhs)
                          if lhs.type != "boolean" and rhs.type != "boolean"
                          else lhs.literal == rhs.literal)
                result = result if op == "==" else not result
            elif lhs.is_string() and rhs.is_string():
                result = (lhs.text == rhs.text) if op == "==" else (lhs.text != rhs.text)
            elif lhs.is_null() or rhs.is_null():
                result = op != "=="
        if result is None:
            datum = ctx.factory.symbolic_value("boolean")
        else:
            datum = ctx.factory.concrete_value("boolean", bool(result))
        ctx.events.append(PrimaryOperation(op, lhs, rhs, datum))
        return datum

    def _unop(self, ctx: ExecutionContext, op: str, operand: Datum) -> Datum:
        if operand.is_null():
            raise PathDiagnostic(f"null operand of {op!r}")
        if operand.kind == KIND_SYNTHETIC:
            operand.kind = KIND_VALUE
            operand.type = "boolean" if op == "!" else operand.type
            operand.source_defined = False
        if operand.kind != KIND_VALUE:
            raise PathDiagnostic(f"operator {op!r} on non-primitive data")
        if operand.concrete:
            if op == "!":
                result = ctx.factory.concrete_value("boolean", not operand.literal)
            else:
                result = ctx.factory.concrete_value(
                    operand.type if operand.type != "char" else "int",
                    -self._numeric(operand))
        else:
            result = ctx.factory.symbolic_value(
                "boolean" if op == "!" else operand.type)
        ctx.events.append(PrimaryOperation(op, operand, None, result))
        return result

    def _concat(self, ctx: ExecutionContext, lhs: Datum, rhs: Datum) -> Datum:
        operands = []
        for d in (lhs, rhs):
            if d.kind == KIND_SYNTHETIC:
                d.kind = KIND_OBJECT
                d.type = "String"
                d.source_defined = False
            if d.is_string():
                operands.append(d)
                continue
            # a non-String operand stringifies first
            if d.concrete:
                s = ctx.factory.concrete_string(java_str(d))
            else:
                s = ctx.factory.symbolic_object("String")
            ctx.events.append(Stringify(d, s))
            operands.append(s)
        l, r = operands
        if l.concrete and r.concrete:
            result = ctx.factory.concrete_string((l.text or "") + (r.text or ""))
        else:
            result = ctx.factory.symbolic_object("String")
        ctx.events.append(StringConcat([l, r], result))
        return result

    # ------------------------------------------------------------ branching

    def _truth(self, cond: Datum) -> bool:
        if cond.kind != KIND_VALUE:
            raise PathDiagnostic("branch condition is not a boolean value")
        return bool(cond.literal)

    def _branch(self, ctx: ExecutionContext, frame: Frame, target: int,
                loop_site: str | None):
        cond = frame.stack[-1]
        if cond.is_null():
            frame.stack.pop()
            raise PathDiagnostic("branch condition is null")
        if cond.kind == KIND_SYNTHETIC:
            cond.kind = KIND_VALUE
            cond.type = "boolean"
            cond.source_defined = False
        if cond.concrete:
            frame.stack.pop()
            entered_too_often = (loop_site is not None and
                                 ctx.loop_counts.get(loop_site, 0) >= self.limits.loop_bound)
            if not self._truth(cond) or entered_too_often:
                frame.ip = target
            return None
        # symbolic condition
        if loop_site is not None and \
                ctx.loop_counts.get(loop_site, 0) >= self.limits.loop_bound:
            frame.stack.pop()
            ctx.events.append(Assertion(cond, False))
            frame.ip = target
            return None
        # fork with the condition still on the stack: each child pops its own copy
        true_ctx, false_ctx = fork_context(ctx)
        true_cond = true_ctx.frame.stack.pop()
        true_ctx.events.append(Assertion(true_cond, True))
        false_cond = false_ctx.frame.stack.pop()
        false_ctx.events.append(Assertion(false_cond, False))
        false_ctx.frame.ip = target
        return false_ctx

    # ------------------------------------------------------------ calls

    def _call_instance(self, ctx: ExecutionContext, frame: Frame, name: str,
                       argc: int, used: bool):
        stack = frame.stack
        args = stack[len(stack) - argc:] if argc else []
        del stack[len(stack) - argc:]
        receiver = stack.pop()
        if receiver.is_null():
            raise PathDiagnostic(f"null dereference calling {name!r}")
        if receiver.kind == KIND_SYNTHETIC:
            receiver.kind = KIND_OBJECT
        if receiver.kind == KIND_VALUE:
            raise PathDiagnostic(f"method call {name!r} on a primitive value")
        rtype = receiver.type
        if receiver.kind == KIND_OBJECT and rtype in self.program.classes:
            found = self.program.lookup_method(rtype, name, argc)
            if found is None:
                raise PathDiagnostic(f"unknown method {rtype}.{name}/{argc}")
            info, decl = found
            self._invoke_declared(ctx, frame, info.name, decl, receiver, args, used)
            return
        self.stub_api_call(ctx, frame, rtype, name, receiver, args, used)

    def _call_static(self, ctx: ExecutionContext, frame: Frame, class_name: str,
                     name: str, argc: int, used: bool):
        stack = frame.stack
        args = stack[len(stack) - argc:] if argc else []
        del stack[len(stack) - argc:]
        if class_name in self.program.classes:
            found = self.program.lookup_method(class_name, name, argc)
            if found is None or not found[1].is_static():
                raise PathDiagnostic(f"unknown static method {class_name}.{name}/{argc}")
            info, decl = found
            self._invoke_declared(ctx, frame, info.name, decl, None, args, used)
            return
        self.stub_api_call(ctx, frame, class_name, name, None, args, used)

    def _invoke_declared(self, ctx: ExecutionContext, frame: Frame, class_name: str,
                         decl: n.MethodDecl, receiver: Datum | None,
                         args: list[Datum], used: bool):
        key = (class_name, decl.name, decl.arity)
        active = ctx.active_methods.get(key, 0)
        if active >= self.limits.recursion_bound:
            # recursion bound reached: skip the activation, result is symbolic
            if decl.return_type is not None and used:
                frame.stack.append(ctx.factory.for_declared_type(decl.return_type))
            elif decl.return_type is None and used:
                raise PathDiagnostic(f"void result of {decl.name} used as a value")
            return
        code = self.compiled.method_code(class_name, decl.name, decl.arity)
        locals_: dict[str, Datum] = {}
        for p, a in zip(decl.params, args):
            ctx.factory.refine(a, p.type)
            locals_[p.name] = a
        ctx.active_methods[key] = active + 1
        ctx.frames.append(Frame(code, locals_, receiver, push_result=used,
                                method_key=key))

    def stub_api_call(self, ctx: ExecutionContext, frame: Frame,
                      scope_type: str | None, name: str, scope: Datum | None,
                      args: list[Datum], used: bool):
        """Record a boundary interaction; synthetic data comes back if consumed."""
        signature = f"{scope_type}.{name}/{len(args)}" if scope_type else f"{name}/{len(args)}"
        result = ctx.factory.synthetic() if used else None
        ctx.events.append(ApiCall(signature, scope, args, result))
        if result is not None:
            frame.stack.append(result)

    def _new(self, ctx: ExecutionContext, frame: Frame, class_name: str,
             argc: int, used: bool):
        stack = frame.stack
        args = stack[len(stack) - argc:] if argc else []
        del stack[len(stack) - argc:]
        if class_name not in self.program.classes:
            signature = f"{class_name}.<init>/{argc}"
            result = None
            if used:
                result = ctx.factory.synthetic(class_name)
                result.kind = KIND_OBJECT
            ctx.events.append(ApiCall(signature, None, args, result))
            if result is not None:
                stack.append(result)
            return
        obj = ctx.factory.concrete_object(class_name)
        if used:
            stack.append(obj)
        ctor = self.compiled.ctor_code(class_name, argc)
        if ctor is not None:
            decl = self.program.classes[class_name].ctors[argc]
            locals_: dict[str, Datum] = {}
            for p, a in zip(decl.params, args):
                ctx.factory.refine(a, p.type)
                locals_[p.name] = a
            ctx.frames.append(Frame(ctor, locals_, obj, push_result=False,
                                    method_key=(class_name, "<init>", argc)))
        elif argc:
            raise PathDiagnostic(f"no constructor {class_name}/{argc}")
        fields = self.compiled.field_init_code(class_name)
        if len(fields.instructions) > 1:
            ctx.frames.append(Frame(fields, {}, obj, push_result=False,
                                    method_key=None))


def execute_program(program: ResolvedProgram,
                    limits: ExecutorLimits | None = None) -> list[ExecutionTrace]:
    """One trace per explored path per entry point, depth-first, true branch first."""
    return Executor(program, limits).execute_program()
