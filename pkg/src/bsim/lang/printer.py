"""Pretty-printer for mini-language ASTs.

print followed by parse is the identity on ASTs (positions excepted), which is
what lets the mutation engine emit variant source. The printer never inserts
parentheses on its own: code that constructs expression trees must add
explicit Paren nodes wherever precedence requires them, and the mutation
engine verifies the round trip.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import nodes as n


@dataclass(frozen=True)
class Style:
    indent: int = 4
    brace_next_line: bool = False
    blank_between_members: bool = True


DEFAULT_STYLE = Style()


def print_program(ast: n.Ast, style: Style = DEFAULT_STYLE) -> str:
    return _Printer(style).program(ast)


def print_expr(expr: n.Expr) -> str:
    return _Printer(DEFAULT_STYLE).expr(expr)


def format_literal(kind: str, value: object) -> str:
    if kind == "int":
        return str(value)
    if kind == "long":
        return f"{value}L"
    if kind in ("float", "double"):
        text = repr(float(value))
        if "e" in text or "E" in text:
            text = f"{float(value):.17f}".rstrip("0")
            if text.endswith("."):
                text += "0"
        if "." not in text:
            text += ".0"
        return text + ("f" if kind == "float" else "")
    if kind == "char":
        return "'" + _escape(str(value), quote="'") + "'"
    if kind == "string":
        return '"' + _escape(str(value), quote='"') + '"'
    if kind == "boolean":
        return "true" if value else "false"
    if kind == "null":
        return "null"
    raise ValueError(f"unknown literal kind {kind!r}")


_ESCAPE_MAP = {"\n": "\\n", "\t": "\\t", "\r": "\\r", "\b": "\\b",
               "\f": "\\f", "\0": "\\0", "\\": "\\\\"}


def _escape(text: str, quote: str) -> str:
    out = []
    for ch in text:
        if ch in _ESCAPE_MAP:
            out.append(_ESCAPE_MAP[ch])
        elif ch == quote:
            out.append("\\" + quote)
        else:
            out.append(ch)
    return "".join(out)


class _Printer:
    def __init__(self, style: Style):
        self.style = style
        self.lines: list[str] = []
        self.depth = 0

    # ------------------------------------------------------------- emit

    def emit(self, text: str):
        self.lines.append(" " * (self.style.indent * self.depth) + text)

    def open_brace(self, header: str):
        if self.style.brace_next_line and header:
            self.emit(header)
            self.emit("{")
        else:
            self.emit(header + " {" if header else "{")
        self.depth += 1

    def close_brace(self, suffix: str = ""):
        self.depth -= 1
        self.emit("}" + suffix)

    # ------------------------------------------------------------- program

    def program(self, ast: n.Ast) -> str:
        for k, cls in enumerate(ast.classes):
            if k and self.style.blank_between_members:
                self.emit("")
            self.clazz(cls)
        return "\n".join(self.lines) + "\n"

    def clazz(self, cls: n.ClassDecl):
        header = self.mods(cls.mods) + "class " + cls.name
        if cls.superclass:
            header += " extends " + cls.superclass
        self.open_brace(header)
        for k, member in enumerate(cls.members):
            if k and self.style.blank_between_members:
                self.emit("")
            self.member(member)
        self.close_brace()

    def mods(self, mods: list[str]) -> str:
        return "".join(m + " " for m in mods)

    def member(self, member):
        if isinstance(member, n.FieldDecl):
            self.emit(self.mods(member.mods) + member.type.text() + " "
                      + self.declarators(member.declarators) + ";")
        elif isinstance(member, n.MethodDecl):
            ret = member.return_type.text() if member.return_type else "void"
            header = (self.mods(member.mods) + ret + " " + member.name
                      + "(" + self.params(member.params) + ")")
            self.open_brace(header)
            self.stmt_list(member.body.statements)
            self.close_brace()
        elif isinstance(member, n.CtorDecl):
            header = (self.mods(member.mods) + member.name
                      + "(" + self.params(member.params) + ")")
            self.open_brace(header)
            self.stmt_list(member.body.statements)
            self.close_brace()
        else:
            raise TypeError(f"unknown member {member!r}")

    def params(self, params: list[n.Param]) -> str:
        return ", ".join(p.type.text() + " " + p.name for p in params)

    def declarators(self, declarators: list[n.Declarator]) -> str:
        parts = []
        for d in declarators:
            if d.init is None:
                parts.append(d.name)
            else:
                parts.append(d.name + " = " + self.expr(d.init))
        return ", ".join(parts)

    # ------------------------------------------------------------- statements

    def stmt_list(self, statements: list[n.Stmt]):
        for stmt in statements:
            self.stmt(stmt)

    def stmt(self, stmt: n.Stmt):
        if isinstance(stmt, n.Block):
            self.open_brace("")
            self.stmt_list(stmt.statements)
            self.close_brace()
        elif isinstance(stmt, n.LocalDecl):
            self.emit(self.local_decl_text(stmt) + ";")
        elif isinstance(stmt, n.ExprStmt):
            self.emit(self.expr(stmt.expr) + ";")
        elif isinstance(stmt, n.If):
            self.if_chain(stmt)
        elif isinstance(stmt, n.While):
            self.open_brace("while (" + self.expr(stmt.cond) + ")")
            self.stmt_list(stmt.body.statements)
            self.close_brace()
        elif isinstance(stmt, n.DoWhile):
            self.open_brace("do")
            self.stmt_list(stmt.body.statements)
            self.close_brace(" while (" + self.expr(stmt.cond) + ");")
        elif isinstance(stmt, n.For):
            init = ""
            if isinstance(stmt.init, n.LocalDecl):
                init = self.local_decl_text(stmt.init)
            elif isinstance(stmt.init, n.ExprStmt):
                init = self.expr(stmt.init.expr)
            cond = self.expr(stmt.cond) if stmt.cond is not None else ""
            update = self.expr(stmt.update) if stmt.update is not None else ""
            self.open_brace(f"for ({init}; {cond}; {update})")
            self.stmt_list(stmt.body.statements)
            self.close_brace()
        elif isinstance(stmt, n.ForEach):
            header = (f"for ({stmt.var_type.text()} {stmt.var_name} : "
                      f"{self.expr(stmt.iterable)})")
            self.open_brace(header)
            self.stmt_list(stmt.body.statements)
            self.close_brace()
        elif isinstance(stmt, n.Switch):
            self.open_brace("switch (" + self.expr(stmt.selector) + ")")
            for group in stmt.groups:
                for label in group.labels:
                    if label is None:
                        self.emit("default:")
                    else:
                        self.emit("case " + format_literal(label.kind, label.value) + ":")
                self.depth += 1
                self.stmt_list(group.statements)
                self.depth -= 1
            self.close_brace()
        elif isinstance(stmt, n.Return):
            if stmt.value is None:
                self.emit("return;")
            else:
                self.emit("return " + self.expr(stmt.value) + ";")
        elif isinstance(stmt, n.Break):
            self.emit("break;")
        elif isinstance(stmt, n.Empty):
            self.emit(";")
        else:
            raise TypeError(f"unknown statement {stmt!r}")

    def if_chain(self, stmt: n.If):
        self.open_brace("if (" + self.expr(stmt.cond) + ")")
        self.stmt_list(stmt.then.statements)
        while isinstance(stmt.orelse, n.If):
            stmt = stmt.orelse
            self.depth -= 1
            if self.style.brace_next_line:
                self.emit("}")
                self.emit("else if (" + self.expr(stmt.cond) + ")")
                self.emit("{")
            else:
                self.emit("} else if (" + self.expr(stmt.cond) + ") {")
            self.depth += 1
            self.stmt_list(stmt.then.statements)
        if stmt.orelse is not None:
            self.depth -= 1
            if self.style.brace_next_line:
                self.emit("}")
                self.emit("else")
                self.emit("{")
            else:
                self.emit("} else {")
            self.depth += 1
            self.stmt_list(stmt.orelse.statements)
        self.close_brace()

    def local_decl_text(self, decl: n.LocalDecl) -> str:
        return (self.mods(decl.mods) + decl.type.text() + " "
                + self.declarators(decl.declarators))

    # ------------------------------------------------------------- expressions

    def expr(self, e: n.Expr) -> str:
        if isinstance(e, n.Literal):
            return format_literal(e.kind, e.value)
        if isinstance(e, n.Name):
            return e.id
        if isinstance(e, n.This):
            return "this"
        if isinstance(e, n.FieldAccess):
            return self.expr(e.target) + "." + e.name
        if isinstance(e, n.IndexAccess):
            return self.expr(e.target) + "[" + self.expr(e.index) + "]"
        if isinstance(e, n.Call):
            args = ", ".join(self.expr(a) for a in e.args)
            if e.target is None:
                return f"{e.name}({args})"
            return f"{self.expr(e.target)}.{e.name}({args})"
        if isinstance(e, n.New):
            args = ", ".join(self.expr(a) for a in e.args)
            return f"new {e.type.name}({args})"
        if isinstance(e, n.NewArray):
            if e.init is not None:
                values = ", ".join(self.expr(v) for v in e.init)
                return f"new {e.type.name}[] {{{values}}}"
            return f"new {e.type.name}[{self.expr(e.length)}]"
        if isinstance(e, n.ArrayInit):
            return "{" + ", ".join(self.expr(v) for v in e.values) + "}"
        if isinstance(e, n.Unary):
            sep = " " if isinstance(e.operand, (n.Unary, n.PreIncDec)) else ""
            return e.op + sep + self.expr(e.operand)
        if isinstance(e, n.PreIncDec):
            return e.op + self.expr(e.target)
        if isinstance(e, n.PostIncDec):
            return self.expr(e.target) + e.op
        if isinstance(e, n.Binary):
            return f"{self.expr(e.lhs)} {e.op} {self.expr(e.rhs)}"
        if isinstance(e, n.Conditional):
            return f"{self.expr(e.cond)} ? {self.expr(e.then)} : {self.expr(e.other)}"
        if isinstance(e, n.Assign):
            return f"{self.expr(e.target)} {e.op} {self.expr(e.value)}"
        if isinstance(e, n.Paren):
            return "(" + self.expr(e.inner) + ")"
        raise TypeError(f"unknown expression {e!r}")
