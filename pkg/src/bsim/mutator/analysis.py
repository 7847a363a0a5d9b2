"""Static helpers shared by the source transformations."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..lang import nodes as n
from ..lang.resolver import ClassInfo, ResolvedProgram

# Operator precedence for safe expression rewriting: larger binds tighter.
_PRECEDENCE = {"||": 1, "&&": 2, "==": 3, "!=": 3,
               "<": 4, "<=": 4, ">": 4, ">=": 4,
               "+": 5, "-": 5, "*": 6, "/": 6, "%": 6}

_ATOMS = (n.Literal, n.Name, n.This, n.FieldAccess, n.IndexAccess, n.Call,
          n.New, n.NewArray, n.Paren, n.PostIncDec)


def expr_precedence(e: n.Expr) -> int:
    if isinstance(e, _ATOMS):
        return 9
    if isinstance(e, (n.Unary, n.PreIncDec)):
        return 8
    if isinstance(e, n.Binary):
        return _PRECEDENCE[e.op]
    if isinstance(e, n.Conditional):
        return 0
    if isinstance(e, n.Assign):
        return -1
    return 9


def paren_if_needed(e: n.Expr, parent_op: str, right_side: bool) -> n.Expr:
    """Wrap an operand so it parses back under parent_op with the same shape."""
    parent = _PRECEDENCE[parent_op]
    prec = expr_precedence(e)
    if prec > parent:
        return e
    if prec == parent and not right_side:
        return e  # left operand of a left-associative chain
    return n.Paren(inner=e, pos=e.pos)


def has_side_effects(e: n.Expr | None) -> bool:
    """Conservative: calls, allocations, assignments and increments count."""
    if e is None:
        return False
    if isinstance(e, (n.Call, n.New, n.NewArray, n.Assign, n.PreIncDec, n.PostIncDec)):
        return True
    if isinstance(e, (n.Literal, n.Name, n.This)):
        return False
    if isinstance(e, n.FieldAccess):
        return has_side_effects(e.target)
    if isinstance(e, n.IndexAccess):
        return has_side_effects(e.target) or has_side_effects(e.index)
    if isinstance(e, n.Unary):
        return has_side_effects(e.operand)
    if isinstance(e, n.Binary):
        return has_side_effects(e.lhs) or has_side_effects(e.rhs)
    if isinstance(e, n.Conditional):
        return any(has_side_effects(x) for x in (e.cond, e.then, e.other))
    if isinstance(e, n.Paren):
        return has_side_effects(e.inner)
    if isinstance(e, n.ArrayInit):
        return any(has_side_effects(v) for v in e.values)
    return True


def child_exprs(e: n.Expr) -> list[n.Expr]:
    if isinstance(e, n.FieldAccess):
        return [e.target]
    if isinstance(e, n.IndexAccess):
        return [e.target, e.index]
    if isinstance(e, n.Call):
        return ([] if e.target is None else [e.target]) + list(e.args)
    if isinstance(e, n.New):
        return list(e.args)
    if isinstance(e, n.NewArray):
        out = [] if e.length is None else [e.length]
        return out + list(e.init or [])
    if isinstance(e, n.ArrayInit):
        return list(e.values)
    if isinstance(e, n.Unary):
        return [e.operand]
    if isinstance(e, (n.PreIncDec, n.PostIncDec)):
        return [e.target]
    if isinstance(e, n.Binary):
        return [e.lhs, e.rhs]
    if isinstance(e, n.Conditional):
        return [e.cond, e.then, e.other]
    if isinstance(e, n.Assign):
        return [e.target, e.value]
    if isinstance(e, n.Paren):
        return [e.inner]
    return []


def stmt_exprs(stmt: n.Stmt) -> list[n.Expr]:
    """Direct expression children of a statement (not recursed)."""
    if isinstance(stmt, n.LocalDecl):
        return [d.init for d in stmt.declarators if d.init is not None]
    if isinstance(stmt, n.ExprStmt):
        return [stmt.expr]
    if isinstance(stmt, n.If):
        return [stmt.cond]
    if isinstance(stmt, (n.While, n.DoWhile)):
        return [stmt.cond]
    if isinstance(stmt, n.For):
        return [x for x in (stmt.cond, stmt.update) if x is not None]
    if isinstance(stmt, n.ForEach):
        return [stmt.iterable]
    if isinstance(stmt, n.Switch):
        return [stmt.selector]
    if isinstance(stmt, n.Return):
        return [] if stmt.value is None else [stmt.value]
    return []


def child_stmts(stmt: n.Stmt) -> list[n.Stmt]:
    if isinstance(stmt, n.Block):
        return list(stmt.statements)
    if isinstance(stmt, n.If):
        return [stmt.then] + ([stmt.orelse] if stmt.orelse is not None else [])
    if isinstance(stmt, (n.While, n.DoWhile)):
        return [stmt.body]
    if isinstance(stmt, n.For):
        return ([stmt.init] if stmt.init is not None else []) + [stmt.body]
    if isinstance(stmt, n.ForEach):
        return [stmt.body]
    if isinstance(stmt, n.Switch):
        return [s for g in stmt.groups for s in g.statements]
    return []


def walk_stmts(root: n.Stmt):
    """Pre-order over a statement tree."""
    stack = [root]
    while stack:
        stmt = stack.pop()
        yield stmt
        stack.extend(reversed(child_stmts(stmt)))


def walk_exprs_deep(e: n.Expr):
    stack = [e]
    while stack:
        cur = stack.pop()
        yield cur
        stack.extend(reversed(child_exprs(cur)))


def all_exprs_in(stmt: n.Stmt):
    for s in walk_stmts(stmt):
        for e in stmt_exprs(s):
            yield from walk_exprs_deep(e)


def names_read(e: n.Expr) -> set[str]:
    """Bare identifiers appearing in value position (not member names)."""
    out: set[str] = set()
    for cur in walk_exprs_deep(e):
        if isinstance(cur, n.Name):
            out.add(cur.id)
    return out


def mentions_name(stmt: n.Stmt, name: str) -> bool:
    for e in all_exprs_in(stmt):
        if isinstance(e, n.Name) and e.id == name:
            return True
    return False


def collect_identifiers(asts: list[n.Ast]) -> set[str]:
    """Every identifier appearing anywhere: declaration or reference."""
    out: set[str] = set()

    def take_type(ty: n.TypeRef | None):
        if ty is not None:
            out.add(ty.name)

    for ast in asts:
        for cls in ast.classes:
            out.add(cls.name)
            if cls.superclass:
                out.add(cls.superclass)
            for m in cls.members:
                if isinstance(m, n.FieldDecl):
                    take_type(m.type)
                    for d in m.declarators:
                        out.add(d.name)
                        if d.init is not None:
                            _expr_idents(d.init, out)
                else:
                    out.add(m.name)
                    if isinstance(m, n.MethodDecl):
                        take_type(m.return_type)
                    for p in m.params:
                        take_type(p.type)
                        out.add(p.name)
                    for stmt in walk_stmts(m.body):
                        if isinstance(stmt, n.LocalDecl):
                            take_type(stmt.type)
                            for d in stmt.declarators:
                                out.add(d.name)
                        if isinstance(stmt, n.ForEach):
                            take_type(stmt.var_type)
                            out.add(stmt.var_name)
                        for e in stmt_exprs(stmt):
                            _expr_idents(e, out)
    return out


def _expr_idents(e: n.Expr, out: set[str]):
    for cur in walk_exprs_deep(e):
        if isinstance(cur, n.Name):
            out.add(cur.id)
        elif isinstance(cur, n.FieldAccess):
            out.add(cur.name)
        elif isinstance(cur, n.Call):
            out.add(cur.name)
        elif isinstance(cur, (n.New, n.NewArray)):
            out.add(cur.type.name)


def transform_expr(e: n.Expr, fn) -> n.Expr:
    """Rebuild an expression tree bottom-up through fn.

    fn(expr) returns a replacement node or None to keep the node (children
    are still rewritten in place).
    """
    replacement = fn(e)
    if replacement is not None and replacement is not e:
        return replacement
    if isinstance(e, n.FieldAccess):
        e.target = transform_expr(e.target, fn)
    elif isinstance(e, n.IndexAccess):
        e.target = transform_expr(e.target, fn)
        e.index = transform_expr(e.index, fn)
    elif isinstance(e, n.Call):
        if e.target is not None:
            e.target = transform_expr(e.target, fn)
        e.args = [transform_expr(a, fn) for a in e.args]
    elif isinstance(e, n.New):
        e.args = [transform_expr(a, fn) for a in e.args]
    elif isinstance(e, n.NewArray):
        if e.length is not None:
            e.length = transform_expr(e.length, fn)
        if e.init is not None:
            e.init = [transform_expr(v, fn) for v in e.init]
    elif isinstance(e, n.ArrayInit):
        e.values = [transform_expr(v, fn) for v in e.values]
    elif isinstance(e, n.Unary):
        e.operand = transform_expr(e.operand, fn)
    elif isinstance(e, (n.PreIncDec, n.PostIncDec)):
        e.target = transform_expr(e.target, fn)
    elif isinstance(e, n.Binary):
        e.lhs = transform_expr(e.lhs, fn)
        e.rhs = transform_expr(e.rhs, fn)
    elif isinstance(e, n.Conditional):
        e.cond = transform_expr(e.cond, fn)
        e.then = transform_expr(e.then, fn)
        e.other = transform_expr(e.other, fn)
    elif isinstance(e, n.Assign):
        e.target = transform_expr(e.target, fn)
        e.value = transform_expr(e.value, fn)
    elif isinstance(e, n.Paren):
        e.inner = transform_expr(e.inner, fn)
    return e


def transform_stmt_exprs(stmt: n.Stmt, fn):
    """Apply transform_expr to every expression slot under a statement."""
    if isinstance(stmt, n.LocalDecl):
        for d in stmt.declarators:
            if d.init is not None:
                d.init = transform_expr(d.init, fn)
    elif isinstance(stmt, n.ExprStmt):
        stmt.expr = transform_expr(stmt.expr, fn)
    elif isinstance(stmt, n.If):
        stmt.cond = transform_expr(stmt.cond, fn)
    elif isinstance(stmt, (n.While, n.DoWhile)):
        stmt.cond = transform_expr(stmt.cond, fn)
    elif isinstance(stmt, n.For):
        if stmt.cond is not None:
            stmt.cond = transform_expr(stmt.cond, fn)
        if stmt.update is not None:
            stmt.update = transform_expr(stmt.update, fn)
    elif isinstance(stmt, n.ForEach):
        stmt.iterable = transform_expr(stmt.iterable, fn)
    elif isinstance(stmt, n.Switch):
        stmt.selector = transform_expr(stmt.selector, fn)
    elif isinstance(stmt, n.Return) and stmt.value is not None:
        stmt.value = transform_expr(stmt.value, fn)
    for child in child_stmts(stmt):
        transform_stmt_exprs(child, fn)


@dataclass
class Scopes:
    frames: list[dict[str, n.TypeRef]] = field(default_factory=lambda: [{}])

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


@dataclass
class InferCtx:
    """Adapter giving resolver.infer_static_type what it needs inside the mutator."""

    program: ResolvedProgram
    cls: ClassInfo
    scopes: Scopes
    static_ctx: bool = False

    def classify_base(self, name: n.Name) -> str:
        if self.scopes.lookup(name.id) is not None:
            return "local"
        finfo = self.program.lookup_field(self.cls.name, name.id)
        if finfo is not None:
            return "static_field" if finfo.static else "field"
        if name.id in self.program.classes:
            return "class"
        return "boundary_type"
