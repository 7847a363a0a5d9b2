"""The 19 semantics-preserving source transformations, by taxonomy level.

L1  reformat source
L2  rename identifiers; qualify type names; replace static field access /
    static method call with unqualified ("static import") access
L3  change access modifiers; move field assignment to initializer; declare
    redundant constants; add synchronized; assign default value; move
    declarations to block start; rearrange member declarations
L4  extract block to new method
L5  expand compound assignment; expand prefix/postfix; for to while; switch
    to if; replace literal with static constant; surround with brackets

Two transformations inject values (new data reachable in traces): declaring
redundant constants and assigning default values. Everything else leaves the
recorded behaviour equivalent up to renamed source-defined identifiers and
reordered independent events; several are trace-identical by construction
because the instruction lowering of the original and rewritten forms agree.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass

from ..lang import nodes as n
from ..lang.printer import Style
from ..lang.resolver import infer_static_type
from . import analysis as a

ACCESS_MODS = ("public", "private", "protected")

ALT_STYLES = (
    Style(indent=4, brace_next_line=False, blank_between_members=True),
    Style(indent=2, brace_next_line=False, blank_between_members=False),
    Style(indent=4, brace_next_line=True, blank_between_members=True),
    Style(indent=8, brace_next_line=False, blank_between_members=True),
    Style(indent=2, brace_next_line=True, blank_between_members=True),
)

_ZERO = {"byte": ("int", 0), "short": ("int", 0), "int": ("int", 0),
         "long": ("long", 0), "float": ("float", 0.0), "double": ("double", 0.0),
         "char": ("char", "\0"), "boolean": ("boolean", False)}

_CONSTANT_POOL = (7, 13, 31, 42, 99, 1000)

_LITERAL_FIELD_TYPE = {"int": "int", "long": "long", "float": "float",
                       "double": "double", "char": "char", "boolean": "boolean",
                       "string": "String"}


@dataclass(frozen=True)
class Site:
    descriptor: str
    payload: tuple = ()


class Transformation:
    name: str = ""
    level: int = 0
    value_injecting: bool = False

    def sites(self, mp) -> list[Site]:
        raise NotImplementedError

    def apply(self, mp, sites: list[Site], rng) -> None:
        raise NotImplementedError


def iter_callables(mp):
    """(unit index, class decl, member) for every method and constructor."""
    for ui, ast in enumerate(mp.asts):
        for cls in ast.classes:
            for member in cls.members:
                if isinstance(member, (n.MethodDecl, n.CtorDecl)):
                    yield ui, cls, member


def member_path(cls: n.ClassDecl, member) -> str:
    if isinstance(member, n.MethodDecl):
        return f"{cls.name}.{member.name}/{member.arity}"
    if isinstance(member, n.CtorDecl):
        return f"{cls.name}.<init>/{member.arity}"
    return f"{cls.name}.{member.declarators[0].name}"


class _ScopedWalk:
    """Statement walk with scope tracking for one callable body."""

    def __init__(self, mp, cls: n.ClassDecl, member):
        self.ctx = a.InferCtx(program=mp.program,
                              cls=mp.program.classes[cls.name],
                              scopes=a.Scopes(),
                              static_ctx=getattr(member, "is_static", lambda: False)()
                              if isinstance(member, n.MethodDecl) else False)
        for p in member.params:
            self.ctx.scopes.declare(p.name, p.type)
        self.member = member

    def walk(self, on_stmt=None, on_expr=None):
        self._block(self.member.body, on_stmt, on_expr)

    def _block(self, block: n.Block, on_stmt, on_expr):
        self.ctx.scopes.push()
        for stmt in block.statements:
            self._stmt(stmt, on_stmt, on_expr)
        self.ctx.scopes.pop()

    def _stmt(self, stmt: n.Stmt, on_stmt, on_expr):
        if on_stmt is not None:
            on_stmt(stmt, self.ctx)
        if isinstance(stmt, n.Block):
            self._block(stmt, on_stmt, on_expr)
            return
        if isinstance(stmt, n.For):
            self.ctx.scopes.push()
            if stmt.init is not None:
                self._stmt(stmt.init, on_stmt, on_expr)
            for e in (stmt.cond, stmt.update):
                if e is not None:
                    self._expr(e, on_expr)
            self._block(stmt.body, on_stmt, on_expr)
            self.ctx.scopes.pop()
            return
        if isinstance(stmt, n.ForEach):
            self._expr(stmt.iterable, on_expr)
            self.ctx.scopes.push()
            self.ctx.scopes.declare(stmt.var_name, stmt.var_type)
            self._block(stmt.body, on_stmt, on_expr)
            self.ctx.scopes.pop()
            return
        for e in a.stmt_exprs(stmt):
            self._expr(e, on_expr)
        if isinstance(stmt, n.LocalDecl):
            for d in stmt.declarators:
                self.ctx.scopes.declare(d.name, stmt.type)
        if isinstance(stmt, n.If):
            self._block(stmt.then, on_stmt, on_expr)
            if stmt.orelse is not None:
                self._stmt(stmt.orelse, on_stmt, on_expr)
        elif isinstance(stmt, (n.While, n.DoWhile)):
            self._block(stmt.body, on_stmt, on_expr)
        elif isinstance(stmt, n.Switch):
            for group in stmt.groups:
                self.ctx.scopes.push()
                for s in group.statements:
                    self._stmt(s, on_stmt, on_expr)
                self.ctx.scopes.pop()

    def _expr(self, e: n.Expr, on_expr):
        if on_expr is not None:
            on_expr(e, self.ctx)
        for child in a.child_exprs(e):
            self._expr(child, on_expr)


# =====================================================================
# L1
# =====================================================================

class ReformatSource(Transformation):
    name = "reformat source code"
    level = 1

    def sites(self, mp) -> list[Site]:
        return [Site(f"unit {path}", (ui,)) for ui, path in enumerate(mp.paths)]

    def apply(self, mp, sites, rng):
        for site in sites:
            ui = site.payload[0]
            current = mp.styles[ui]
            others = [s for s in ALT_STYLES if s != current]
            mp.styles[ui] = others[rng.randrange(len(others))]


# =====================================================================
# L2
# =====================================================================

def _group_key(program, class_name: str, name: str, arity: int) -> tuple:
    """Identify an override group by its topmost declaring class."""
    root = None
    for info in program.superchain(class_name):
        if (name, arity) in info.methods:
            root = info.name
    return (root, name, arity)


class RenameIdentifiers(Transformation):
    name = "rename identifiers"
    level = 2

    def sites(self, mp) -> list[Site]:
        program = mp.program
        out: list[Site] = []
        for cname in program.class_order:
            out.append(Site(f"class {cname}", ("class", cname)))
        seen_groups: set[tuple] = set()
        for cname in program.class_order:
            info = program.classes[cname]
            for (mname, arity) in info.methods:
                if mname == "main":
                    continue  # entry-point contract
                key = _group_key(program, cname, mname, arity)
                if key not in seen_groups:
                    seen_groups.add(key)
                    out.append(Site(f"method {key[0]}.{mname}/{arity}",
                                    ("method", key)))
            for fname in info.field_order:
                out.append(Site(f"field {cname}.{fname}", ("field", (cname, fname))))
        for ui, cls, member in iter_callables(mp):
            local_names: list[str] = [p.name for p in member.params]
            for stmt in a.walk_stmts(member.body):
                if isinstance(stmt, n.LocalDecl):
                    local_names.extend(d.name for d in stmt.declarators)
                elif isinstance(stmt, n.ForEach):
                    local_names.append(stmt.var_name)
            path = member_path(cls, member)
            for lname in local_names:
                out.append(Site(f"local {path}:{lname}",
                                ("local", (cls.name, id(member), lname))))
        return out

    def apply(self, mp, sites, rng):
        program = mp.program
        class_map: dict[str, str] = {}
        method_map: dict[tuple, str] = {}
        field_map: dict[tuple[str, str], str] = {}
        local_maps: dict[int, dict[str, str]] = {}
        for site in sites:
            kind, payload = site.payload
            if kind == "class":
                class_map[payload] = mp.fresh_name("cls")
            elif kind == "method":
                method_map[payload] = mp.fresh_name("fn")
            elif kind == "field":
                field_map[payload] = mp.fresh_name("fld")
            else:
                cls_name, member_id, lname = payload
                local_maps.setdefault(member_id, {})[lname] = mp.fresh_name("v")

        def rename_type(ty: n.TypeRef | None):
            if ty is not None and ty.name in class_map:
                ty.name = class_map[ty.name]

        def field_target(owner_class: str, fname: str) -> str | None:
            finfo = program.lookup_field(owner_class, fname)
            if finfo is None:
                return None
            return field_map.get((finfo.declaring_class, fname))

        def method_target(owner_class: str, mname: str, arity: int) -> str | None:
            if program.lookup_method(owner_class, mname, arity) is None:
                return None
            return method_map.get(_group_key(program, owner_class, mname, arity))

        for ui, cls, member in iter_callables(mp):
            lmap = local_maps.get(id(member), {})
            decisions: list[tuple] = []
            walker = _ScopedWalk(mp, cls, member)

            def on_expr(e, ctx, lmap=lmap, decisions=decisions, cls=cls):
                if isinstance(e, n.Name):
                    kind = ctx.classify_base(e)
                    if kind == "local":
                        if e.id in lmap:
                            decisions.append((e, "id", lmap[e.id]))
                    elif kind in ("field", "static_field"):
                        new = field_target(cls.name, e.id)
                        if new:
                            decisions.append((e, "id", new))
                elif isinstance(e, n.FieldAccess):
                    if isinstance(e.target, n.Name):
                        kind = ctx.classify_base(e.target)
                        if kind == "class":
                            new = field_target(e.target.id, e.name)
                            if new:
                                decisions.append((e, "name", new))
                            if e.target.id in class_map:
                                decisions.append((e.target, "id", class_map[e.target.id]))
                            return
                        if kind == "boundary_type":
                            return
                    ty = infer_static_type(e.target, ctx)
                    if ty is not None and not ty.is_array() and ty.name in program.classes:
                        new = field_target(ty.name, e.name)
                        if new:
                            decisions.append((e, "name", new))
                elif isinstance(e, n.Call):
                    if e.target is None:
                        new = method_target(cls.name, e.name, len(e.args))
                        if new:
                            decisions.append((e, "name", new))
                        return
                    if isinstance(e.target, n.Name):
                        kind = ctx.classify_base(e.target)
                        if kind == "class":
                            new = method_target(e.target.id, e.name, len(e.args))
                            if new:
                                decisions.append((e, "name", new))
                            if e.target.id in class_map:
                                decisions.append((e.target, "id", class_map[e.target.id]))
                            return
                        if kind == "boundary_type":
                            return
                    ty = infer_static_type(e.target, ctx)
                    if ty is not None and not ty.is_array() and ty.name in program.classes:
                        new = method_target(ty.name, e.name, len(e.args))
                        if new:
                            decisions.append((e, "name", new))

            walker.walk(on_expr=on_expr)
            for node, attr, value in decisions:
                setattr(node, attr, value)
            # declaration-side renames for this callable
            for p in member.params:
                rename_type(p.type)
                if p.name in lmap:
                    p.name = lmap[p.name]
            for stmt in a.walk_stmts(member.body):
                if isinstance(stmt, n.LocalDecl):
                    rename_type(stmt.type)
                    for d in stmt.declarators:
                        if d.name in lmap:
                            d.name = lmap[d.name]
                elif isinstance(stmt, n.ForEach):
                    rename_type(stmt.var_type)
                    if stmt.var_name in lmap:
                        stmt.var_name = lmap[stmt.var_name]
                for e in a.stmt_exprs(stmt):
                    for sub in a.walk_exprs_deep(e):
                        if isinstance(sub, (n.New, n.NewArray)):
                            rename_type(sub.type)
            if isinstance(member, n.MethodDecl):
                rename_type(member.return_type)
                new = method_map.get(_group_key(program, cls.name, member.name,
                                                member.arity))
                if new:
                    member.name = new

        for ast in mp.asts:
            for cls in ast.classes:
                for m in cls.members:
                    if isinstance(m, n.FieldDecl):
                        rename_type(m.type)
                        for d in m.declarators:
                            new = field_map.get((cls.name, d.name))
                            if new:
                                d.name = new
                            if d.init is not None:
                                self._rename_init_expr(mp, cls, d.init, class_map,
                                                       field_map, method_map)
                    elif isinstance(m, n.CtorDecl):
                        if cls.name in class_map:
                            m.name = class_map[cls.name]
                if cls.superclass and cls.superclass in class_map:
                    cls.superclass = class_map[cls.superclass]
                if cls.name in class_map:
                    cls.name = class_map[cls.name]

    def _rename_init_expr(self, mp, cls, expr, class_map, field_map, method_map):
        """Field initializers: no locals in scope, classify against the class."""
        program = mp.program
        ctx = a.InferCtx(program=program, cls=program.classes[cls.name],
                         scopes=a.Scopes())
        decisions = []

        def visit(e):
            if isinstance(e, n.Name):
                finfo = program.lookup_field(cls.name, e.id)
                if finfo is not None:
                    new = field_map.get((finfo.declaring_class, e.id))
                    if new:
                        decisions.append((e, "id", new))
            elif isinstance(e, n.FieldAccess) and isinstance(e.target, n.Name):
                if ctx.classify_base(e.target) == "class":
                    finfo = program.lookup_field(e.target.id, e.name)
                    if finfo is not None:
                        new = field_map.get((finfo.declaring_class, e.name))
                        if new:
                            decisions.append((e, "name", new))
                    if e.target.id in class_map:
                        decisions.append((e.target, "id", class_map[e.target.id]))
            elif isinstance(e, n.Call):
                if e.target is None:
                    new = method_map.get(_group_key(program, cls.name, e.name,
                                                    len(e.args))) \
                        if program.lookup_method(cls.name, e.name, len(e.args)) else None
                    if new:
                        decisions.append((e, "name", new))
                elif isinstance(e.target, n.Name) and ctx.classify_base(e.target) == "class":
                    if program.lookup_method(e.target.id, e.name, len(e.args)):
                        new = method_map.get(_group_key(program, e.target.id, e.name,
                                                        len(e.args)))
                        if new:
                            decisions.append((e, "name", new))
                    if e.target.id in class_map:
                        decisions.append((e.target, "id", class_map[e.target.id]))
            elif isinstance(e, (n.New, n.NewArray)):
                if e.type.name in class_map:
                    decisions.append((e.type, "name", class_map[e.type.name]))
            for child in a.child_exprs(e):
                visit(child)

        visit(expr)
        for node, attr, value in decisions:
            setattr(node, attr, value)


class QualifyTypeNames(Transformation):
    """Qualify own-class static access with the declaring type name."""

    name = "qualify/de-qualify type names"
    level = 2

    def sites(self, mp) -> list[Site]:
        out: list[Site] = []
        program = mp.program
        for ui, cls, member in iter_callables(mp):
            walker = _ScopedWalk(mp, cls, member)
            path = member_path(cls, member)
            count = [0]

            def on_expr(e, ctx, out=out, path=path, count=count, cls=cls):
                count[0] += 1
                if isinstance(e, n.Name) and ctx.classify_base(e) == "static_field":
                    finfo = program.lookup_field(cls.name, e.id)
                    out.append(Site(f"{path}: qualify field #{count[0]}",
                                    ("field", e, finfo.declaring_class)))
                elif isinstance(e, n.Call) and e.target is None:
                    found = program.lookup_method(cls.name, e.name, len(e.args))
                    if found is not None and found[1].is_static():
                        out.append(Site(f"{path}: qualify call #{count[0]}",
                                        ("call", e, found[0].name)))

            walker.walk(on_expr=on_expr)
        return out

    def apply(self, mp, sites, rng):
        replacements = {}
        for site in sites:
            kind, node, class_name = site.payload
            if kind == "call":
                node.target = n.Name(id=class_name, pos=node.pos)
            else:
                replacements[id(node)] = n.FieldAccess(
                    target=n.Name(id=class_name, pos=node.pos),
                    name=node.id, pos=node.pos)
        if replacements:
            _replace_by_id(mp, replacements)


def _replace_by_id(mp, replacements: dict[int, n.Expr]):
    def fn(e):
        return replacements.get(id(e))

    for _, cls, member in iter_callables(mp):
        a.transform_stmt_exprs(member.body, fn)
    for ast in mp.asts:
        for cls in ast.classes:
            for m in cls.members:
                if isinstance(m, n.FieldDecl):
                    for d in m.declarators:
                        if d.init is not None:
                            d.init = a.transform_expr(d.init, fn)


class StaticFieldImport(Transformation):
    """De-qualify static field access where the bare name still resolves."""

    name = "replace static field access with static import"
    level = 2

    def sites(self, mp) -> list[Site]:
        out: list[Site] = []
        program = mp.program
        for ui, cls, member in iter_callables(mp):
            walker = _ScopedWalk(mp, cls, member)
            path = member_path(cls, member)
            count = [0]

            def on_expr(e, ctx, out=out, path=path, count=count, cls=cls):
                count[0] += 1
                if not (isinstance(e, n.FieldAccess) and isinstance(e.target, n.Name)):
                    return
                if ctx.classify_base(e.target) != "class":
                    return
                target_field = program.lookup_field(e.target.id, e.name)
                if target_field is None or not target_field.static:
                    return
                if ctx.scopes.lookup(e.name) is not None:
                    return  # a local shadows the bare name
                unqualified = program.lookup_field(cls.name, e.name)
                if unqualified is not target_field:
                    return
                out.append(Site(f"{path}: de-qualify field #{count[0]}", (e,)))

            walker.walk(on_expr=on_expr)
        return out

    def apply(self, mp, sites, rng):
        replacements = {id(site.payload[0]):
                        n.Name(id=site.payload[0].name, pos=site.payload[0].pos)
                        for site in sites}
        _replace_by_id(mp, replacements)


class StaticMethodImport(Transformation):
    """De-qualify static method calls where the bare name still resolves."""

    name = "replace static method call with static import"
    level = 2

    def sites(self, mp) -> list[Site]:
        out: list[Site] = []
        program = mp.program
        for ui, cls, member in iter_callables(mp):
            walker = _ScopedWalk(mp, cls, member)
            path = member_path(cls, member)
            count = [0]

            def on_expr(e, ctx, out=out, path=path, count=count, cls=cls):
                count[0] += 1
                if not (isinstance(e, n.Call) and isinstance(e.target, n.Name)):
                    return
                if ctx.classify_base(e.target) != "class":
                    return
                target = program.lookup_method(e.target.id, e.name, len(e.args))
                if target is None or not target[1].is_static():
                    return
                unqualified = program.lookup_method(cls.name, e.name, len(e.args))
                if unqualified is None or unqualified[1] is not target[1]:
                    return
                out.append(Site(f"{path}: de-qualify call #{count[0]}", (e,)))

            walker.walk(on_expr=on_expr)
        return out

    def apply(self, mp, sites, rng):
        for site in sites:
            site.payload[0].target = None


# =====================================================================
# L3
# =====================================================================

class ChangeAccessModifiers(Transformation):
    name = "change access modifiers"
    level = 3

    def sites(self, mp) -> list[Site]:
        out = []
        for ui, ast in enumerate(mp.asts):
            for cls in ast.classes:
                out.append(Site(f"class {cls.name}", (cls,)))
                for m in cls.members:
                    out.append(Site(f"member {member_path(cls, m)}", (m,)))
        return out

    def apply(self, mp, sites, rng):
        for site in sites:
            decl = site.payload[0]
            current = next((m for m in decl.mods if m in ACCESS_MODS), None)
            cycle = [*ACCESS_MODS, None]
            replacement = cycle[(cycle.index(current) + 1) % len(cycle)]
            decl.mods = [m for m in decl.mods if m not in ACCESS_MODS]
            if replacement is not None:
                decl.mods.insert(0, replacement)


class MoveFieldAssignmentToInitializer(Transformation):
    """Move instance-field initializers into the start of each constructor."""

    name = "move field assignment to initialiser block"
    level = 3

    def sites(self, mp) -> list[Site]:
        out = []
        for ui, ast in enumerate(mp.asts):
            for cls in ast.classes:
                for m in cls.members:
                    if not isinstance(m, n.FieldDecl) or m.is_static():
                        continue
                    for d in m.declarators:
                        if d.init is not None:
                            out.append(Site(f"field {cls.name}.{d.name}", (cls, m, d)))
        return out

    def apply(self, mp, sites, rng):
        inserted: dict[int, int] = {}
        for site in sites:
            cls, fdecl, d = site.payload
            init = d.init
            d.init = None
            if isinstance(init, n.ArrayInit):
                init = n.NewArray(type=n.TypeRef(name=fdecl.type.name, dims=0),
                                  length=None, init=init.values, pos=init.pos)
            ctors = [m for m in cls.members if isinstance(m, n.CtorDecl)]
            if not ctors:
                ctor = n.CtorDecl(mods=["public"], name=cls.name, params=[],
                                  body=n.Block(statements=[]))
                cls.members.append(ctor)
                ctors = [ctor]
            for ctor in ctors:
                at = inserted.get(id(ctor), 0)
                assign = n.ExprStmt(expr=n.Assign(
                    target=n.FieldAccess(target=n.This(), name=d.name),
                    op="=", value=copy.deepcopy(init)))
                ctor.body.statements.insert(at, assign)
                inserted[id(ctor)] = at + 1


class DeclareRedundantConstants(Transformation):
    name = "declare redundant constants"
    level = 3
    value_injecting = True

    def sites(self, mp) -> list[Site]:
        return [Site(f"class {cls.name}", (cls,))
                for ast in mp.asts for cls in ast.classes]

    def apply(self, mp, sites, rng):
        for site in sites:
            cls = site.payload[0]
            value = _CONSTANT_POOL[rng.randrange(len(_CONSTANT_POOL))]
            # plain static (not final): initialization executes and is recorded
            cls.members.append(n.FieldDecl(
                mods=["private", "static"],
                type=n.TypeRef(name="int", dims=0),
                declarators=[n.Declarator(name=mp.fresh_name("unused"),
                                          init=n.Literal(kind="int", value=value))]))


class AddSynchronizedModifier(Transformation):
    name = "add synchronised modifier"
    level = 3

    def sites(self, mp) -> list[Site]:
        out = []
        for ui, ast in enumerate(mp.asts):
            for cls in ast.classes:
                for m in cls.members:
                    if isinstance(m, n.MethodDecl) and "synchronized" not in m.mods:
                        out.append(Site(f"method {member_path(cls, m)}", (m,)))
        return out

    def apply(self, mp, sites, rng):
        for site in sites:
            site.payload[0].mods.append("synchronized")


class AssignDefaultValue(Transformation):
    name = "assign default value to variable declaration"
    level = 3
    value_injecting = True

    def sites(self, mp) -> list[Site]:
        out = []
        for ui, ast in enumerate(mp.asts):
            for cls in ast.classes:
                for m in cls.members:
                    if isinstance(m, n.FieldDecl) and not m.type.is_array() \
                            and m.type.name in _ZERO:
                        for d in m.declarators:
                            if d.init is None:
                                out.append(Site(f"field {cls.name}.{d.name}",
                                                (m.type, d)))
        for ui, cls, member in iter_callables(mp):
            path = member_path(cls, member)
            for stmt in a.walk_stmts(member.body):
                if isinstance(stmt, n.LocalDecl) and not stmt.type.is_array() \
                        and stmt.type.name in _ZERO:
                    for d in stmt.declarators:
                        if d.init is None:
                            out.append(Site(f"local {path}:{d.name}", (stmt.type, d)))
        return out

    def apply(self, mp, sites, rng):
        for site in sites:
            ty, d = site.payload
            kind, value = _ZERO[ty.name]
            d.init = n.Literal(kind=kind, value=value)


class MoveDeclarationsToBlockStart(Transformation):
    name = "move variable declarations to start of block"
    level = 3

    def sites(self, mp) -> list[Site]:
        out = []
        for ui, cls, member in iter_callables(mp):
            path = member_path(cls, member)
            for stmt in a.walk_stmts(member.body):
                if not isinstance(stmt, n.Block):
                    continue
                leading = 0
                while leading < len(stmt.statements) and \
                        isinstance(stmt.statements[leading], n.LocalDecl):
                    leading += 1
                for k in range(leading, len(stmt.statements)):
                    decl = stmt.statements[k]
                    if not isinstance(decl, n.LocalDecl):
                        continue
                    names = {d.name for d in decl.declarators}
                    if any(a.mentions_name(prev, name)
                           for prev in stmt.statements[:k] for name in names):
                        continue
                    if any(d.init is not None and
                           (a.names_read(d.init) & names or
                            isinstance(d.init, n.ArrayInit))
                           for d in decl.declarators):
                        continue
                    out.append(Site(f"{path}: declaration of "
                                    f"{','.join(sorted(names))}", (stmt, decl)))
        return out

    def apply(self, mp, sites, rng):
        by_block: dict[int, list] = {}
        blocks: dict[int, n.Block] = {}
        for site in sites:
            block, decl = site.payload
            by_block.setdefault(id(block), []).append(decl)
            blocks[id(block)] = block
        for bid, decls in by_block.items():
            block = blocks[bid]
            cursor = 0
            for decl in decls:  # declaration order is site order
                at = block.statements.index(decl)
                replacement: list[n.Stmt] = []
                for d in decl.declarators:
                    if d.init is not None:
                        replacement.append(n.ExprStmt(expr=n.Assign(
                            target=n.Name(id=d.name), op="=", value=d.init)))
                        d.init = None
                block.statements[at:at + 1] = replacement
                block.statements.insert(cursor, decl)
                cursor += 1


class RearrangeMemberDeclarations(Transformation):
    name = "rearrange member (methods, fields) declarations"
    level = 3

    def sites(self, mp) -> list[Site]:
        return [Site(f"class {cls.name}", (cls,))
                for ast in mp.asts for cls in ast.classes if len(cls.members) >= 2]

    def apply(self, mp, sites, rng):
        for site in sites:
            cls = site.payload[0]
            cls.members.append(cls.members.pop(0))


# =====================================================================
# L4
# =====================================================================

class ExtractBlockToMethod(Transformation):
    """Extract maximal straight-line statement runs into fresh methods."""

    name = "extract block to new method"
    level = 4

    def sites(self, mp) -> list[Site]:
        out = []
        for ui, cls, member in iter_callables(mp):
            if isinstance(member, n.CtorDecl):
                continue  # constructors reference uninitialized state too freely
            path = member_path(cls, member)
            order: list[n.Stmt] = list(a.walk_stmts(member.body))
            position = {id(s): k for k, s in enumerate(order)}
            scopes = self._declared_types(member)
            for stmt in order:
                if not isinstance(stmt, n.Block):
                    continue
                run: list[int] = []
                for k, s in enumerate(stmt.statements + [None]):
                    if s is not None and isinstance(s, (n.LocalDecl, n.ExprStmt)):
                        run.append(k)
                        continue
                    if len(run) >= 2:
                        site = self._analyze_run(mp, cls, member, stmt, run,
                                                 position, scopes, path)
                        if site is not None:
                            out.append(site)
                    run = []
        return out

    def _declared_types(self, member) -> dict[str, n.TypeRef]:
        types = {p.name: p.type for p in member.params}
        for stmt in a.walk_stmts(member.body):
            if isinstance(stmt, n.LocalDecl):
                for d in stmt.declarators:
                    types[d.name] = stmt.type
            elif isinstance(stmt, n.ForEach):
                types[stmt.var_name] = stmt.var_type
        return types

    def _analyze_run(self, mp, cls, member, block, run, position, types, path):
        statements = [block.statements[k] for k in run]
        first_pos = position[id(statements[0])]
        declared_before: set[str] = {p.name for p in member.params}
        for s in a.walk_stmts(member.body):
            if position[id(s)] >= first_pos:
                break
            if isinstance(s, n.LocalDecl):
                declared_before.update(d.name for d in s.declarators)
            elif isinstance(s, n.ForEach):
                declared_before.add(s.var_name)
        reads: list[str] = []
        writes: list[str] = []
        declared_in: set[str] = set()
        for s in statements:
            if isinstance(s, n.LocalDecl):
                for d in s.declarators:
                    if d.init is not None:
                        self._scan_expr(d.init, declared_in, reads, writes)
                    declared_in.add(d.name)
            else:
                self._scan_expr(s.expr, declared_in, reads, writes)
        params: list[tuple[str, n.TypeRef]] = []
        seen: set[str] = set()
        for name in reads:
            if name in declared_in or name in seen:
                continue
            seen.add(name)
            if name in declared_before:
                params.append((name, types[name]))
            elif name in types:
                return None  # binds to a field here but a local later: ambiguous
        # live-out: written or declared names referenced after the run
        last_pos = position[id(statements[-1])]
        run_ids = {id(x) for x in statements}
        after = [s for s in a.walk_stmts(member.body)
                 if position[id(s)] > last_pos and id(s) not in run_ids]
        live_out = []
        for name in dict.fromkeys(writes + sorted(declared_in)):
            if name not in declared_before and name not in declared_in:
                continue  # field writes happen in place; no hand-back needed
            if any(a.mentions_name(s, name) for s in after):
                live_out.append(name)
        if len(live_out) > 1:
            return None
        result = live_out[0] if live_out else None
        result_type = types.get(result) if result is not None else None
        if result is not None and result_type is None:
            return None
        desc = f"{path}: statements {run[0]}..{run[-1]} of a block"
        return Site(desc, (cls, member, block, tuple(run), tuple(params),
                           result, result_type, tuple(declared_in)))

    def _scan_expr(self, e: n.Expr, declared_in: set[str], reads: list[str],
                   writes: list[str]):
        for sub in a.walk_exprs_deep(e):
            if isinstance(sub, n.Assign) and isinstance(sub.target, n.Name):
                writes.append(sub.target.id)
            elif isinstance(sub, (n.PreIncDec, n.PostIncDec)) and \
                    isinstance(sub.target, n.Name):
                writes.append(sub.target.id)
                reads.append(sub.target.id)
            elif isinstance(sub, n.Name):
                reads.append(sub.id)

    def apply(self, mp, sites, rng):
        # apply later runs first so earlier indices stay valid within a block
        groups: dict[int, list[Site]] = {}
        group_order: list[int] = []
        for site in sites:
            bid = id(site.payload[2])
            if bid not in groups:
                groups[bid] = []
                group_order.append(bid)
            groups[bid].append(site)
        ordered = [site for bid in group_order
                   for site in sorted(groups[bid], key=lambda s: -s.payload[3][0])]
        for site in ordered:
            cls, member, block, run, params, result, result_type, declared_in = \
                site.payload
            name = mp.fresh_name("part")
            statements = [block.statements[k] for k in run]
            body = list(statements)
            if result is not None:
                body.append(n.Return(value=n.Name(id=result)))
            mods = ["static"] if getattr(member, "is_static", lambda: False)() else []
            if result is None:
                rtype = None
            elif result in declared_in:
                rtype = self._declared_types(member).get(result)
            else:
                rtype = result_type
            method = n.MethodDecl(
                mods=mods, return_type=copy.deepcopy(rtype), name=name,
                params=[n.Param(type=copy.deepcopy(t), name=p) for p, t in params],
                body=n.Block(statements=body))
            cls.members.append(method)
            call = n.Call(target=None, name=name,
                          args=[n.Name(id=p) for p, _ in params])
            if result is None:
                replacement: n.Stmt = n.ExprStmt(expr=call)
            elif result in declared_in:
                replacement = n.LocalDecl(
                    type=copy.deepcopy(rtype),
                    declarators=[n.Declarator(name=result, init=call)])
            else:
                replacement = n.ExprStmt(expr=n.Assign(
                    target=n.Name(id=result), op="=", value=call))
            block.statements[run[0]:run[-1] + 1] = [replacement]


# =====================================================================
# L5
# =====================================================================

def _incdec_target_ok(target: n.Expr) -> bool:
    if isinstance(target, n.Name):
        return True
    if isinstance(target, n.FieldAccess):
        return not a.has_side_effects(target.target)
    if isinstance(target, n.IndexAccess):
        return not (a.has_side_effects(target.target) or
                    a.has_side_effects(target.index))
    return False


class ExpandCompoundAssignment(Transformation):
    name = "expand combined assignment expression"
    level = 5

    def sites(self, mp) -> list[Site]:
        out = []
        for ui, cls, member in iter_callables(mp):
            path = member_path(cls, member)
            count = [0]

            def visit(e, out=out, path=path, count=count):
                count[0] += 1
                if isinstance(e, n.Assign) and e.op != "=" and \
                        _incdec_target_ok(e.target):
                    out.append(Site(f"{path}: compound assignment #{count[0]}", (e,)))

            for stmt in a.walk_stmts(member.body):
                for e in a.stmt_exprs(stmt):
                    for sub in a.walk_exprs_deep(e):
                        visit(sub)
        return out

    def apply(self, mp, sites, rng):
        for site in sites:
            assign = site.payload[0]
            op = assign.op[:-1]
            assign.value = n.Binary(op=op, lhs=copy.deepcopy(assign.target),
                                    rhs=a.paren_if_needed(assign.value, op, True))
            assign.op = "="


class ExpandIncrementDecrement(Transformation):
    name = "expand prefix/postfix expression"
    level = 5

    def sites(self, mp) -> list[Site]:
        out = []
        for ui, cls, member in iter_callables(mp):
            path = member_path(cls, member)
            counter = [0]
            for stmt in a.walk_stmts(member.body):
                if isinstance(stmt, n.ExprStmt) and \
                        isinstance(stmt.expr, (n.PreIncDec, n.PostIncDec)) and \
                        _incdec_target_ok(stmt.expr.target):
                    counter[0] += 1
                    out.append(Site(f"{path}: increment statement #{counter[0]}",
                                    ("stmt", stmt)))
                elif isinstance(stmt, n.For) and \
                        isinstance(stmt.update, (n.PreIncDec, n.PostIncDec)) and \
                        _incdec_target_ok(stmt.update.target):
                    counter[0] += 1
                    out.append(Site(f"{path}: loop update #{counter[0]}",
                                    ("for", stmt)))
        return out

    def apply(self, mp, sites, rng):
        for site in sites:
            kind, holder = site.payload
            node = holder.expr if kind == "stmt" else holder.update
            op = "+" if node.op == "++" else "-"
            expanded = n.Assign(target=node.target, op="=",
                                value=n.Binary(op=op,
                                               lhs=copy.deepcopy(node.target),
                                               rhs=n.Literal(kind="int", value=1)))
            if kind == "stmt":
                holder.expr = expanded
            else:
                holder.update = expanded


class ForToWhile(Transformation):
    name = "replace for statement with while loop"
    level = 5

    def sites(self, mp) -> list[Site]:
        out = []
        for ui, cls, member in iter_callables(mp):
            path = member_path(cls, member)
            counter = [0]
            for stmt in a.walk_stmts(member.body):
                for container in self._containers(stmt):
                    for k, s in enumerate(container):
                        if isinstance(s, n.For):
                            counter[0] += 1
                            out.append(Site(f"{path}: for loop #{counter[0]}",
                                            (container, s)))
        return out

    def _containers(self, stmt):
        if isinstance(stmt, n.Block):
            yield stmt.statements
        elif isinstance(stmt, n.Switch):
            for g in stmt.groups:
                yield g.statements

    def apply(self, mp, sites, rng):
        for site in sites:
            container, loop = site.payload
            at = container.index(loop)
            body_statements = list(loop.body.statements)
            if loop.update is not None:
                body_statements.append(n.ExprStmt(expr=loop.update))
            cond = loop.cond if loop.cond is not None \
                else n.Literal(kind="boolean", value=True)
            while_loop = n.While(cond=cond,
                                 body=n.Block(statements=body_statements))
            wrapper: list[n.Stmt] = []
            if loop.init is not None:
                wrapper.append(loop.init)
            wrapper.append(while_loop)
            container[at] = n.Block(statements=wrapper)


class SwitchToIf(Transformation):
    name = "replace switch statement with if statements"
    level = 5

    _LABEL_TYPE = {"int": "int", "long": "long", "char": "char", "string": "String"}

    def sites(self, mp) -> list[Site]:
        out = []
        for ui, cls, member in iter_callables(mp):
            path = member_path(cls, member)
            counter = [0]
            for stmt in a.walk_stmts(member.body):
                for container in self._containers(stmt):
                    for s in container:
                        if isinstance(s, n.Switch):
                            counter[0] += 1
                            if self._eligible(s):
                                out.append(Site(f"{path}: switch #{counter[0]}",
                                                (container, s)))
        return out

    def _containers(self, stmt):
        if isinstance(stmt, n.Block):
            yield stmt.statements
        elif isinstance(stmt, n.Switch):
            for g in stmt.groups:
                yield g.statements

    def _eligible(self, sw: n.Switch) -> bool:
        if not sw.groups:
            return False
        if not any(lab is not None for g in sw.groups for lab in g.labels):
            return False
        for k, group in enumerate(sw.groups):
            trailing_break = bool(group.statements) and \
                isinstance(group.statements[-1], n.Break)
            if k < len(sw.groups) - 1 and not trailing_break:
                return False  # would fall through
            body = group.statements[:-1] if trailing_break else group.statements
            if any(self._contains_own_break(s) for s in body):
                return False  # a conditional break has nowhere to go
        return True

    @staticmethod
    def _contains_own_break(stmt: n.Stmt) -> bool:
        """Break statements binding to THIS switch (nested switches keep theirs)."""
        if isinstance(stmt, n.Break):
            return True
        if isinstance(stmt, n.Switch):
            return False
        return any(SwitchToIf._contains_own_break(child)
                   for child in a.child_stmts(stmt))

    def apply(self, mp, sites, rng):
        for site in sites:
            container, sw = site.payload
            at = container.index(sw)
            first_label = next(lab for g in sw.groups for lab in g.labels
                               if lab is not None)
            sel_type = self._LABEL_TYPE[first_label.kind]
            temp = mp.fresh_name("sel")
            decl = n.LocalDecl(type=n.TypeRef(name=sel_type, dims=0),
                               declarators=[n.Declarator(name=temp,
                                                         init=sw.selector)])
            arms: list[tuple[n.Literal | None, list[n.Stmt]]] = []
            default_body: list[n.Stmt] | None = None
            for group in sw.groups:
                body = list(group.statements)
                if body and isinstance(body[-1], n.Break):
                    body = body[:-1]
                for label in group.labels:
                    if label is None:
                        default_body = body
                    else:
                        arms.append((label, body))
            chain: n.Stmt | None = \
                n.Block(statements=copy.deepcopy(default_body)) \
                if default_body is not None else None
            for label, body in reversed(arms):
                cond = n.Binary(op="==", lhs=n.Name(id=temp),
                                rhs=n.Literal(kind=label.kind, value=label.value))
                chain = n.If(cond=cond, then=n.Block(statements=copy.deepcopy(body)),
                             orelse=chain)
            statements = [decl] + ([chain] if chain is not None else [])
            container[at] = n.Block(statements=statements)


class LiteralToStaticConstant(Transformation):
    name = "replace literal value with static constant"
    level = 5

    def sites(self, mp) -> list[Site]:
        out = []
        for ui, cls, member in iter_callables(mp):
            path = member_path(cls, member)
            count = [0]
            for stmt in a.walk_stmts(member.body):
                for e in a.stmt_exprs(stmt):
                    for sub in a.walk_exprs_deep(e):
                        if isinstance(sub, n.Literal) and \
                                sub.kind in _LITERAL_FIELD_TYPE:
                            count[0] += 1
                            out.append(Site(
                                f"{path}: literal #{count[0]} "
                                f"({sub.kind} {sub.value!r})", (cls, sub)))
        return out

    def apply(self, mp, sites, rng):
        replacements: dict[int, n.Expr] = {}
        for site in sites:
            cls, literal = site.payload
            cname = mp.fresh_name("LIT")
            ftype = _LITERAL_FIELD_TYPE[literal.kind]
            # static final with a literal initializer: a compile-time constant
            cls.members.append(n.FieldDecl(
                mods=["private", "static", "final"],
                type=n.TypeRef(name=ftype, dims=0),
                declarators=[n.Declarator(name=cname, init=copy.deepcopy(literal))]))
            replacements[id(literal)] = n.Name(id=cname, pos=literal.pos)
        _replace_by_id(mp, replacements)


class SurroundWithBrackets(Transformation):
    name = "surround expression with brackets"
    level = 5

    def sites(self, mp) -> list[Site]:
        out = []
        for ui, cls, member in iter_callables(mp):
            path = member_path(cls, member)
            count = [0]
            for stmt in a.walk_stmts(member.body):
                for e in a.stmt_exprs(stmt):
                    for sub in a.walk_exprs_deep(e):
                        if isinstance(sub, n.Binary):
                            count[0] += 1
                            out.append(Site(f"{path}: expression #{count[0]}",
                                            (sub,)))
        return out

    def apply(self, mp, sites, rng):
        chosen = {id(site.payload[0]) for site in sites}

        def fn(e):
            if id(e) in chosen:
                chosen.discard(id(e))
                inner = a.transform_expr(e, fn)
                return n.Paren(inner=inner, pos=e.pos)
            return None

        for _, cls, member in iter_callables(mp):
            a.transform_stmt_exprs(member.body, fn)


CATALOG: list[Transformation] = [
    ReformatSource(),
    RenameIdentifiers(),
    QualifyTypeNames(),
    StaticFieldImport(),
    StaticMethodImport(),
    ChangeAccessModifiers(),
    MoveFieldAssignmentToInitializer(),
    DeclareRedundantConstants(),
    AddSynchronizedModifier(),
    AssignDefaultValue(),
    MoveDeclarationsToBlockStart(),
    RearrangeMemberDeclarations(),
    ExtractBlockToMethod(),
    ExpandCompoundAssignment(),
    ExpandIncrementDecrement(),
    ForToWhile(),
    SwitchToIf(),
    LiteralToStaticConstant(),
    SurroundWithBrackets(),
]
