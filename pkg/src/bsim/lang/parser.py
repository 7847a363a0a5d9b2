"""Recursive-descent parser for the mini-language.

The grammar is a Java-like object-oriented subset: classes with single
inheritance, static/instance fields, methods and constructors, the eight
primitive types plus `String` and one-dimensional arrays, and the usual
statement/expression forms (if/else, switch, while, do-while, for, enhanced
for over arrays, conditional expressions, assignment and compound assignment,
increment/decrement, arithmetic/comparison/logical operators and string
concatenation via `+`).

Any deviation raises ParseError with a position and what was expected; a
partial Ast is never returned.
"""

from __future__ import annotations

from ..errors import ParseError
from . import nodes as n
from .lexer import PRIMITIVE_TYPES, Token, tokenize

MODIFIERS = {"public", "private", "protected", "static", "final", "synchronized"}
ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%="}

_STATEMENT_EXPRS = (n.Assign, n.Call, n.PreIncDec, n.PostIncDec, n.New)


def parse_unit(unit: n.SourceUnit) -> n.Ast:
    """Parse one source unit into an Ast or raise ParseError."""
    return _Parser(tokenize(unit.text, unit.path), unit.path).parse_program()


def parse_text(text: str, path: str = "<input>") -> n.Ast:
    return parse_unit(n.SourceUnit(path, text))


class _Parser:
    def __init__(self, tokens: list[Token], path: str):
        self.tokens = tokens
        self.path = path
        self.i = 0

    # ------------------------------------------------------------- helpers

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def at(self, text: str, ahead: int = 0) -> bool:
        tok = self.peek(ahead)
        return tok.kind in ("symbol", "keyword") and tok.text == text

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def expect(self, text: str, what: str | None = None) -> Token:
        tok = self.peek()
        if not self.at(text):
            found = tok.text or "end of input"
            raise ParseError(f"expected {what or text!r}, found {found!r}",
                             tok.line, tok.column, self.path)
        return self.advance()

    def expect_ident(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            found = tok.text or "end of input"
            raise ParseError(f"expected {what}, found {found!r}",
                             tok.line, tok.column, self.path)
        return self.advance()

    def pos(self, tok: Token) -> n.Pos:
        return n.Pos(tok.line, tok.column)

    def fail(self, msg: str) -> ParseError:
        tok = self.peek()
        return ParseError(msg, tok.line, tok.column, self.path)

    # ------------------------------------------------------------- program

    def parse_program(self) -> n.Ast:
        first = self.peek()
        classes = []
        while self.peek().kind != "eof":
            classes.append(self.parse_class())
        if not classes:
            raise ParseError("expected a class declaration", first.line, first.column, self.path)
        return n.Ast(classes=classes, pos=self.pos(first))

    def parse_modifiers(self) -> list[str]:
        mods = []
        while self.peek().kind == "keyword" and self.peek().text in MODIFIERS:
            mods.append(self.advance().text)
        return mods

    def parse_class(self) -> n.ClassDecl:
        start = self.peek()
        mods = self.parse_modifiers()
        self.expect("class", "'class'")
        name = self.expect_ident("class name")
        superclass = None
        if self.at("extends"):
            self.advance()
            superclass = self.expect_ident("superclass name").text
        self.expect("{")
        members = []
        while not self.at("}"):
            if self.peek().kind == "eof":
                raise self.fail("expected '}' to close class body")
            members.append(self.parse_member(name.text))
        self.expect("}")
        return n.ClassDecl(mods=mods, name=name.text, superclass=superclass,
                           members=members, pos=self.pos(start))

    def at_type_start(self, ahead: int = 0) -> bool:
        tok = self.peek(ahead)
        return tok.kind == "ident" or (tok.kind == "keyword" and tok.text in PRIMITIVE_TYPES)

    def parse_type(self) -> n.TypeRef:
        tok = self.peek()
        if not self.at_type_start():
            raise self.fail(f"expected a type name, found {tok.text!r}")
        self.advance()
        dims = 0
        while self.at("[") and self.at("]", 1):
            self.advance()
            self.advance()
            dims += 1
        if dims > 1:
            raise ParseError("multi-dimensional arrays are not supported",
                             tok.line, tok.column, self.path)
        return n.TypeRef(name=tok.text, dims=dims, pos=self.pos(tok))

    def parse_member(self, class_name: str):
        start = self.peek()
        mods = self.parse_modifiers()
        if self.at("void"):
            self.advance()
            name = self.expect_ident("method name")
            return self.parse_method(mods, None, name, start)
        if self.peek().kind == "ident" and self.peek().text == class_name and self.at("(", 1):
            name = self.advance()
            params = self.parse_params()
            body = self.parse_block()
            return n.CtorDecl(mods=mods, name=name.text, params=params, body=body,
                              pos=self.pos(start))
        ty = self.parse_type()
        name = self.expect_ident("member name")
        if self.at("("):
            return self.parse_method(mods, ty, name, start)
        declarators = self.parse_declarators(name)
        self.expect(";")
        return n.FieldDecl(mods=mods, type=ty, declarators=declarators, pos=self.pos(start))

    def parse_method(self, mods, return_type, name: Token, start: Token) -> n.MethodDecl:
        params = self.parse_params()
        body = self.parse_block()
        return n.MethodDecl(mods=mods, return_type=return_type, name=name.text,
                            params=params, body=body, pos=self.pos(start))

    def parse_params(self) -> list[n.Param]:
        self.expect("(")
        params = []
        if not self.at(")"):
            while True:
                ty = self.parse_type()
                pname = self.expect_ident("parameter name")
                params.append(n.Param(type=ty, name=pname.text, pos=self.pos(pname)))
                if self.at(","):
                    self.advance()
                    continue
                break
        self.expect(")")
        return params

    def parse_declarators(self, first: Token | None = None) -> list[n.Declarator]:
        declarators = []
        while True:
            name = first if first is not None else self.expect_ident("variable name")
            first = None
            init = None
            if self.at("="):
                self.advance()
                init = self.parse_array_init() if self.at("{") else self.parse_expr()
            declarators.append(n.Declarator(name=name.text, init=init, pos=self.pos(name)))
            if self.at(","):
                self.advance()
                continue
            return declarators

    def parse_array_init(self) -> n.ArrayInit:
        start = self.expect("{")
        values = []
        if not self.at("}"):
            while True:
                values.append(self.parse_expr())
                if self.at(","):
                    self.advance()
                    continue
                break
        self.expect("}")
        return n.ArrayInit(values=values, pos=self.pos(start))

    # ---------------------------------------------------------- statements

    def parse_block(self) -> n.Block:
        start = self.expect("{")
        statements = []
        while not self.at("}"):
            if self.peek().kind == "eof":
                raise self.fail("expected '}' to close block")
            statements.append(self.parse_statement())
        self.expect("}")
        return n.Block(statements=statements, pos=self.pos(start))

    def at_local_decl(self) -> bool:
        tok = self.peek()
        if tok.kind == "keyword" and tok.text in PRIMITIVE_TYPES:
            return True
        if tok.kind == "keyword" and tok.text == "final":
            return True
        if tok.kind == "ident":
            if self.peek(1).kind == "ident":
                return True
            if self.at("[", 1) and self.at("]", 2):
                return True
        return False

    def as_block(self, stmt: n.Stmt) -> n.Block:
        """Control-flow bodies are normalized to blocks so printing is unambiguous."""
        if isinstance(stmt, n.Block):
            return stmt
        return n.Block(statements=[stmt], pos=stmt.pos)

    def parse_statement(self) -> n.Stmt:
        tok = self.peek()
        if self.at("{"):
            return self.parse_block()
        if self.at(";"):
            self.advance()
            return n.Empty(pos=self.pos(tok))
        if self.at("if"):
            return self.parse_if()
        if self.at("while"):
            self.advance()
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            body = self.as_block(self.parse_statement())
            return n.While(cond=cond, body=body, pos=self.pos(tok))
        if self.at("do"):
            self.advance()
            body = self.as_block(self.parse_statement())
            self.expect("while", "'while' after do body")
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            self.expect(";")
            return n.DoWhile(body=body, cond=cond, pos=self.pos(tok))
        if self.at("for"):
            return self.parse_for()
        if self.at("switch"):
            return self.parse_switch()
        if self.at("return"):
            self.advance()
            value = None if self.at(";") else self.parse_expr()
            self.expect(";")
            return n.Return(value=value, pos=self.pos(tok))
        if self.at("break"):
            self.advance()
            self.expect(";")
            return n.Break(pos=self.pos(tok))
        if self.at_local_decl():
            decl = self.parse_local_decl()
            self.expect(";")
            return decl
        expr = self.parse_statement_expr()
        self.expect(";")
        return n.ExprStmt(expr=expr, pos=self.pos(tok))

    def parse_local_decl(self) -> n.LocalDecl:
        start = self.peek()
        mods = []
        while self.at("final"):
            mods.append(self.advance().text)
        ty = self.parse_type()
        declarators = self.parse_declarators()
        return n.LocalDecl(mods=mods, type=ty, declarators=declarators, pos=self.pos(start))

    def parse_statement_expr(self) -> n.Expr:
        tok = self.peek()
        expr = self.parse_expr()
        if not isinstance(expr, _STATEMENT_EXPRS):
            raise ParseError("expression is not a statement",
                             tok.line, tok.column, self.path)
        return expr

    def parse_if(self) -> n.If:
        tok = self.expect("if")
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        then = self.as_block(self.parse_statement())
        orelse = None
        if self.at("else"):
            self.advance()
            orelse = self.parse_statement()
            if not isinstance(orelse, n.If):  # keep else-if chains flat
                orelse = self.as_block(orelse)
        return n.If(cond=cond, then=then, orelse=orelse, pos=self.pos(tok))

    def parse_for(self) -> n.Stmt:
        tok = self.expect("for")
        self.expect("(")
        # Enhanced form: for (Type name : expr)
        save = self.i
        if self.at_type_start():
            try:
                ty = self.parse_type()
                if self.peek().kind == "ident" and self.at(":", 1):
                    name = self.advance()
                    self.advance()  # ':'
                    iterable = self.parse_expr()
                    self.expect(")")
                    body = self.as_block(self.parse_statement())
                    return n.ForEach(var_type=ty, var_name=name.text, iterable=iterable,
                                     body=body, pos=self.pos(tok))
            except ParseError:
                pass
            self.i = save
        init: n.Stmt | None = None
        if not self.at(";"):
            if self.at_local_decl():
                init = self.parse_local_decl()
            else:
                estart = self.peek()
                init = n.ExprStmt(expr=self.parse_statement_expr(), pos=self.pos(estart))
        self.expect(";")
        cond = None if self.at(";") else self.parse_expr()
        self.expect(";")
        update = None if self.at(")") else self.parse_statement_expr()
        self.expect(")")
        body = self.as_block(self.parse_statement())
        return n.For(init=init, cond=cond, update=update, body=body, pos=self.pos(tok))

    def parse_switch(self) -> n.Switch:
        tok = self.expect("switch")
        self.expect("(")
        selector = self.parse_expr()
        self.expect(")")
        self.expect("{")
        groups = []
        while not self.at("}"):
            if self.peek().kind == "eof":
                raise self.fail("expected '}' to close switch body")
            labels = []
            while self.at("case") or self.at("default"):
                if self.at("default"):
                    lab_tok = self.advance()
                    labels.append(None)
                else:
                    self.advance()
                    labels.append(self.parse_case_label())
                self.expect(":")
            if not labels:
                raise self.fail("expected 'case' or 'default' label")
            statements = []
            while not (self.at("case") or self.at("default") or self.at("}")):
                if self.peek().kind == "eof":
                    raise self.fail("expected '}' to close switch body")
                statements.append(self.parse_statement())
            groups.append(n.SwitchGroup(labels=labels, statements=statements))
        self.expect("}")
        return n.Switch(selector=selector, groups=groups, pos=self.pos(tok))

    def parse_case_label(self) -> n.Literal:
        negate = False
        if self.at("-"):
            self.advance()
            negate = True
        tok = self.peek()
        if tok.kind not in ("int", "long", "char", "string"):
            raise self.fail("expected a literal case label")
        self.advance()
        value = tok.value
        if negate:
            if tok.kind not in ("int", "long"):
                raise ParseError("cannot negate a non-numeric case label",
                                 tok.line, tok.column, self.path)
            value = -value
        return n.Literal(kind=tok.kind, value=value, pos=self.pos(tok))

    # ---------------------------------------------------------- expressions

    def parse_expr(self) -> n.Expr:
        return self.parse_assignment()

    def parse_assignment(self) -> n.Expr:
        lhs = self.parse_conditional()
        tok = self.peek()
        if tok.kind == "symbol" and tok.text in ASSIGN_OPS:
            if not isinstance(lhs, (n.Name, n.FieldAccess, n.IndexAccess)):
                raise ParseError("invalid assignment target", tok.line, tok.column, self.path)
            self.advance()
            value = self.parse_assignment()
            return n.Assign(target=lhs, op=tok.text, value=value, pos=self.pos(tok))
        return lhs

    def parse_conditional(self) -> n.Expr:
        cond = self.parse_binary(0)
        if self.at("?"):
            tok = self.advance()
            then = self.parse_expr()
            self.expect(":")
            other = self.parse_conditional()
            return n.Conditional(cond=cond, then=then, other=other, pos=self.pos(tok))
        return cond

    _LEVELS = [["||"], ["&&"], ["==", "!="], ["<", "<=", ">", ">="], ["+", "-"], ["*", "/", "%"]]

    def parse_binary(self, level: int) -> n.Expr:
        if level >= len(self._LEVELS):
            return self.parse_unary()
        lhs = self.parse_binary(level + 1)
        while self.peek().kind == "symbol" and self.peek().text in self._LEVELS[level]:
            tok = self.advance()
            rhs = self.parse_binary(level + 1)
            lhs = n.Binary(op=tok.text, lhs=lhs, rhs=rhs, pos=self.pos(tok))
        return lhs

    def parse_unary(self) -> n.Expr:
        tok = self.peek()
        if self.at("!") or self.at("-") or self.at("+"):
            self.advance()
            operand = self.parse_unary()
            if tok.text == "+":
                return operand
            if tok.text == "-" and isinstance(operand, n.Literal) and \
                    operand.kind in ("int", "long", "float", "double"):
                return n.Literal(kind=operand.kind, value=-operand.value, pos=self.pos(tok))
            return n.Unary(op=tok.text, operand=operand, pos=self.pos(tok))
        if self.at("++") or self.at("--"):
            self.advance()
            target = self.parse_unary()
            if not isinstance(target, (n.Name, n.FieldAccess, n.IndexAccess)):
                raise ParseError("invalid increment/decrement target",
                                 tok.line, tok.column, self.path)
            return n.PreIncDec(op=tok.text, target=target, pos=self.pos(tok))
        return self.parse_postfix()

    def parse_postfix(self) -> n.Expr:
        expr = self.parse_primary()
        while True:
            tok = self.peek()
            if self.at("."):
                self.advance()
                name = self.expect_ident("member name")
                if self.at("("):
                    args = self.parse_args()
                    expr = n.Call(target=expr, name=name.text, args=args, pos=self.pos(name))
                else:
                    expr = n.FieldAccess(target=expr, name=name.text, pos=self.pos(name))
            elif self.at("["):
                self.advance()
                index = self.parse_expr()
                self.expect("]")
                expr = n.IndexAccess(target=expr, index=index, pos=self.pos(tok))
            elif self.at("++") or self.at("--"):
                if not isinstance(expr, (n.Name, n.FieldAccess, n.IndexAccess)):
                    raise ParseError("invalid increment/decrement target",
                                     tok.line, tok.column, self.path)
                self.advance()
                expr = n.PostIncDec(op=tok.text, target=expr, pos=self.pos(tok))
            else:
                return expr

    def parse_args(self) -> list[n.Expr]:
        self.expect("(")
        args = []
        if not self.at(")"):
            while True:
                args.append(self.parse_expr())
                if self.at(","):
                    self.advance()
                    continue
                break
        self.expect(")")
        return args

    def parse_primary(self) -> n.Expr:
        tok = self.peek()
        if tok.kind in ("int", "long", "float", "double", "char", "string"):
            self.advance()
            return n.Literal(kind=tok.kind, value=tok.value, pos=self.pos(tok))
        if self.at("true") or self.at("false"):
            self.advance()
            return n.Literal(kind="boolean", value=tok.text == "true", pos=self.pos(tok))
        if self.at("null"):
            self.advance()
            return n.Literal(kind="null", value=None, pos=self.pos(tok))
        if self.at("this"):
            self.advance()
            return n.This(pos=self.pos(tok))
        if self.at("("):
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return n.Paren(inner=inner, pos=self.pos(tok))
        if self.at("new"):
            return self.parse_new()
        if tok.kind == "ident":
            self.advance()
            if self.at("("):
                args = self.parse_args()
                return n.Call(target=None, name=tok.text, args=args, pos=self.pos(tok))
            return n.Name(id=tok.text, pos=self.pos(tok))
        found = tok.text or "end of input"
        raise ParseError(f"expected an expression, found {found!r}",
                         tok.line, tok.column, self.path)

    def parse_new(self) -> n.Expr:
        tok = self.expect("new")
        ty_tok = self.peek()
        if not self.at_type_start():
            raise self.fail(f"expected a type name after 'new', found {ty_tok.text!r}")
        self.advance()
        base = n.TypeRef(name=ty_tok.text, dims=0, pos=self.pos(ty_tok))
        if self.at("["):
            self.advance()
            if self.at("]"):
                self.advance()
                init = self.parse_array_init()
                return n.NewArray(type=base, length=None, init=init.values, pos=self.pos(tok))
            length = self.parse_expr()
            self.expect("]")
            return n.NewArray(type=base, length=length, init=None, pos=self.pos(tok))
        if base.name in PRIMITIVE_TYPES:
            raise ParseError(f"cannot instantiate primitive type {base.name!r}",
                             ty_tok.line, ty_tok.column, self.path)
        args = self.parse_args()
        return n.New(type=base, args=args, pos=self.pos(tok))
