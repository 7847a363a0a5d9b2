"""Frontend: lexer, parser, printer and resolver for the mini-language."""

from . import nodes
from .lexer import tokenize
from .nodes import Ast, SourceUnit
from .parser import parse_text, parse_unit
from .printer import DEFAULT_STYLE, Style, print_expr, print_program
from .resolver import (
    DEFAULT_ENTRY_NAME,
    ClassInfo,
    EntryPoint,
    FieldInfo,
    ResolvedProgram,
    infer_static_type,
    resolve_asts,
    resolve_program,
)

__all__ = [
    "Ast",
    "ClassInfo",
    "DEFAULT_ENTRY_NAME",
    "DEFAULT_STYLE",
    "EntryPoint",
    "FieldInfo",
    "ResolvedProgram",
    "SourceUnit",
    "Style",
    "infer_static_type",
    "nodes",
    "parse_text",
    "parse_unit",
    "print_expr",
    "print_program",
    "resolve_asts",
    "resolve_program",
    "tokenize",
]
