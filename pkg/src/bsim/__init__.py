"""Behavioural source-code similarity toolkit for a Java-like mini-language.

The pipeline: parse and resolve submissions, symbolically execute every path
from each entry point recording behaviour events, build one interaction
dependency graph per path, and score program pairs by heuristic graph
matching. A mutation engine generates simulated-plagiarism variants for the
robustness/accuracy experiment harness.
"""

from .errors import (
    BsimError,
    CompileError,
    DegenerateInput,
    IngestError,
    MalformedTrace,
    MutationError,
    ParseError,
    ResolveError,
    SchemaError,
)
from .executor import ExecutionTrace, ExecutorLimits, execute_program
from .lang import Ast, ResolvedProgram, SourceUnit, parse_unit, print_program, resolve_program
from .matcher import sim_graph, sim_program, valid_match
from .mutator import MutationConfig, generate_corpus, mutate
from .pidg import Pidg, build_pidg, build_pidg_set, deserialize_pidg, serialize_pidg

__version__ = "0.1.0"

__all__ = [
    "Ast", "BsimError", "CompileError", "DegenerateInput", "ExecutionTrace",
    "ExecutorLimits", "IngestError", "MalformedTrace", "MutationConfig",
    "MutationError", "ParseError", "Pidg", "ResolveError", "ResolvedProgram",
    "SchemaError", "SourceUnit", "build_pidg", "build_pidg_set",
    "deserialize_pidg", "execute_program", "generate_corpus", "mutate",
    "parse_unit", "print_program", "resolve_program", "serialize_pidg",
    "sim_graph", "sim_program", "valid_match",
]
