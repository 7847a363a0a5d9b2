"""Symbolic executor: bounded path exploration with event recording."""

from .compiler import CompiledProgram, compile_program
from .events import (
    ApiCall,
    ArrayAccess,
    Assertion,
    ExecutionTrace,
    FieldAccess,
    PrimaryOperation,
    StringConcat,
    Stringify,
    trace_from_doc,
)
from .limits import ExecutorLimits
from .machine import ExecutionContext, Executor, execute_program, fork_context
from .values import Datum, DatumFactory

__all__ = [
    "ApiCall",
    "ArrayAccess",
    "Assertion",
    "CompiledProgram",
    "Datum",
    "DatumFactory",
    "ExecutionContext",
    "ExecutionTrace",
    "Executor",
    "ExecutorLimits",
    "FieldAccess",
    "PrimaryOperation",
    "StringConcat",
    "Stringify",
    "compile_program",
    "execute_program",
    "fork_context",
    "trace_from_doc",
]
