"""Exception types shared across the pipeline."""

from __future__ import annotations


class BsimError(Exception):
    """Base class for all bsim errors."""


class ParseError(BsimError):
    """Source text deviates from the grammar. Carries position and expectation."""

    def __init__(self, message: str, line: int, column: int, path: str = "<input>"):
        super().__init__(f"{path}:{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.path = path


class ResolveError(BsimError):
    """A submission parsed but cannot be resolved into a runnable program."""


class CompileError(BsimError):
    """A method body cannot be lowered to instructions (internal invariant)."""


class MalformedTrace(BsimError):
    """A trace event references a datum id that was never declared."""


class SchemaError(BsimError):
    """A serialized document does not conform to its schema."""


class MutationError(BsimError):
    """A transformation produced an invalid variant (internal invariant)."""


class DegenerateInput(BsimError):
    """An experiment input lacks one of the required label classes."""


class IngestError(BsimError):
    """A submission directory or file could not be loaded."""
