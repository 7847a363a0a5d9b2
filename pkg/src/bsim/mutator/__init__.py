"""Simulated-plagiarism variant generation (L1-L5 transformations)."""

from .engine import (
    LEVELS,
    MutableProgram,
    MutationConfig,
    VariantRecord,
    catalog_for,
    derive_seed,
    generate_corpus,
    list_sites,
    mutate,
    transformation_named,
)
from .transforms import CATALOG, Site, Transformation

__all__ = [
    "CATALOG", "LEVELS", "MutableProgram", "MutationConfig", "Site",
    "Transformation", "VariantRecord", "catalog_for", "derive_seed",
    "generate_corpus", "list_sites", "mutate", "transformation_named",
]
