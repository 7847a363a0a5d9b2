"""Experiment harness: corpus comparison, robustness/accuracy replication, timing."""

from .experiments import (
    ErrorCount,
    count_errors,
    report_json,
    run_accuracy,
    run_robustness,
    time_pairs,
)
from .pipeline import (
    Analysis,
    Pipeline,
    SimilarityMatrix,
    Submission,
    compare_corpus,
    discover_submissions,
    load_submission,
)

__all__ = [
    "Analysis", "ErrorCount", "Pipeline", "SimilarityMatrix", "Submission",
    "compare_corpus", "count_errors", "discover_submissions", "load_submission",
    "report_json", "run_accuracy", "run_robustness", "time_pairs",
]
