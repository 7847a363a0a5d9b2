"""Robustness and accuracy experiment replications plus timing.

Robustness: generate variant corpora per (level, chance), score every variant
against its base, and aggregate the drop from the base's self-similarity
baseline in percentage points; rows are split by whether value-injecting
transformations were applied.

Accuracy: pool the pairwise scores of an innocent corpus, inject the
variant-vs-base scores per (level, chance), and report the minimum number of
misclassifications over every score threshold.

All reported scores are rounded to 4 decimal places; error counting uses the
full-precision values. Reports carry no wall-clock data, so identical seeds
reproduce byte-identical documents; timing lives in time_pairs output only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from statistics import fmean

from ..errors import DegenerateInput
from ..executor import ExecutorLimits
from ..lang import DEFAULT_ENTRY_NAME, SourceUnit
from ..mutator import generate_corpus
from .pipeline import Pipeline, Submission, compare_corpus

PLAGIARISED = "plagiarised"
INNOCENT = "innocent"


@dataclass(frozen=True)
class ErrorCount:
    errors: int
    threshold: float
    plagiarised: int
    innocent: int


def count_errors(scores: list[tuple[float, str]]) -> ErrorCount:
    """Minimal misclassification count over all thresholds.

    A pair is predicted plagiarised when its score is strictly above the
    threshold; candidate cuts lie between distinct score groups (plus the
    extremes), so ties never split.
    """
    plag = sorted(s for s, label in scores if label == PLAGIARISED)
    innocent = sorted(s for s, label in scores if label == INNOCENT)
    if not plag or not innocent:
        raise DegenerateInput("count_errors needs both plagiarised and innocent scores")
    distinct = sorted({*plag, *innocent})
    cuts = [distinct[0] - 1.0]
    cuts += [(a + b) / 2.0 for a, b in zip(distinct, distinct[1:])]
    cuts += [distinct[-1] + 1.0]
    import bisect
    best_errors = None
    best_cut = cuts[0]
    for cut in cuts:
        wrong_innocent = len(innocent) - bisect.bisect_right(innocent, cut)
        wrong_plag = bisect.bisect_right(plag, cut)
        errors = wrong_innocent + wrong_plag
        if best_errors is None or errors < best_errors:
            best_errors = errors
            best_cut = cut
    return ErrorCount(errors=best_errors, threshold=best_cut,
                      plagiarised=len(plag), innocent=len(innocent))


def _mean_or_none(values: list[float]) -> float | None:
    return round(fmean(values), 4) if values else None


def run_robustness(bases: list[tuple[str, list[SourceUnit]]],
                   levels: list[int], chances: list[float],
                   counts_per_level: dict[int, int], seed: int,
                   limits: ExecutorLimits | None = None,
                   exclude_value_injecting: bool = False,
                   entry_name: str = DEFAULT_ENTRY_NAME,
                   jobs: int = 1) -> dict:
    """Mean drop in similarity points per (level, chance), vs self-baselines."""
    pipeline = Pipeline(limits, entry_name)
    manifest = generate_corpus(bases, levels, chances, counts_per_level, seed,
                               exclude_value_injecting=exclude_value_injecting)
    records = {rec["variant_id"]: rec for rec in manifest["variants"]}

    baselines: dict[str, float] = {}
    base_subs: dict[str, Submission] = {}
    for base_id, units in bases:
        sub = Submission(id=base_id, units=tuple(units))
        base_subs[base_id] = sub
        baselines[base_id] = pipeline.self_baseline(sub)

    drops: dict[tuple[int, float], list[tuple[float, bool]]] = {}
    for base_id, variant_id, variant_units in manifest["_produced"]:
        rec = records[variant_id]
        variant = Submission(id=variant_id, units=tuple(variant_units))
        score = pipeline.compare(base_subs[base_id], variant).value
        drop = (baselines[base_id] - score) * 100.0
        key = (rec["level"], rec["chance"])
        drops.setdefault(key, []).append((drop, rec["value_injecting"]))

    rows = []
    for level in levels:
        for chance in chances:
            cell = drops.get((level, chance), [])
            all_drops = [d for d, _ in cell]
            with_vi = [d for d, vi in cell if vi]
            without_vi = [d for d, vi in cell if not vi]
            rows.append({
                "level": level,
                "chance": chance,
                "count": len(cell),
                "mean_drop": _mean_or_none(all_drops),
                "max_drop": round(max(all_drops), 4) if all_drops else None,
                "with_value_injecting": {"count": len(with_vi),
                                         "mean_drop": _mean_or_none(with_vi)},
                "without_value_injecting": {"count": len(without_vi),
                                            "mean_drop": _mean_or_none(without_vi)},
            })
    return {
        "schema": "robustness-report/1",
        "seed": seed,
        "levels": levels,
        "chances": chances,
        "counts_per_level": {str(k): v for k, v in counts_per_level.items()},
        "exclude_value_injecting": exclude_value_injecting,
        "limits": _limits_doc(limits),
        "baselines": {k: round(v, 4) for k, v in sorted(baselines.items())},
        "rows": rows,
    }


def run_accuracy(innocent: list[tuple[str, list[SourceUnit]]],
                 bases: list[tuple[str, list[SourceUnit]]],
                 levels: list[int], chances: list[float],
                 counts_per_level: dict[int, int], seed: int,
                 limits: ExecutorLimits | None = None,
                 excluded_pairs: list[tuple[str, str]] | None = None,
                 entry_name: str = DEFAULT_ENTRY_NAME,
                 jobs: int = 1) -> dict:
    """Error counts per (level, chance) after injecting variant scores into
    the innocent pairwise pool."""
    excluded = {frozenset(p) for p in (excluded_pairs or [])}
    subs = [Submission(id=sid, units=tuple(units)) for sid, units in innocent]
    matrix = compare_corpus(subs, limits, entry_name, jobs=jobs)
    innocent_scores: list[float] = []
    for i in range(len(matrix.ids)):
        for j in range(i + 1, len(matrix.ids)):
            if frozenset((matrix.ids[i], matrix.ids[j])) in excluded:
                continue
            innocent_scores.append(matrix.values[i][j])

    pipeline = Pipeline(limits, entry_name)
    base_subs = {sid: Submission(id=sid, units=tuple(units)) for sid, units in bases}
    manifest = generate_corpus(bases, levels, chances, counts_per_level, seed)
    records = {rec["variant_id"]: rec for rec in manifest["variants"]}
    plag_scores: dict[tuple[int, float], list[float]] = {}
    for base_id, variant_id, variant_units in manifest["_produced"]:
        rec = records[variant_id]
        variant = Submission(id=variant_id, units=tuple(variant_units))
        score = pipeline.compare(base_subs[base_id], variant).value
        plag_scores.setdefault((rec["level"], rec["chance"]), []).append(score)

    rows = []
    for level in levels:
        for chance in chances:
            cell = plag_scores.get((level, chance), [])
            scored = [(s, INNOCENT) for s in innocent_scores] + \
                     [(s, PLAGIARISED) for s in cell]
            if not cell:
                rows.append({"level": level, "chance": chance, "variants": 0,
                             "errors": None, "threshold": None})
                continue
            result = count_errors(scored)
            rows.append({"level": level, "chance": chance, "variants": len(cell),
                         "errors": result.errors,
                         "threshold": round(result.threshold, 4)})
    return {
        "schema": "accuracy-report/1",
        "seed": seed,
        "levels": levels,
        "chances": chances,
        "counts_per_level": {str(k): v for k, v in counts_per_level.items()},
        "limits": _limits_doc(limits),
        "innocent_pairs": len(innocent_scores),
        "excluded_pairs": sorted(sorted(p) for p in excluded),
        "rows": rows,
    }


def time_pairs(source, limits: ExecutorLimits | None = None,
               entry_name: str = DEFAULT_ENTRY_NAME) -> dict:
    """Per-stage and per-pair mean wall times over an all-pairs comparison."""
    from .pipeline import discover_submissions

    subs = source if isinstance(source, list) else discover_submissions(source)
    pipeline = Pipeline(limits, entry_name)
    trace_seconds = 0.0
    build_seconds = 0.0
    for sub in subs:
        analysis = pipeline.analyze(sub)
        trace_seconds += analysis.trace_seconds
        build_seconds += analysis.build_seconds
    import time as _time
    match_seconds = 0.0
    pair_rows = []
    n = len(subs)
    for i in range(n):
        for j in range(i + 1, n):
            t0 = _time.perf_counter()
            score = pipeline.compare(subs[i], subs[j])
            dt = _time.perf_counter() - t0
            match_seconds += dt
            pair_rows.append({"a": subs[i].id, "b": subs[j].id,
                              "score": round(score.value, 4),
                              "match_seconds": round(dt, 6)})
    pairs = max(1, n * (n - 1) // 2)
    total = trace_seconds + build_seconds + match_seconds
    return {
        "schema": "timing-report/1",
        "submissions": n,
        "pairs": n * (n - 1) // 2,
        "stage_seconds": {"trace": round(trace_seconds, 6),
                          "build": round(build_seconds, 6),
                          "match": round(match_seconds, 6)},
        "total_seconds": round(total, 6),
        "mean_pair_seconds": round(total / pairs, 6),
        "pair_rows": pair_rows,
    }


def _limits_doc(limits: ExecutorLimits | None) -> dict:
    limits = limits or ExecutorLimits()
    return {"loop_bound": limits.loop_bound,
            "recursion_bound": limits.recursion_bound,
            "context_budget": limits.context_budget}


def report_json(report: dict) -> str:
    """Canonical report serialization (criterion: byte-identical reruns)."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
