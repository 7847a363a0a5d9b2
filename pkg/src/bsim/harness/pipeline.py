"""End-to-end pipeline: ingest, trace, build, compare, with caching.

Submissions are directories of `.src` files (or single files). Traces and
graphs are computed once per submission, keyed by content hash, and reused
across all pair comparisons; an optional disk cache persists the graphs
between runs. Pair comparisons are independent and can run on a process
pool; results are reduced in a fixed order so the pool size never affects
output.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import BsimError, IngestError
from ..executor import ExecutorLimits, execute_program
from ..lang import DEFAULT_ENTRY_NAME, SourceUnit, resolve_program
from ..matcher import ProgramScore, sim_program
from ..pidg import Pidg, build_pidg_set, deserialize_pidg, serialize_pidg

SOURCE_SUFFIX = ".src"


@dataclass(frozen=True)
class Submission:
    id: str
    units: tuple[SourceUnit, ...]

    def content_hash(self) -> str:
        digest = hashlib.sha256()
        for u in sorted(self.units, key=lambda u: u.path):
            digest.update(Path(u.path).name.encode())
            digest.update(b"\0")
            digest.update(u.text.encode())
            digest.update(b"\0")
        return digest.hexdigest()


def load_submission(path: str | Path, sub_id: str | None = None) -> Submission:
    p = Path(path)
    if p.is_file():
        text = p.read_text(encoding="utf-8")
        return Submission(id=sub_id or p.stem, units=(SourceUnit(str(p), text),))
    if p.is_dir():
        files = sorted(p.rglob(f"*{SOURCE_SUFFIX}"))
        if not files:
            raise IngestError(f"no {SOURCE_SUFFIX} files under {p}")
        units = tuple(SourceUnit(str(f), f.read_text(encoding="utf-8")) for f in files)
        return Submission(id=sub_id or p.name, units=units)
    raise IngestError(f"no such submission: {p}")


def discover_submissions(root: str | Path) -> list[Submission]:
    """Each immediate subdirectory with source files, plus loose source files."""
    rootp = Path(root)
    if not rootp.is_dir():
        raise IngestError(f"not a directory: {rootp}")
    subs = []
    for child in sorted(rootp.iterdir()):
        if child.is_dir() and any(child.rglob(f"*{SOURCE_SUFFIX}")):
            subs.append(load_submission(child))
        elif child.is_file() and child.suffix == SOURCE_SUFFIX:
            subs.append(load_submission(child))
    if not subs:
        raise IngestError(f"no submissions under {rootp}")
    return subs


@dataclass
class Analysis:
    graphs: list[Pidg]
    trace_seconds: float = 0.0
    build_seconds: float = 0.0
    trace_docs: list[dict] = field(default_factory=list)


class Pipeline:
    def __init__(self, limits: ExecutorLimits | None = None,
                 entry_name: str = DEFAULT_ENTRY_NAME,
                 cache_dir: str | Path | None = None,
                 assignment: str = "greedy", counting: str = "elements"):
        self.limits = limits or ExecutorLimits()
        self.entry_name = entry_name
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.assignment = assignment
        self.counting = counting
        self._memory: dict[str, Analysis] = {}

    def _cache_key(self, sub: Submission) -> str:
        limits = self.limits
        return hashlib.sha256(
            f"{sub.content_hash()}|{limits.cache_key()}|{self.entry_name}".encode()
        ).hexdigest()

    def analyze(self, sub: Submission) -> Analysis:
        key = self._cache_key(sub)
        hit = self._memory.get(key)
        if hit is not None:
            return hit
        if self.cache_dir is not None:
            disk = self.cache_dir / f"{key}.graphs.json"
            if disk.exists():
                doc = json.loads(disk.read_text(encoding="utf-8"))
                analysis = Analysis(graphs=[deserialize_pidg(g) for g in doc["graphs"]])
                self._memory[key] = analysis
                return analysis
        t0 = time.perf_counter()
        program = resolve_program(list(sub.units), entry_name=self.entry_name)
        traces = execute_program(program, self.limits)
        t1 = time.perf_counter()
        graphs = build_pidg_set(traces)
        t2 = time.perf_counter()
        analysis = Analysis(graphs=graphs, trace_seconds=t1 - t0,
                            build_seconds=t2 - t1,
                            trace_docs=[t.to_doc() for t in traces])
        self._memory[key] = analysis
        if self.cache_dir is not None:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            payload = {"schema": "graph-set/1",
                       "graphs": [serialize_pidg(g) for g in graphs]}
            (self.cache_dir / f"{key}.graphs.json").write_text(
                json.dumps(payload, sort_keys=True), encoding="utf-8")
        return analysis

    def compare(self, a: Submission, b: Submission) -> ProgramScore:
        ga = self.analyze(a).graphs
        gb = self.analyze(b).graphs
        return sim_program(ga, gb, self.assignment, self.counting)

    def self_baseline(self, sub: Submission) -> float:
        g = self.analyze(sub).graphs
        return sim_program(g, g, self.assignment, self.counting).value


@dataclass
class SimilarityMatrix:
    ids: list[str]
    values: list[list[float]]  # full precision, symmetric
    pair_seconds: dict[tuple[int, int], float] = field(default_factory=dict)
    failures: list[tuple[str, str]] = field(default_factory=list)

    def value(self, a: str, b: str) -> float:
        return self.values[self.ids.index(a)][self.ids.index(b)]

    def to_csv(self) -> str:
        lines = ["id," + ",".join(self.ids)]
        for sid, row in zip(self.ids, self.values):
            lines.append(sid + "," + ",".join(f"{v:.4f}" for v in row))
        return "\n".join(lines) + "\n"

    def to_doc(self) -> dict:
        return {"schema": "similarity-matrix/1", "ids": self.ids,
                "values": [[round(v, 4) for v in row] for row in self.values],
                "failures": [list(f) for f in self.failures]}


# ---------------------------------------------------------------- worker pool

_WORKER_STATE: dict = {}


def _init_pair_worker(graph_docs: dict[str, list[dict]], assignment: str,
                      counting: str):
    _WORKER_STATE["graphs"] = {sid: [deserialize_pidg(d) for d in docs]
                               for sid, docs in graph_docs.items()}
    _WORKER_STATE["assignment"] = assignment
    _WORKER_STATE["counting"] = counting


def _pair_worker(task: tuple[str, str]) -> tuple[str, str, float, float]:
    a, b = task
    graphs = _WORKER_STATE["graphs"]
    t0 = time.perf_counter()
    score = sim_program(graphs[a], graphs[b], _WORKER_STATE["assignment"],
                        _WORKER_STATE["counting"])
    return a, b, score.value, time.perf_counter() - t0


def compare_corpus(source: str | Path | list[Submission],
                   limits: ExecutorLimits | None = None,
                   entry_name: str = DEFAULT_ENTRY_NAME,
                   jobs: int = 1,
                   cache_dir: str | Path | None = None,
                   assignment: str = "greedy",
                   counting: str = "elements") -> SimilarityMatrix:
    """All-pairs program similarity. Ingest failures are reported and skipped;
    each unique pair is computed once and mirrored."""
    subs = source if isinstance(source, list) else discover_submissions(source)
    pipeline = Pipeline(limits, entry_name, cache_dir, assignment, counting)
    analyzed: list[Submission] = []
    failures: list[tuple[str, str]] = []
    for sub in subs:
        try:
            pipeline.analyze(sub)
            analyzed.append(sub)
        except BsimError as exc:
            failures.append((sub.id, str(exc)))
    ids = [s.id for s in analyzed]
    index = {s.id: k for k, s in enumerate(analyzed)}
    values = [[0.0] * len(ids) for _ in ids]
    pair_seconds: dict[tuple[int, int], float] = {}
    tasks = [(analyzed[i].id, analyzed[j].id)
             for i in range(len(analyzed)) for j in range(i, len(analyzed))]
    if jobs > 1 and len(tasks) > 1:
        graph_docs = {s.id: [serialize_pidg(g) for g in pipeline.analyze(s).graphs]
                      for s in analyzed}
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_pair_worker,
                                 initargs=(graph_docs, assignment, counting)) as pool:
            results = list(pool.map(_pair_worker, tasks, chunksize=4))
    else:
        results = []
        for a, b in tasks:
            t0 = time.perf_counter()
            score = pipeline.compare(_by_id(analyzed, a), _by_id(analyzed, b))
            results.append((a, b, score.value, time.perf_counter() - t0))
    for a, b, value, seconds in results:
        i, j = index[a], index[b]
        values[i][j] = value
        values[j][i] = value
        pair_seconds[(i, j)] = seconds
    return SimilarityMatrix(ids=ids, values=values, pair_seconds=pair_seconds,
                            failures=failures)


def _by_id(subs: list[Submission], sid: str) -> Submission:
    for s in subs:
        if s.id == sid:
            return s
    raise KeyError(sid)
