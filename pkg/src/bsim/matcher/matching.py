"""Two-phase graph mapping and the similarity scores built on it.

Phase 1 seeds the mapping at points of reference: operator and API-call
nodes, which any nontrivial program contains. Candidate seed pairs are scored
by the fraction of immediate neighbours that admit valid matches and resolved
by assignment (greedy descending score by default, exact optional). Phase 2
iteratively expands outward from the mapped frontier, pairing unmapped
neighbours reached over the same kind of edge, until nothing new maps.

Similarity of two graphs is the mapped intersection over total size:

    sim = 2 * |mapped elements| / (|X| + |Y|)

where elements count nodes plus edges by default (a "nodes" mode exists for
comparison). Components without a point of reference are never mapped; that
is the documented speed-over-accuracy trade of the heuristic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from statistics import fmean

from ..pidg.graph import CALL, DATA, ENTRY, OPERATOR, Pidg, PidgEdge, PidgNode

EdgeContext = tuple[str, str]  # (edge type, "in" | "out")


def _comparable_attrs(node: PidgNode, skip_runtime_type: bool) -> tuple:
    out = []
    for k, v in node.attrs:
        if k == "runtime_type" and skip_runtime_type:
            continue
        if node.node_type == ENTRY and k == "signature":
            continue  # entry signatures carry the (renameable) class name
        out.append((k, v))
    return tuple(out)


def valid_match(a: PidgNode, b: PidgNode,
                last_edge_a: EdgeContext | str | None = None,
                last_edge_b: EdgeContext | str | None = None) -> bool:
    """Whether two nodes may map: same type, comparable attributes, flags,
    and (when expansion context is supplied) the same kind of reaching edge."""
    if a.node_type != b.node_type:
        return False
    if a.node_type == DATA and a.data_kind != b.data_kind:
        return False
    if a.flags != b.flags:
        return False
    skip_rt = a.source_defined or b.source_defined
    if _comparable_attrs(a, skip_rt) != _comparable_attrs(b, skip_rt):
        return False
    if last_edge_a is not None or last_edge_b is not None:
        if last_edge_a != last_edge_b:
            return False
    return True


def _labels_compatible(ea: PidgEdge, eb: PidgEdge) -> bool:
    if ea.label_comparable and eb.label_comparable:
        return ea.label == eb.label
    return True


def _edges_compatible(ea: PidgEdge, da: str, eb: PidgEdge, db: str) -> bool:
    return da == db and ea.edge_type == eb.edge_type and _labels_compatible(ea, eb)


class _GraphIndex:
    """Precomputed match signatures and neighbourhood descriptors.

    sigs[i] = (full, loose, source_defined): two nodes may map when their
    loose signatures agree and either is source-defined, or their full
    signatures agree. descriptors[i] lists, in adjacency order, one tuple per
    incident edge: (direction, edge type, comparable label or sentinel,
    neighbour full/loose signature, neighbour source-defined).
    """

    __slots__ = ("graph", "sigs", "descriptors")

    _NO_LABEL = object()

    def __init__(self, graph: Pidg):
        self.graph = graph
        self.sigs = []
        for node in graph.nodes:
            full = (node.node_type, node.data_kind, node.flags,
                    _comparable_attrs(node, False))
            loose = (node.node_type, node.data_kind, node.flags,
                     _comparable_attrs(node, True))
            self.sigs.append((full, loose, node.source_defined))
        self.descriptors = []
        for idx in range(len(graph.nodes)):
            descs = []
            for ei, other, direction in graph.adjacency()[idx]:
                edge = graph.edges[ei]
                label = edge.label if edge.label_comparable else self._NO_LABEL
                descs.append((direction, edge.edge_type, edge.label_comparable,
                              label, self.sigs[other]))
            self.descriptors.append(tuple(descs))


def _sigs_match(sa: tuple, sb: tuple) -> bool:
    if sa[2] or sb[2]:
        return sa[1] == sb[1]
    return sa[0] == sb[0]


def _descs_compatible(da: tuple, db: tuple) -> bool:
    if da[0] != db[0] or da[1] != db[1]:
        return False
    if da[2] and db[2] and da[3] != db[3]:
        return False
    return _sigs_match(da[4], db[4])


def _graph_index(graph: Pidg) -> _GraphIndex:
    index = getattr(graph, "_match_index", None)
    if index is None:
        index = _GraphIndex(graph)
        object.__setattr__(graph, "_match_index", index)
    return index


@dataclass
class NodeMapping:
    """Injective node association between two graphs plus its audit trail."""

    pairs: dict[int, int] = field(default_factory=dict)
    reverse: dict[int, int] = field(default_factory=dict)
    seed_pairs: list[tuple[int, int]] = field(default_factory=list)
    frontier_history: list[list[tuple[int, int]]] = field(default_factory=list)
    mapped_edges: list[tuple[int, int]] = field(default_factory=list)

    def add(self, x: int, y: int) -> bool:
        if x in self.pairs or y in self.reverse:
            return False
        self.pairs[x] = y
        self.reverse[y] = x
        return True


class _Matcher:
    def __init__(self, X: Pidg, Y: Pidg, assignment: str = "greedy",
                 score_memo: dict | None = None):
        self.X = X
        self.Y = Y
        self.ix = _graph_index(X)
        self.iy = _graph_index(Y)
        self.assignment = assignment
        self.mapping = NodeMapping()
        # keyed by neighbourhood descriptors, shareable across graph pairs
        self._score_memo = score_memo if score_memo is not None else {}

    # --------------------------------------------------------- scoring

    def pair_score(self, ai: int, bi: int) -> float:
        """Fraction of immediate neighbours that admit valid matches:
        2 * matchable pairs / (deg(a) + deg(b))."""
        da = self.ix.descriptors[ai]
        db = self.iy.descriptors[bi]
        key = (da, db)
        cached = self._score_memo.get(key)
        if cached is not None:
            return cached
        total = len(da) + len(db)
        if total == 0:
            self._score_memo[key] = 0.0
            return 0.0
        used = [False] * len(db)
        matched = 0
        for desc_a in da:
            for slot, desc_b in enumerate(db):
                if used[slot]:
                    continue
                if _descs_compatible(desc_a, desc_b):
                    used[slot] = True
                    matched += 1
                    break
        score = 2.0 * matched / total
        self._score_memo[key] = score
        return score

    # --------------------------------------------------------- phase one

    def reference_nodes(self, graph: Pidg) -> list[int]:
        return [node.idx for node in graph.nodes
                if node.node_type in (OPERATOR, CALL)]

    def seed(self):
        # bucket by full signature: reference nodes are never source-defined,
        # so valid pairs agree exactly on their signatures
        buckets: dict[tuple, list[int]] = {}
        for bi in self.reference_nodes(self.Y):
            buckets.setdefault(self.iy.sigs[bi][0], []).append(bi)
        candidates: list[tuple[float, int, int]] = []
        for ai in self.reference_nodes(self.X):
            for bi in buckets.get(self.ix.sigs[ai][0], ()):
                score = self.pair_score(ai, bi)
                if score > 0.0:
                    candidates.append((score, ai, bi))
        chosen = (self._assign_exact(candidates) if self.assignment == "exact"
                  else self._assign_greedy(candidates))
        initial: list[tuple[int, int]] = []
        for ai, bi in chosen:
            if not self.mapping.add(ai, bi):
                continue
            self.mapping.seed_pairs.append((ai, bi))
            initial.append((ai, bi))
            for oa, ob in self.neighbour_pairs(ai, bi):
                if self.mapping.add(oa, ob):
                    initial.append((oa, ob))
        return initial

    def _assign_greedy(self, candidates) -> list[tuple[int, int]]:
        used_a: set[int] = set()
        used_b: set[int] = set()
        out = []
        for score, ai, bi in sorted(candidates, key=lambda c: (-c[0], c[1], c[2])):
            if ai in used_a or bi in used_b:
                continue
            used_a.add(ai)
            used_b.add(bi)
            out.append((ai, bi))
        return out

    def _assign_exact(self, candidates) -> list[tuple[int, int]]:
        """Score-maximizing assignment over the candidate matrix."""
        if not candidates:
            return []
        import numpy as np
        from scipy.optimize import linear_sum_assignment

        rows = sorted({ai for _, ai, _ in candidates})
        cols = sorted({bi for _, _, bi in candidates})
        rix = {ai: k for k, ai in enumerate(rows)}
        cix = {bi: k for k, bi in enumerate(cols)}
        matrix = np.zeros((len(rows), len(cols)))
        for score, ai, bi in candidates:
            matrix[rix[ai], cix[bi]] = score
        ri, ci = linear_sum_assignment(matrix, maximize=True)
        out = [(rows[r], cols[c]) for r, c in zip(ri, ci) if matrix[r, c] > 0.0]
        return sorted(out)

    # --------------------------------------------------------- phase two

    def neighbour_pairs(self, ai: int, bi: int) -> list[tuple[int, int]]:
        """Pair unmapped neighbours of a mapped pair, best pair score first,
        requiring the same kind (and orientation) of reaching edge."""
        candidates: list[tuple[float, int, int]] = []
        adj_b = self.Y.adjacency()[bi]
        for ea, oa, da in self.X.adjacency()[ai]:
            if oa in self.mapping.pairs:
                continue
            edge_a = self.X.edges[ea]
            sig_a = self.ix.sigs[oa]
            for eb, ob, db in adj_b:
                if ob in self.mapping.reverse:
                    continue
                edge_b = self.Y.edges[eb]
                if not _edges_compatible(edge_a, da, edge_b, db):
                    continue
                if not _sigs_match(sig_a, self.iy.sigs[ob]):
                    continue
                candidates.append((self.pair_score(oa, ob), oa, ob))
        out = []
        taken_a: set[int] = set()
        taken_b: set[int] = set()
        for _, oa, ob in sorted(candidates, key=lambda c: (-c[0], c[1], c[2])):
            if oa in taken_a or ob in taken_b:
                continue
            taken_a.add(oa)
            taken_b.add(ob)
            out.append((oa, ob))
        return out

    def expand(self, frontier: list[tuple[int, int]]):
        while frontier:
            self.mapping.frontier_history.append(list(frontier))
            next_frontier: list[tuple[int, int]] = []
            for ai, bi in frontier:
                for oa, ob in self.neighbour_pairs(ai, bi):
                    if self.mapping.add(oa, ob):
                        next_frontier.append((oa, ob))
            frontier = next_frontier

    # --------------------------------------------------------- edges

    def map_edges(self):
        by_endpoints: dict[tuple[int, int], list[int]] = {}
        for fi, f in enumerate(self.Y.edges):
            by_endpoints.setdefault((f.src, f.dst), []).append(fi)
        used: set[int] = set()
        for ei, e in enumerate(self.X.edges):
            ys = self.mapping.pairs.get(e.src)
            yd = self.mapping.pairs.get(e.dst)
            if ys is None or yd is None:
                continue
            for fi in by_endpoints.get((ys, yd), ()):
                if fi in used:
                    continue
                f = self.Y.edges[fi]
                if f.edge_type == e.edge_type and _labels_compatible(e, f):
                    used.add(fi)
                    self.mapping.mapped_edges.append((ei, fi))
                    break

    def run(self) -> NodeMapping:
        self.expand(self.seed())
        self.map_edges()
        return self.mapping


def seed_mapping(X: Pidg, Y: Pidg, assignment: str = "greedy") -> NodeMapping:
    """Phase 1 only: points of reference plus their immediate neighbours."""
    matcher = _Matcher(X, Y, assignment)
    initial = matcher.seed()
    matcher.mapping.frontier_history.append(initial)
    return matcher.mapping


def expand_mapping(X: Pidg, Y: Pidg, mapping: NodeMapping,
                   assignment: str = "greedy") -> NodeMapping:
    """Phase 2: iterate the frontier to a fixed point and map edges."""
    matcher = _Matcher(X, Y, assignment)
    matcher.mapping = mapping
    frontier = mapping.frontier_history[-1] if mapping.frontier_history else \
        sorted(mapping.pairs.items())
    matcher.expand(list(frontier))
    matcher.map_edges()
    return mapping


@dataclass(frozen=True)
class GraphScore:
    value: float
    mapped_elements: int
    size_x: int
    size_y: int


def match_graphs(X: Pidg, Y: Pidg, assignment: str = "greedy",
                 score_memo: dict | None = None) -> NodeMapping:
    return _Matcher(X, Y, assignment, score_memo).run()


def sim_graph(X: Pidg, Y: Pidg, assignment: str = "greedy",
              counting: str = "elements",
              score_memo: dict | None = None) -> GraphScore:
    """Heuristic graph similarity in [0, 1]."""
    mapping = match_graphs(X, Y, assignment, score_memo)
    return score_mapping(X, Y, mapping, counting)


def score_mapping(X: Pidg, Y: Pidg, mapping: NodeMapping,
                  counting: str = "elements") -> GraphScore:
    if counting == "elements":
        mapped = len(mapping.pairs) + len(mapping.mapped_edges)
        size_x, size_y = X.size(), Y.size()
    elif counting == "nodes":
        mapped = len(mapping.pairs)
        size_x, size_y = len(X.nodes), len(Y.nodes)
    else:
        raise ValueError(f"unknown counting mode {counting!r}")
    total = size_x + size_y
    value = 0.0 if total == 0 else 2.0 * mapped / total
    return GraphScore(value=min(1.0, max(0.0, value)), mapped_elements=mapped,
                      size_x=size_x, size_y=size_y)


@dataclass(frozen=True)
class ProgramScore:
    """Symmetrized program-level similarity."""

    value: float
    a_to_b: tuple = ()
    b_to_a: tuple = ()
    diagnostic: str | None = None


def sim_program(PA: list[Pidg], PB: list[Pidg], assignment: str = "greedy",
                counting: str = "elements") -> ProgramScore:
    """Mean of both directions' best-partner means; mapping is non-exclusive."""
    if not PA or not PB:
        return ProgramScore(value=0.0, diagnostic="empty graph set")
    memo: dict = {}  # neighbourhood scores recur heavily across graph pairs
    table = [[sim_graph(a, b, assignment, counting, memo).value for b in PB]
             for a in PA]
    a_to_b = []
    for ai, row in enumerate(table):
        best = max(range(len(PB)), key=lambda bi: (row[bi], -bi))
        a_to_b.append((ai, best, row[best]))
    b_to_a = []
    for bi in range(len(PB)):
        col = [table[ai][bi] for ai in range(len(PA))]
        best = max(range(len(PA)), key=lambda ai: (col[ai], -ai))
        b_to_a.append((bi, best, col[best]))
    dir_a = fmean(s for _, _, s in a_to_b)
    dir_b = fmean(s for _, _, s in b_to_a)
    return ProgramScore(value=(dir_a + dir_b) / 2.0,
                        a_to_b=tuple(a_to_b), b_to_a=tuple(b_to_a))


def mapping_dump(X: Pidg, Y: Pidg, mapping: NodeMapping,
                 counting: str = "elements") -> dict:
    """Audit document: seeds, per-iteration frontier, final pairs, score."""
    score = score_mapping(X, Y, mapping, counting)
    return {
        "schema": "mapping/1",
        "seeds": [list(p) for p in mapping.seed_pairs],
        "frontiers": [[list(p) for p in fr] for fr in mapping.frontier_history],
        "pairs": [[x, y] for x, y in sorted(mapping.pairs.items())],
        "mapped_edges": [list(p) for p in mapping.mapped_edges],
        "score": {"value": score.value, "mapped_elements": score.mapped_elements,
                  "size_x": score.size_x, "size_y": score.size_y},
    }
