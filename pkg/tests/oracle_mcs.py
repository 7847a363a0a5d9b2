"""Exhaustive maximum-common-substructure oracle for small graphs.

Maximizes mapped nodes plus mapped edges over every injective node mapping
whose pairs satisfy valid_match, by branch and bound. Only usable for graphs
of ten-odd nodes; the production path never calls this.
"""

from __future__ import annotations

import random
from itertools import permutations

from bsim.matcher import valid_match
from bsim.matcher.matching import _labels_compatible
from bsim.pidg import Pidg, PidgEdge, PidgNode
from bsim.pidg.graph import make_attrs


def _edge_bundles(graph: Pidg) -> dict[tuple[int, int], list[PidgEdge]]:
    bundles: dict[tuple[int, int], list[PidgEdge]] = {}
    for e in graph.edges:
        bundles.setdefault((e.src, e.dst), []).append(e)
    return bundles


def _bundle_match(xs: list[PidgEdge], ys: list[PidgEdge]) -> int:
    """Exact maximum matching between two small parallel-edge bundles."""
    if not xs or not ys:
        return 0
    if len(xs) > len(ys):
        xs, ys = ys, xs
    best = 0
    for perm in permutations(range(len(ys)), len(xs)):
        score = sum(1 for k, yk in enumerate(perm)
                    if xs[k].edge_type == ys[yk].edge_type
                    and _labels_compatible(xs[k], ys[yk]))
        best = max(best, score)
    return best


def max_common_substructure(X: Pidg, Y: Pidg) -> int:
    """Largest mapped element count (nodes + edges) over valid mappings."""
    nx = len(X.nodes)
    bundles_x = _edge_bundles(X)
    bundles_y = _edge_bundles(Y)
    compatible = [[b.idx for b in Y.nodes if valid_match(a, b)] for a in X.nodes]
    # edges with at least one endpoint at index >= k (for the bound)
    edges_beyond = []
    for k in range(nx + 1):
        edges_beyond.append(sum(1 for e in X.edges if e.src >= k or e.dst >= k))

    best = 0

    def edge_gain(mapping: dict[int, int], xk: int, yk: int) -> int:
        gain = 0
        for xj, yj in mapping.items():
            for (sx, dx), (sy, dy) in (((xk, xj), (yk, yj)), ((xj, xk), (yj, yk))):
                xs = bundles_x.get((sx, dx))
                if xs:
                    gain += _bundle_match(xs, bundles_y.get((sy, dy), []))
        xs = bundles_x.get((xk, xk))
        if xs:
            gain += _bundle_match(xs, bundles_y.get((yk, yk), []))
        return gain

    def explore(k: int, mapping: dict[int, int], used_y: set[int], total: int):
        nonlocal best
        if total + (nx - k) + edges_beyond[k] <= best:
            return
        if k == nx:
            best = max(best, total)
            return
        for yk in compatible[k]:
            if yk in used_y:
                continue
            gain = 1 + edge_gain(mapping, k, yk)
            mapping[k] = yk
            used_y.add(yk)
            explore(k + 1, mapping, used_y, total + gain)
            del mapping[k]
            used_y.discard(yk)
        explore(k + 1, mapping, used_y, total)

    explore(0, {}, set(), 0)
    return best


def oracle_similarity(X: Pidg, Y: Pidg) -> float:
    total = X.size() + Y.size()
    if total == 0:
        return 0.0
    return min(1.0, 2.0 * max_common_substructure(X, Y) / total)


# ------------------------------------------------------------- random graphs

_OPERATORS = ("+", "-", "*", "concat")
_SIGNATURES = ("Api.get/1", "Api.put/2", "Log.write/1")


def random_graph(rng: random.Random, max_nodes: int = 10,
                 steps: int | None = None) -> Pidg:
    """A small connected graph grown the way traces grow them.

    Starts from the entry point and its parameter data, then repeatedly
    attaches an operator (inputs from existing data, fresh result), an API
    call (scope/params from existing data, synthetic result), or an
    aggregation child of an object. Every component therefore touches a
    point of reference, like real graphs of programs that use their inputs.
    """
    nodes: list[PidgNode] = []
    edges: list[PidgEdge] = []
    data: list[int] = []
    objects: list[int] = []

    def add(node_type, **kw):
        node = PidgNode(idx=len(nodes), node_type=node_type, **kw)
        nodes.append(node)
        return node.idx

    def add_data(symbolic=True, object_=False, synthetic=False):
        flags = {"symbolic"} if symbolic else {"concrete"}
        if synthetic:
            flags.add("synthetic")
        if object_:
            idx = add("data", data_kind="object",
                      attrs=make_attrs(runtime_type=rng.choice(("String", "Box"))),
                      flags=frozenset(flags),
                      source_defined=rng.random() < 0.25)
            objects.append(idx)
        else:
            literal = None if symbolic else str(rng.randint(0, 3))
            idx = add("data", data_kind="value",
                      attrs=make_attrs(runtime_type="int", literal=literal),
                      flags=frozenset(flags))
        data.append(idx)
        return idx

    add("entry", attrs=make_attrs(signature="E.main/1", entry_name="main",
                                  entry_arity="1"))
    params = rng.randint(1, 2)
    for _ in range(params):
        p = add_data(object_=rng.random() < 0.4)
        nodes[p] = PidgNode(idx=p, node_type="data", data_kind=nodes[p].data_kind,
                            attrs=nodes[p].attrs,
                            flags=nodes[p].flags | {"entry_point_parameter"},
                            source_defined=nodes[p].source_defined)
        edges.append(PidgEdge(0, p, "parameter"))

    grow = steps if steps is not None else rng.randint(1, 4)
    for _ in range(grow):
        if len(nodes) >= max_nodes - 1:
            break
        roll = rng.random()
        if roll < 0.55:
            op = add("operator", attrs=make_attrs(operator=rng.choice(_OPERATORS),
                                                  result_type="int"))
            for _ in range(rng.randint(1, 2)):
                src = rng.choice(data)
                edges.append(PidgEdge(src, op, "transformation"))
            result = add_data(symbolic=True)
            edges.append(PidgEdge(op, result, "transformation"))
        elif roll < 0.8:
            call = add("call", attrs=make_attrs(signature=rng.choice(_SIGNATURES)))
            edges.append(PidgEdge(rng.choice(data), call, "parameter"))
            if objects and rng.random() < 0.5:
                edges.append(PidgEdge(rng.choice(objects), call, "scope"))
            if rng.random() < 0.7 and len(nodes) < max_nodes:
                result = add_data(symbolic=True, synthetic=True,
                                  object_=rng.random() < 0.3)
                edges.append(PidgEdge(call, result, "supplied"))
        elif objects:
            owner = rng.choice(objects)
            child = add_data(object_=rng.random() < 0.3)
            comparable = not nodes[owner].source_defined
            edges.append(PidgEdge(owner, child, "aggregation",
                                  label=rng.choice(("a", "b")),
                                  label_comparable=comparable))
    # de-duplicate parallel identical edges (edge sets)
    unique = []
    seen = set()
    for e in edges:
        key = (e.src, e.dst, e.edge_type, e.label)
        if key not in seen:
            seen.add(key)
            unique.append(e)
    return Pidg(nodes=nodes, edges=unique, entry=0)


def related_pair(rng: random.Random, max_nodes: int = 10) -> tuple[Pidg, Pidg]:
    """Two graphs grown from the same prefix: one keeps growing."""
    seed = rng.random()
    steps = rng.randint(1, 3)
    extra = rng.randint(1, 2)
    g1 = random_graph(random.Random(seed), max_nodes, steps=steps)
    g2 = random_graph(random.Random(seed), max_nodes, steps=steps + extra)
    return g1, g2


def perturbed_copy(graph: Pidg, rng: random.Random) -> Pidg:
    """A structural sibling: drop a trailing element or retype one operator."""
    nodes = list(graph.nodes)
    edges = list(graph.edges)
    if edges and rng.random() < 0.5:
        edges.pop()
    op_idxs = [k for k, node in enumerate(nodes) if node.node_type == "operator"]
    if op_idxs and rng.random() < 0.5:
        k = rng.choice(op_idxs)
        old = nodes[k]
        nodes[k] = PidgNode(idx=old.idx, node_type="operator",
                            attrs=make_attrs(operator=rng.choice(_OPERATORS),
                                             result_type="int"))
    return Pidg(nodes=nodes, edges=edges, entry=graph.entry)
