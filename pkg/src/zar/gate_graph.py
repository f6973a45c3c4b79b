"""Interaction graph of the executable CZ front, AOD/SLM partition, run coloring.

Blue (AOD) nodes are processed in descending degree; the first processed one
ends up rightmost in the AOD row. Because AOD qubits only sweep left to right,
a blue node further left must reach a shared SLM partner strictly later than
every blue node to its right, and the SLM order must admit every visit of
every AOD qubit without crossings. ``color_edges`` keeps that precedence
relation (``induced_order``) acyclic while picking least admissible colors.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from zar.circuit import Gate

Edge = tuple[int, int]


def edge_key(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class InteractionGraph:
    nodes: tuple[int, ...]
    edges: tuple[Edge, ...]
    gate_of: dict[Edge, int]
    adj: dict[int, tuple[int, ...]]
    deferred: tuple[int, ...] = ()

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def subgraph(self, edges: Iterable[Edge]) -> InteractionGraph:
        return _make_graph([(e, self.gate_of[e]) for e in edges])


def _make_graph(items: Sequence[tuple[Edge, int]], deferred: Sequence[int] = ()) -> InteractionGraph:
    adj: dict[int, list[int]] = defaultdict(list)
    gate_of: dict[Edge, int] = {}
    for (a, b), gate in items:
        gate_of[(a, b)] = gate
        adj[a].append(b)
        adj[b].append(a)
    edges = tuple(sorted(gate_of, key=gate_of.__getitem__))
    return InteractionGraph(
        nodes=tuple(sorted(adj)),
        edges=edges,
        gate_of=gate_of,
        adj={v: tuple(sorted(ns)) for v, ns in adj.items()},
        deferred=tuple(deferred),
    )


def build_graph(front: Iterable[Gate]) -> InteractionGraph:
    """One node per touched qubit, one edge per CZ; repeated pairs are deferred."""
    items: list[tuple[Edge, int]] = []
    seen: set[Edge] = set()
    deferred: list[int] = []
    for g in sorted(front, key=lambda g: g.index):
        if not g.is_cz:
            raise ValueError(f"gate {g.index} is not a CZ")
        e = edge_key(*g.qubits)
        if e in seen:
            deferred.append(g.index)
            continue
        seen.add(e)
        items.append((e, g.index))
    return _make_graph(items, deferred)


def graph_from_edges(edges: Iterable[tuple[int, int]]) -> InteractionGraph:
    """Test/helper constructor: edges get consecutive gate ids in given order."""
    items = []
    seen = set()
    for i, (a, b) in enumerate(edges):
        e = edge_key(a, b)
        if a == b or e in seen:
            raise ValueError(f"invalid or repeated edge {a}-{b}")
        seen.add(e)
        items.append((e, i))
    return _make_graph(items)


@dataclass(frozen=True)
class Partition:
    aod: frozenset[int]
    slm: frozenset[int]
    covered: tuple[Edge, ...]

    def blue_of(self, e: Edge) -> int:
        return e[0] if e[0] in self.aod else e[1]

    def slm_of(self, e: Edge) -> int:
        return e[1] if e[0] in self.aod else e[0]


def max_independent_set(g: InteractionGraph) -> Partition:
    """Greedy maximal independent set, nodes by (degree desc, id asc)."""
    chosen: set[int] = set()
    blocked: set[int] = set()
    for v in sorted(g.nodes, key=lambda v: (-g.degree(v), v)):
        if v in blocked:
            continue
        chosen.add(v)
        blocked.add(v)
        blocked.update(g.adj[v])
    return make_partition(g, chosen)


def make_partition(g: InteractionGraph, aod: Iterable[int]) -> Partition:
    aod = frozenset(aod)
    covered = tuple(e for e in g.edges if e[0] in aod or e[1] in aod)
    return Partition(aod, frozenset(g.nodes) - aod, covered)


@dataclass
class EdgeColoring:
    color: dict[Edge, int]
    blue_order: list[int]
    induced_order: set[tuple[int, int]] = field(default_factory=set)

    @property
    def num_colors(self) -> int:
        return max(self.color.values(), default=0)

    @property
    def aod_order(self) -> list[int]:
        """AOD qubits left to right."""
        return list(reversed(self.blue_order))

    def slm_nodes(self, p: Partition) -> set[int]:
        return {p.slm_of(e) for e in self.color}

    def edges_of_color(self, t: int) -> list[Edge]:
        return sorted(e for e, c in self.color.items() if c == t)


class _Dag:
    def __init__(self) -> None:
        self.succ: dict[int, set[int]] = defaultdict(set)

    def add(self, a: int, b: int) -> None:
        self.succ[a].add(b)

    def reaches(self, src: int, dst: int, extra: dict[int, set[int]]) -> bool:
        stack = [src]
        seen = {src}
        while stack:
            u = stack.pop()
            for w in self.succ.get(u, set()) | extra.get(u, set()):
                if w == dst:
                    return True
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    def depths(self, nodes: Iterable[int]) -> dict[int, int]:
        """Longest-path depth from any source, for every node in the DAG or ``nodes``."""
        allnodes = set(nodes) | set(self.succ)
        for vs in self.succ.values():
            allnodes |= vs
        indeg = {v: 0 for v in allnodes}
        for u, vs in self.succ.items():
            for w in vs:
                indeg[w] += 1
        depth = {v: 0 for v in allnodes}
        ready = sorted(v for v in allnodes if indeg[v] == 0)
        while ready:
            u = ready.pop()
            for w in self.succ.get(u, ()):
                depth[w] = max(depth[w], depth[u] + 1)
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
        return depth


def color_edges(g: InteractionGraph, p: Partition) -> EdgeColoring:
    """Modified DSatur over the covered edges.

    Blue nodes are taken by (degree desc, id asc). A blue node's edges are
    taken by precedence depth of the SLM endpoint, then saturation (desc),
    then gate index. Each gets the least color that is unused at both ends,
    exceeds every color already at its SLM endpoint, and keeps the
    precedence relation acyclic.
    """
    blue_order = sorted(p.aod, key=lambda v: (-g.degree(v), v))
    color: dict[Edge, int] = {}
    used: dict[int, set[int]] = defaultdict(set)
    dag = _Dag()
    events: list[tuple[int, int]] = []  # (color, slm node) of already processed blue nodes

    for v in blue_order:
        todo = [edge_key(v, s) for s in g.adj[v]]
        depth = dag.depths(p.slm_of(e) for e in todo)
        own: list[tuple[int, int]] = []  # (color, slm node) of v
        while todo:
            e = min(
                todo,
                key=lambda e: (
                    depth[p.slm_of(e)],
                    -len(used[e[0]] | used[e[1]]),
                    g.gate_of[e],
                ),
            )
            todo.remove(e)
            s = p.slm_of(e)
            c = max(used[s], default=0) + 1
            while True:
                if c in used[v]:
                    c += 1
                    continue
                extra = _constraints(s, c, own, events)
                if not dag.reaches(s, s, extra):
                    break
                c += 1
            for a, bs in extra.items():
                for b in bs:
                    dag.add(a, b)
            color[e] = c
            used[v].add(c)
            used[s].add(c)
            own.append((c, s))
        events.extend(own)
    return EdgeColoring(color, blue_order, {(a, b) for a, bs in dag.succ.items() for b in bs})


def _constraints(
    s: int, c: int, own: list[tuple[int, int]], events: list[tuple[int, int]]
) -> dict[int, set[int]]:
    extra: dict[int, set[int]] = defaultdict(set)
    for c2, s2 in own:
        if c2 < c:
            extra[s2].add(s)
        else:
            extra[s].add(s2)
    # blue nodes to the right that are busy at or after c sit right of s
    for c2, s2 in events:
        if c2 >= c and s2 != s:
            extra[s].add(s2)
    return extra


def condition_c_holds(g: InteractionGraph, p: Partition, coloring: EdgeColoring) -> bool:
    """Check a coloring without reusing any of ``color_edges``' machinery.

    True iff exactly the covered edges are colored with positive integers,
    colors are proper, every SLM node's blue neighbours fall into a strict
    visiting order whose union over all SLM nodes is acyclic, and the
    per-AOD-qubit SLM visiting orders combine without a cycle.
    """
    col = coloring.color
    if set(col) != set(p.covered):
        return False
    if any(not isinstance(c, int) or c < 1 for c in col.values()):
        return False
    at: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for (a, b), c in col.items():
        at[a].append((c, b))
        at[b].append((c, a))
    for items in at.values():
        cs = [c for c, _ in items]
        if len(cs) != len(set(cs)):
            return False
    blue_rel: set[tuple[int, int]] = set()
    slm_rel: set[tuple[int, int]] = set()
    for v, items in at.items():
        ordered = [u for _, u in sorted(items)]
        rel = blue_rel if v in p.slm else slm_rel
        rel.update(zip(ordered, ordered[1:]))
    return _acyclic(blue_rel) and _acyclic(slm_rel)


def _acyclic(rel: set[tuple[int, int]]) -> bool:
    nodes = {a for a, _ in rel} | {b for _, b in rel}
    indeg = dict.fromkeys(nodes, 0)
    out: dict[int, list[int]] = defaultdict(list)
    for a, b in rel:
        out[a].append(b)
        indeg[b] += 1
    queue = [v for v in nodes if indeg[v] == 0]
    seen = 0
    while queue:
        u = queue.pop()
        seen += 1
        for w in out[u]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == len(nodes)


def dump_coloring(g: InteractionGraph, p: Partition, coloring: EdgeColoring) -> str:
    """``u v color aod_side`` per edge; uncovered edges get ``-`` for both."""
    lines = []
    for e in g.edges:
        if e in coloring.color:
            lines.append(f"{e[0]} {e[1]} {coloring.color[e]} {p.blue_of(e)}")
        else:
            lines.append(f"{e[0]} {e[1]} - -")
    return "\n".join(lines) + ("\n" if lines else "")


def topological_order(nodes: Iterable[int], rel: Iterable[tuple[int, int]]) -> list[int]:
    """Kahn's algorithm, smallest ready id first. Raises on a cycle."""
    nodes = set(nodes)
    out: dict[int, list[int]] = defaultdict(list)
    indeg = dict.fromkeys(nodes, 0)
    for a, b in rel:
        if a in nodes and b in nodes:
            out[a].append(b)
            indeg[b] += 1
    heap = [v for v in nodes if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        u = heapq.heappop(heap)
        order.append(u)
        for w in out[u]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) != len(nodes):
        raise RuntimeError("precedence relation has a cycle")
    return order
