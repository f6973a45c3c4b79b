"""Brute-force reference implementations shared by the tests."""

import itertools
from collections import defaultdict

import networkx as nx


def condition_c(coloring: dict, aod: set) -> bool:
    """Proper coloring whose visiting orders combine without cycles."""
    at = defaultdict(list)
    for (a, b), c in coloring.items():
        at[a].append((c, b))
        at[b].append((c, a))
    for items in at.values():
        if len({c for c, _ in items}) != len(items):
            return False
    blue, slm = nx.DiGraph(), nx.DiGraph()
    for v, items in at.items():
        seq = [u for _, u in sorted(items)]
        (slm if v in aod else blue).add_edges_from(zip(seq, seq[1:]))
    return nx.is_directed_acyclic_graph(blue) and nx.is_directed_acyclic_graph(slm)


def min_condition_c_colors(edges: list, aod: set, upper: int) -> int:
    """Fewest colors (values in 1..k) of a condition-(C) coloring, searched up to ``upper``."""
    if not edges:
        return 0
    deg = defaultdict(int)
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    for k in range(max(deg.values()), upper + 1):
        if _search(edges, aod, k, 0, {}, defaultdict(set)):
            return k
    return upper + 1


def _search(edges, aod, k, i, col, used):
    if i == len(edges):
        return condition_c(col, aod)
    a, b = edges[i]
    for c in range(1, k + 1):
        if c in used[a] or c in used[b]:
            continue
        col[edges[i]] = c
        used[a].add(c)
        used[b].add(c)
        # a violation persists under extension, so prune early
        if condition_c(col, aod) and _search(edges, aod, k, i + 1, col, used):
            return True
        del col[edges[i]]
        used[a].discard(c)
        used[b].discard(c)
    return False


def is_independent(adj: dict, s: set) -> bool:
    return all(b not in s for a in s for b in adj[a])


def is_maximal_independent(adj: dict, s: set) -> bool:
    return is_independent(adj, s) and all(v in s or any(u in s for u in adj[v]) for v in adj)


def min_batches(seq: list) -> int:
    """Fewest increasing subsequences covering ``seq`` (exhaustive)."""
    n = len(seq)
    for k in range(1, n + 1):
        for labels in itertools.product(range(k), repeat=n):
            groups = defaultdict(list)
            for x, lab in zip(seq, labels):
                groups[lab].append(x)
            if all(g == sorted(g) and len(set(g)) == len(g) for g in groups.values()):
                return k
    return 0
