"""Independent reference implementations used only by the tests.

Nothing here calls into the enumeration or canonical-labeling code paths it
checks; brute force is the point.
"""

from __future__ import annotations

import random
from itertools import combinations, permutations

from cybermotif.motifs import SimplifiedGraph, canonicalize


def weakly_connected(nodes, edges) -> bool:
    nodes = list(nodes)
    adj = {u: set() for u in nodes}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen, frontier = {nodes[0]}, [nodes[0]]
    while frontier:
        u = frontier.pop()
        for w in adj[u] - seen:
            seen.add(w)
            frontier.append(w)
    return len(seen) == len(nodes)


def induced(graph: SimplifiedGraph, subset):
    """(colors, edges) of the induced subgraph, reindexed 0..k-1."""
    pos = {u: i for i, u in enumerate(subset)}
    colors = [graph.colors[u] for u in subset]
    edges = [
        (pos[u], pos[v], graph.out[u][v])
        for u in subset
        for v in subset
        if u != v and v in graph.out[u]
    ]
    return colors, edges


def brute_force_census(graph: SimplifiedGraph) -> dict:
    counts: dict = {}
    n = len(graph)
    for k in (3, 4):
        for subset in combinations(range(n), k):
            colors, edges = induced(graph, subset)
            if not weakly_connected(range(k), [(u, v) for u, v, _ in edges]):
                continue
            key = canonicalize(colors, edges)
            counts[key] = counts.get(key, 0) + 1
    return counts


def isomorphic(colors_a, edges_a, colors_b, edges_b) -> bool:
    """Color- and bucket-preserving isomorphism by trying every bijection."""
    if len(colors_a) != len(colors_b) or len(edges_a) != len(edges_b):
        return False
    ea = {(u, v): int(b) for u, v, b in edges_a}
    eb = {(u, v): int(b) for u, v, b in edges_b}
    k = len(colors_a)
    for perm in permutations(range(k)):
        if any(int(colors_a[i]) != int(colors_b[perm[i]]) for i in range(k)):
            continue
        if all(eb.get((perm[u], perm[v])) == b for (u, v), b in ea.items()):
            return True
    return False


def random_simplified(rng: random.Random, n: int, density: float) -> SimplifiedGraph:
    colors = [rng.randrange(3) for _ in range(n)]
    edges = {}
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < density:
                edges[(u, v)] = rng.choice((1, 2))
    return SimplifiedGraph(colors, edges)


def random_motif_graph(rng: random.Random, k: int | None = None):
    """Random weakly connected colored digraph on 3 or 4 nodes."""
    k = k or rng.choice((3, 4))
    while True:
        colors = [rng.randrange(3) for _ in range(k)]
        edges = []
        for u in range(k):
            for v in range(k):
                if u != v and rng.random() < 0.4:
                    edges.append((u, v, rng.choice((1, 2))))
        if edges and weakly_connected(range(k), [(u, v) for u, v, _ in edges]):
            return colors, edges
