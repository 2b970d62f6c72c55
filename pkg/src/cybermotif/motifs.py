"""Colored 3/4-node motif census over simplified Session Graphs.

Roles collapse to three colors (Victim, Bully, Defender) and edge weights to
two buckets (light < 2 <= heavy). Every weakly connected induced subgraph on
3 or 4 nodes is enumerated exactly once with ESU and identified by a canonical
key: the lexicographically smallest encoding over all node orderings.

Key layout: one size byte, one byte per node color, then the k*k adjacency
cells row-major at 2 bits each (0 none, 1 light, 2 heavy), MSB first and
zero-padded to a byte boundary.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property
from itertools import chain, permutations, product
from typing import Iterable, Iterator, Mapping, Sequence

from cybermotif.errors import NotAMotif
from cybermotif.graph import SessionGraph
from cybermotif.roles import BULLY_ROLES, DEFENDER_ROLES, VICTIM_ROLES

HEAVY_THRESHOLD = 2.0
MOTIF_SIZES = (3, 4)


class Color(IntEnum):
    VICTIM = 0
    BULLY = 1
    DEFENDER = 2

    @property
    def letter(self) -> str:
        return self.name[0]


class Bucket(IntEnum):
    NONE = 0
    LIGHT = 1
    HEAVY = 2


def bucket_for(weight: float) -> Bucket:
    return Bucket.HEAVY if weight >= HEAVY_THRESHOLD else Bucket.LIGHT


class SimplifiedGraph:
    """Vertex-colored digraph with bucketed edges on nodes ``0..n-1``."""

    def __init__(
        self,
        colors: Sequence[int],
        edges: Mapping[tuple[int, int], int] | Iterable[tuple[int, int, int]] = (),
        labels: Sequence[object] | None = None,
    ):
        self.colors = [Color(c) for c in colors]
        self.labels = list(labels) if labels is not None else list(range(len(self.colors)))
        n = len(self.colors)
        self.out: list[dict[int, Bucket]] = [{} for _ in range(n)]
        self.neighbors: list[set[int]] = [set() for _ in range(n)]
        items = edges.items() if isinstance(edges, Mapping) else ((
            (u, v), b) for u, v, b in edges)
        for (u, v), b in items:
            b = Bucket(b)
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"bad edge ({u}, {v})")
            if b is Bucket.NONE:
                continue
            self.out[u][v] = b
            self.neighbors[u].add(v)
            self.neighbors[v].add(u)

    def __len__(self) -> int:
        return len(self.colors)

    def cell(self, u: int, v: int) -> int:
        return self.out[u].get(v, 0)

    def edges(self) -> Iterator[tuple[int, int, Bucket]]:
        for u, targets in enumerate(self.out):
            for v, b in sorted(targets.items()):
                yield u, v, b

    def number_of_edges(self) -> int:
        return sum(len(t) for t in self.out)

    def relabel(self, order: Sequence[int]) -> "SimplifiedGraph":
        """Graph whose node ``i`` is this graph's node ``order[i]``."""
        pos = {old: new for new, old in enumerate(order)}
        return SimplifiedGraph(
            [self.colors[o] for o in order],
            [(pos[u], pos[v], b) for u, v, b in self.edges()],
            [self.labels[o] for o in order],
        )


def simplify(graph: SessionGraph) -> SimplifiedGraph:
    nodes = graph.nodes
    index = {n: i for i, n in enumerate(nodes)}
    colors = []
    for n in nodes:
        if n.role in VICTIM_ROLES:
            colors.append(Color.VICTIM)
        elif n.role in BULLY_ROLES:
            colors.append(Color.BULLY)
        elif n.role in DEFENDER_ROLES:
            colors.append(Color.DEFENDER)
        else:
            raise ValueError(f"role {n.role.value} has no motif color")
    edges = {(index[u], index[v]): bucket_for(w) for (u, v), w in graph.edges.items()}
    return SimplifiedGraph(colors, edges, labels=nodes)


# canonical keys -------------------------------------------------------------


def _pack(size: int, colors: Sequence[int], cells: Sequence[int]) -> bytes:
    bits = 0
    for c in cells:
        bits = (bits << 2) | c
    nbytes = (2 * len(cells) + 7) // 8
    bits <<= nbytes * 8 - 2 * len(cells)
    return bytes([size, *colors]) + bits.to_bytes(nbytes, "big")


@dataclass(frozen=True, order=True)
class MotifKey:
    code: bytes

    @classmethod
    def from_hex(cls, text: str) -> "MotifKey":
        key = cls(bytes.fromhex(text))
        colors, edges = key.decode()
        if canonicalize(colors, edges) != key:
            raise NotAMotif(f"{text} is not a canonical motif key")
        return key

    @property
    def hex(self) -> str:
        return self.code.hex()

    def __str__(self) -> str:
        return self.hex

    @property
    def size(self) -> int:
        return self.code[0]

    @property
    def colors(self) -> tuple[Color, ...]:
        return tuple(Color(c) for c in self.code[1 : 1 + self.size])

    @cached_property
    def cells(self) -> tuple[int, ...]:
        k = self.size
        raw = int.from_bytes(self.code[1 + k :], "big")
        total = len(self.code[1 + k :]) * 8
        return tuple((raw >> (total - 2 * (i + 1))) & 3 for i in range(k * k))

    def decode(self) -> tuple[list[Color], list[tuple[int, int, Bucket]]]:
        k = self.size
        edges = [
            (i, j, Bucket(self.cells[i * k + j]))
            for i in range(k)
            for j in range(k)
            if self.cells[i * k + j]
        ]
        return list(self.colors), edges

    def describe(self) -> str:
        """Compact text form, e.g. ``B0->V3 L, B1->V3 H``."""
        colors, edges = self.decode()
        names = [f"{c.letter}{i}" for i, c in enumerate(colors)]
        return ", ".join(f"{names[u]}->{names[v]} {b.name[0]}" for u, v, b in edges)

    def has_directed_cycle(self) -> bool:
        colors, edges = self.decode()
        succ = {i: [v for u, v, _ in edges if u == i] for i in range(len(colors))}
        state = [0] * len(colors)

        def visit(u: int) -> bool:
            state[u] = 1
            for v in succ[u]:
                if state[v] == 1 or (state[v] == 0 and visit(v)):
                    return True
            state[u] = 2
            return False

        return any(state[u] == 0 and visit(u) for u in range(len(colors)))

    def to_dot(self, name: str = "motif") -> str:
        colors, edges = self.decode()
        fill = {Color.VICTIM: "palegreen", Color.BULLY: "orange", Color.DEFENDER: "plum"}
        shape = {Color.VICTIM: "diamond", Color.BULLY: "circle", Color.DEFENDER: "triangle"}
        lines = [f'digraph "{name}" {{', f'  // key {self.hex}']
        for i, c in enumerate(colors):
            lines.append(
                f'  m{i} [label="{c.name.title()}", shape={shape[c]}, style=filled, fillcolor={fill[c]}];'
            )
        for u, v, b in edges:
            width = 3 if b is Bucket.HEAVY else 1
            lines.append(f'  m{u} -> m{v} [bucket="{b.name.lower()}", penwidth={width}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _weakly_connected(k: int, edges: Iterable[tuple[int, int, int]]) -> bool:
    adj: dict[int, set[int]] = {i: set() for i in range(k)}
    for u, v, _ in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == k


def _color_preserving_orders(colors: Sequence[int]) -> Iterator[tuple[int, ...]]:
    # colors lead the encoding, so only orders with sorted colors can be minimal
    groups = [[i for i, c in enumerate(colors) if c == color] for color in sorted(set(colors))]
    for parts in product(*(permutations(g) for g in groups)):
        yield tuple(chain.from_iterable(parts))


_ORDER_TABLE: dict[tuple[int, ...], list[tuple[int, ...]]] = {}


def _cell_maps(colors: Sequence[int]) -> list[tuple[int, ...]]:
    """For each candidate order, the source cell index of every target cell."""
    sig = tuple(colors)
    maps = _ORDER_TABLE.get(sig)
    if maps is None:
        k = len(sig)
        maps = [
            tuple(perm[i] * k + perm[j] for i in range(k) for j in range(k))
            for perm in _color_preserving_orders(sig)
        ]
        _ORDER_TABLE[sig] = maps
    return maps


def _minimal_code(k: int, colors: Sequence[int], cells: Sequence[int]) -> bytes:
    get = cells.__getitem__
    best = min(tuple(map(get, m)) for m in _cell_maps(colors))
    return _pack(k, sorted(colors), best)


def canonicalize(colors: Sequence[int], edges: Iterable[tuple[int, int, int]]) -> MotifKey:
    """Canonical key of a colored, bucketed digraph on 3 or 4 nodes.

    ``edges`` holds ``(source, target, bucket)`` index triples.
    """
    k = len(colors)
    if k not in MOTIF_SIZES:
        raise NotAMotif(f"motifs have 3 or 4 nodes, got {k}")
    colors = [int(Color(c)) for c in colors]
    cells = [0] * (k * k)
    edges = list(edges)
    for u, v, b in edges:
        if u == v or not (0 <= u < k and 0 <= v < k):
            raise NotAMotif(f"bad edge ({u}, {v})")
        b = int(Bucket(b))
        if b == 0:
            continue
        if cells[u * k + v]:
            raise NotAMotif(f"duplicate edge ({u}, {v})")
        cells[u * k + v] = b
    if not _weakly_connected(k, [(u, v, b) for u, v, b in edges if b]):
        raise NotAMotif("subgraph is not weakly connected")
    return MotifKey(_minimal_code(k, colors, cells))


# census ---------------------------------------------------------------------

_RAW_CACHE: dict[int, MotifKey] = {}
_RAW_CACHE_LIMIT = 1 << 20


def _raw_code(graph: SimplifiedGraph, nodes: Sequence[int]) -> int:
    # color-sorted node order, so isomorphic subsets tend to share a raw code
    colors = graph.colors
    nodes = sorted(nodes, key=colors.__getitem__)
    code = len(nodes)
    for u in nodes:
        code = (code << 2) | colors[u]
    out = graph.out
    for u in nodes:
        row = out[u]
        for v in nodes:
            if u != v:
                code = (code << 2) | row.get(v, 0)
    return code


_OFF_DIAGONAL = {k: [i * k + j for i in range(k) for j in range(k) if i != j] for k in MOTIF_SIZES}


def _key_from_raw(raw: int) -> MotifKey:
    key = _RAW_CACHE.get(raw)
    if key is not None:
        return key
    k = 4 if raw >> 32 else 3
    m = k * (k - 1)
    colors = [(raw >> (2 * (m + k - 1 - i))) & 3 for i in range(k)]
    cells = [0] * (k * k)
    for idx, pos in enumerate(_OFF_DIAGONAL[k]):
        cells[pos] = (raw >> (2 * (m - 1 - idx))) & 3
    key = MotifKey(_minimal_code(k, colors, cells))
    if len(_RAW_CACHE) >= _RAW_CACHE_LIMIT:
        _RAW_CACHE.clear()
    _RAW_CACHE[raw] = key
    return key


def classify_subset(graph: SimplifiedGraph, nodes: Sequence[int]) -> MotifKey:
    """Canonical key of the subgraph induced by ``nodes`` (assumed connected)."""
    return _key_from_raw(_raw_code(graph, sorted(nodes)))


def _esu(graph: SimplifiedGraph, sizes: Sequence[int]) -> Iterator[tuple[int, ...]]:
    top = max(sizes)
    wanted = set(sizes)
    nbrs = graph.neighbors
    for root in range(len(graph)):
        stack = [((root,), nbrs[root] | {root}, [u for u in nbrs[root] if u > root])]
        while stack:
            sub, closed, ext = stack.pop()
            if len(sub) in wanted:
                yield sub
            if len(sub) == top:
                continue
            while ext:
                w = ext.pop()
                # exclusive neighbours of w: outside the subgraph and its neighbourhood
                new = [u for u in nbrs[w] if u > root and u not in closed]
                stack.append((sub + (w,), closed | nbrs[w], ext + new))


def connected_subsets(graph: SimplifiedGraph, sizes: Sequence[int] = MOTIF_SIZES) -> Iterator[tuple[int, ...]]:
    """ESU enumeration of weakly connected node subsets with the given sizes.

    Each subset is produced exactly once, as a sorted tuple.
    """
    for sub in _esu(graph, sizes):
        yield tuple(sorted(sub))


def enumerate_motifs(graph: SimplifiedGraph | SessionGraph) -> dict[MotifKey, int]:
    """Exact census ``{key: f}`` of connected induced 3- and 4-node subgraphs."""
    if isinstance(graph, SessionGraph):
        graph = simplify(graph)
    raw_counts = Counter(_raw_code(graph, nodes) for nodes in _esu(graph, MOTIF_SIZES))
    counts: Counter[MotifKey] = Counter()
    for raw, f in raw_counts.items():
        counts[_key_from_raw(raw)] += f
    return dict(sorted(counts.items(), key=lambda kv: kv[0].code))
