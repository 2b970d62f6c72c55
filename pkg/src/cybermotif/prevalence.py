"""Global/Local motif prevalence and rank-product ordering.

Prevalence values are kept as exact fractions so that ties in the dense
ranking are real ties and not floating point noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Sequence, TypeVar

from cybermotif.errors import EmptyScope
from cybermotif.motifs import MotifKey

Census = Mapping[MotifKey, int]
T = TypeVar("T")


def _check_scope(censuses: Sequence[Census]) -> None:
    if not censuses:
        raise EmptyScope("session scope is empty")


def global_prevalence(motif: MotifKey, censuses: Sequence[Census]) -> Fraction:
    """Share of sessions in which ``motif`` occurs at least once."""
    _check_scope(censuses)
    hits = sum(1 for c in censuses if c.get(motif, 0) > 0)
    return Fraction(hits, len(censuses))


def local_prevalence(motif: MotifKey, censuses: Sequence[Census]) -> Fraction:
    """Mean over sessions of the motif's share of that session's census.

    Sessions with an empty census contribute zero but still count.
    """
    _check_scope(censuses)
    total = Fraction(0)
    for c in censuses:
        f = c.get(motif, 0)
        if f:
            total += Fraction(f, sum(c.values()))
    return total / len(censuses)


def dense_rank(values: Sequence[Any], descending: bool = True) -> list[int]:
    distinct = sorted(set(values), reverse=descending)
    rank = {v: i for i, v in enumerate(distinct, start=1)}
    return [rank[v] for v in values]


@dataclass
class PrevalenceRow:
    key: MotifKey
    global_prevalence: Any
    local_prevalence: Any
    rank_global: int = 0
    rank_local: int = 0

    @property
    def rank_product(self) -> int:
        return self.rank_global * self.rank_local


@dataclass
class PrevalenceTable:
    scope: str
    sessions: int
    rows: list[PrevalenceRow] = field(default_factory=list)

    @classmethod
    def from_values(cls, values: Mapping[MotifKey, tuple[Any, Any]], scope: str = "all", sessions: int = 0):
        table = cls(scope, sessions, [PrevalenceRow(k, g, l) for k, (g, l) in values.items()])
        table.assign_ranks()
        return table

    def assign_ranks(self) -> None:
        g = dense_rank([r.global_prevalence for r in self.rows])
        l = dense_rank([r.local_prevalence for r in self.rows])
        for row, rg, rl in zip(self.rows, g, l):
            row.rank_global = rg
            row.rank_local = rl

    def __getitem__(self, key: MotifKey) -> PrevalenceRow:
        for row in self.rows:
            if row.key == key:
                return row
        raise KeyError(key)

    def __len__(self) -> int:
        return len(self.rows)


def prevalence_table(censuses: Sequence[Census], scope: str = "all") -> PrevalenceTable:
    """Both prevalence measures and dense ranks for every motif seen in scope."""
    _check_scope(censuses)
    n = len(censuses)
    hits: dict[MotifKey, int] = {}
    shares: dict[MotifKey, Fraction] = {}
    for c in censuses:
        total = sum(c.values())
        for key, f in c.items():
            if f <= 0:
                continue
            hits[key] = hits.get(key, 0) + 1
            shares[key] = shares.get(key, Fraction(0)) + Fraction(f, total)
    rows = [
        PrevalenceRow(key, Fraction(hits[key], n), shares[key] / n) for key in sorted(hits)
    ]
    table = PrevalenceTable(scope, n, rows)
    table.assign_ranks()
    return table


def rank_motifs(table: PrevalenceTable) -> list[PrevalenceRow]:
    """Rows by ascending rank product; ties by global desc, local desc, key."""
    if not table.rows:
        raise EmptyScope(f"no motifs in scope {table.scope}")
    ordered = sorted(table.rows, key=lambda r: r.key)
    ordered.sort(key=lambda r: r.local_prevalence, reverse=True)
    ordered.sort(key=lambda r: r.global_prevalence, reverse=True)
    ordered.sort(key=lambda r: r.rank_product)
    return ordered


def scope_by_quadrant(
    sessions: Iterable[T], quadrant: Any, key: Callable[[T], Any] = lambda s: s.quadrant
) -> list[T]:
    scoped = [s for s in sessions if key(s) == quadrant]
    if not scoped:
        raise EmptyScope(f"no sessions in quadrant {getattr(quadrant, 'value', quadrant)}")
    return scoped
