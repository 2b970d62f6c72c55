"""Victim/Bully power-balance scores and corpus-level summaries."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from cybermotif.errors import Unclassifiable
from cybermotif.graph import SessionGraph, role_sets


class Quadrant(str, Enum):
    QI = "QI"
    QII = "QII"
    QIII = "QIII"
    QIV = "QIV"


def _net_flow(graph: SessionGraph, members) -> float:
    return sum(graph.out_degree(n) - graph.in_degree(n) for n in members)


def victim_score(graph: SessionGraph) -> float:
    """Mean weighted out-degree minus in-degree over the victim set."""
    victims = role_sets(graph).victims
    if not victims:
        raise ValueError("graph has no victim nodes")
    return _net_flow(graph, victims) / len(victims)


def bully_score(graph: SessionGraph) -> float | None:
    bullies = role_sets(graph).bullies
    if not bullies:
        return None
    return _net_flow(graph, bullies) / len(bullies)


@dataclass(frozen=True)
class SessionScores:
    session_id: str
    victim_score: float
    bully_score: float | None
    victim_count: int
    bully_count: int
    defender_count: int = 0
    victim_out: float = 0.0
    victim_in: float = 0.0
    bully_out: float = 0.0
    bully_in: float = 0.0
    nodes: int = 0
    edges: int = 0

    @property
    def victim_avg_out(self) -> float:
        return self.victim_out / self.victim_count

    @property
    def victim_avg_in(self) -> float:
        return self.victim_in / self.victim_count

    @property
    def bully_avg_out(self) -> float | None:
        return self.bully_out / self.bully_count if self.bully_count else None

    @property
    def bully_avg_in(self) -> float | None:
        return self.bully_in / self.bully_count if self.bully_count else None

    @property
    def quadrant(self) -> Quadrant | None:
        if self.bully_score is None:
            return None
        return classify(self.victim_score, self.bully_score)


def score_session(graph: SessionGraph) -> SessionScores:
    sets = role_sets(graph)
    return SessionScores(
        session_id=graph.session_id,
        victim_score=victim_score(graph),
        bully_score=bully_score(graph),
        victim_count=len(sets.victims),
        bully_count=len(sets.bullies),
        defender_count=len(sets.defenders),
        victim_out=sum(graph.out_degree(n) for n in sets.victims),
        victim_in=sum(graph.in_degree(n) for n in sets.victims),
        bully_out=sum(graph.out_degree(n) for n in sets.bullies),
        bully_in=sum(graph.in_degree(n) for n in sets.bullies),
        nodes=graph.number_of_nodes(),
        edges=graph.number_of_edges(),
    )


def classify(victim: float, bully: float) -> Quadrant:
    # zero counts as non-negative
    if victim >= 0:
        return Quadrant.QI if bully >= 0 else Quadrant.QII
    return Quadrant.QIV if bully >= 0 else Quadrant.QIII


def quadrant(scores: SessionScores) -> Quadrant:
    if scores.bully_score is None:
        raise Unclassifiable(f"session {scores.session_id} has no bullies")
    return classify(scores.victim_score, scores.bully_score)


# corpus statistics ----------------------------------------------------------


@dataclass(frozen=True)
class MetricSummary:
    n: int
    median: float
    mean: float
    ci_lower: float
    ci_upper: float


@dataclass(frozen=True)
class HistogramBin:
    lower: float
    upper: float
    count: int
    negative: int
    nonnegative: int


@dataclass
class CorpusStats:
    sessions: int
    sessions_without_bullies: int
    metrics: dict[str, MetricSummary]
    histograms: dict[str, list[HistogramBin]]
    quadrant_counts: dict[Quadrant, int] = field(default_factory=dict)
    bin_width: float = 10.0
    resamples: int = 10_000
    seed: int = 0
    confidence: float = 0.95


def bootstrap_mean_ci(
    values: Sequence[float],
    resamples: int = 10_000,
    confidence: float = 0.95,
    rng: np.random.Generator | None = None,
) -> tuple[float, float]:
    """Percentile bootstrap interval for the mean."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("cannot bootstrap an empty sample")
    if np.ptp(x) == 0:
        return float(x[0]), float(x[0])
    rng = rng if rng is not None else np.random.default_rng(0)
    alpha = (1.0 - confidence) / 2.0
    means = np.empty(resamples)
    # chunked to bound memory on large corpora
    chunk = max(1, 2_000_000 // x.size)
    for start in range(0, resamples, chunk):
        stop = min(resamples, start + chunk)
        idx = rng.integers(0, x.size, size=(stop - start, x.size))
        means[start:stop] = x[idx].mean(axis=1)
    lo, hi = np.quantile(means, [alpha, 1.0 - alpha])
    return float(lo), float(hi)


def summarize(
    values: Sequence[float],
    resamples: int = 10_000,
    confidence: float = 0.95,
    rng: np.random.Generator | None = None,
) -> MetricSummary:
    x = np.asarray(values, dtype=float)
    if np.ptp(x) == 0:
        v = float(x[0])
        return MetricSummary(int(x.size), v, v, v, v)
    lo, hi = bootstrap_mean_ci(x, resamples, confidence, rng)
    return MetricSummary(int(x.size), float(np.median(x)), float(x.mean()), lo, hi)


def histogram(values: Sequence[float], bin_width: float = 10.0) -> list[HistogramBin]:
    """Zero-aligned bins ``[k*w, (k+1)*w)`` from the lowest to the highest occupied bin."""
    if bin_width <= 0:
        raise ValueError("bin width must be positive")
    if len(values) == 0:
        return []
    index = [math.floor(v / bin_width) for v in values]
    counts: dict[int, list[int]] = {}
    for k, v in zip(index, values):
        slot = counts.setdefault(k, [0, 0])
        slot[0 if v < 0 else 1] += 1
    bins = []
    for k in range(min(index), max(index) + 1):
        neg, nonneg = counts.get(k, (0, 0))
        bins.append(HistogramBin(k * bin_width, (k + 1) * bin_width, neg + nonneg, neg, nonneg))
    return bins


METRICS = (
    "nodes",
    "edges",
    "victim_count",
    "victim_avg_out",
    "victim_avg_in",
    "victim_score",
    "bully_count",
    "bully_avg_out",
    "bully_avg_in",
    "bully_score",
)


def corpus_stats(
    scores: Sequence[SessionScores],
    bin_width: float = 10.0,
    resamples: int = 10_000,
    seed: int = 0,
    confidence: float = 0.95,
) -> CorpusStats:
    """Median, mean and bootstrap CI per metric plus score histograms.

    Bully-side degree and score metrics only cover sessions that have at
    least one bully; ``bully_count`` covers every session.
    """
    if not scores:
        raise ValueError("no sessions to summarize")
    with_bullies = [s for s in scores if s.bully_score is not None]
    columns: dict[str, list[float]] = {
        "nodes": [s.nodes for s in scores],
        "edges": [s.edges for s in scores],
        "victim_count": [s.victim_count for s in scores],
        "victim_avg_out": [s.victim_avg_out for s in scores],
        "victim_avg_in": [s.victim_avg_in for s in scores],
        "victim_score": [s.victim_score for s in scores],
        "bully_count": [s.bully_count for s in scores],
        "bully_avg_out": [s.bully_avg_out for s in with_bullies],
        "bully_avg_in": [s.bully_avg_in for s in with_bullies],
        "bully_score": [s.bully_score for s in with_bullies],
    }
    metrics = {}
    for i, name in enumerate(METRICS):
        values = columns[name]
        if not values:
            continue
        rng = np.random.default_rng([seed, i])
        metrics[name] = summarize(values, resamples, confidence, rng)
    quadrants = {q: 0 for q in Quadrant}
    for s in with_bullies:
        quadrants[s.quadrant] += 1
    return CorpusStats(
        sessions=len(scores),
        sessions_without_bullies=len(scores) - len(with_bullies),
        metrics=metrics,
        histograms={
            "victim_score": histogram(columns["victim_score"], bin_width),
            "bully_score": histogram(columns["bully_score"], bin_width),
        },
        quadrant_counts=quadrants,
        bin_width=bin_width,
        resamples=resamples,
        seed=seed,
        confidence=confidence,
    )
