"""End-to-end analysis run and its on-disk artifacts.

Every file written here starts with the output schema name/version and the
run's config hash. Nothing time- or host-dependent is written, so the same
input and config always produce a byte-identical output tree.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
from dataclasses import asdict, dataclass, field
from decimal import ROUND_DOWN, Decimal
from pathlib import Path
from typing import Sequence

from cybermotif.consensus import ResolvedSession
from cybermotif.errors import EmptyScope, UnknownSession
from cybermotif.graph import SessionGraph, build_graph
from cybermotif.motifs import MotifKey, enumerate_motifs
from cybermotif.prevalence import PrevalenceRow, prevalence_table, rank_motifs, scope_by_quadrant
from cybermotif.scores import CorpusStats, Quadrant, SessionScores, corpus_stats, score_session

logger = logging.getLogger(__name__)

OUTPUT_SCHEMA_VERSION = 1
QUADRANT_LABELS = {
    Quadrant.QI: "Quadrant I",
    Quadrant.QII: "Quadrant II",
    Quadrant.QIII: "Quadrant III",
    Quadrant.QIV: "Quadrant IV",
}


@dataclass
class RunConfig:
    input: str = ""
    input_format: str | None = None
    output_dir: str = "out"
    bin_width: float = 10.0
    resamples: int = 10_000
    seed: int = 0
    top_k: int = 10
    top_k_quadrant: int = 5
    export_graphml: bool = False
    export_dot: bool = False
    export_json: bool = False

    def __post_init__(self):
        if not self.bin_width > 0:
            raise ValueError("bin width must be positive")
        if self.resamples < 1:
            raise ValueError("resamples must be at least 1")

    def digest(self) -> str:
        """Hash of everything that can change outputs; the output dir is excluded."""
        fields = asdict(self)
        fields.pop("output_dir")
        path = Path(fields.pop("input")) if self.input else None
        if path is not None and path.is_file():
            fields["input_sha256"] = hashlib.sha256(path.read_bytes()).hexdigest()
        return hashlib.sha256(json.dumps(fields, sort_keys=True).encode()).hexdigest()[:16]


@dataclass
class SessionResult:
    session: ResolvedSession
    graph: SessionGraph
    scores: SessionScores
    census: dict[MotifKey, int]

    @property
    def session_id(self) -> str:
        return self.session.session_id

    @property
    def quadrant(self) -> Quadrant | None:
        return self.scores.quadrant


@dataclass
class Analysis:
    sessions: list[SessionResult]
    stats: CorpusStats | None
    tables: dict[str, list[PrevalenceRow]] = field(default_factory=dict)
    scope_sizes: dict[str, int] = field(default_factory=dict)


def analyze_session(session: ResolvedSession) -> SessionResult:
    graph = build_graph(session)
    return SessionResult(session, graph, score_session(graph), enumerate_motifs(graph))


def run_analysis(sessions: Sequence[ResolvedSession], config: RunConfig) -> Analysis:
    results = [analyze_session(s) for s in sorted(sessions, key=lambda s: s.session_id)]
    if not results:
        return Analysis([], None)
    stats = corpus_stats(
        [r.scores for r in results],
        bin_width=config.bin_width,
        resamples=config.resamples,
        seed=config.seed,
    )
    analysis = Analysis(results, stats)
    scopes: list[tuple[str, list[SessionResult]]] = [("all", results)]
    for q in Quadrant:
        try:
            scopes.append((q.value, scope_by_quadrant(results, q)))
        except EmptyScope:
            logger.info("quadrant %s is empty; no motif ranking", q.value)
    for name, members in scopes:
        analysis.scope_sizes[name] = len(members)
        table = prevalence_table([m.census for m in members], scope=name)
        analysis.tables[name] = rank_motifs(table) if table.rows else []
    return analysis


# formatting -----------------------------------------------------------------


def truncate2(value: float) -> str:
    """Signed value cut (not rounded) to two decimals, e.g. ``+1.35``."""
    d = Decimal(repr(value)).quantize(Decimal("0.01"), rounding=ROUND_DOWN)
    if d == 0:
        d = abs(d)
    return f"{d:+.2f}"


def _num(x: float | None) -> str:
    return "" if x is None else f"{x:.6f}"


def _header(kind: str, digest: str) -> dict:
    return {
        "schema": f"cybermotif/{kind}",
        "schema_version": OUTPUT_SCHEMA_VERSION,
        "config_hash": digest,
    }


def _csv_text(kind: str, digest: str, columns: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: cybermotif/{kind} v{OUTPUT_SCHEMA_VERSION}\n")
    buf.write(f"# config_hash: {digest}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(kind: str, digest: str, body: dict) -> str:
    data = _header(kind, digest)
    data.update(body)
    return json.dumps(data, indent=1, sort_keys=False, ensure_ascii=False) + "\n"


SCORE_COLUMNS = (
    "session_id",
    "victim_score",
    "bully_score",
    "quadrant",
    "nodes",
    "edges",
    "victim_count",
    "bully_count",
    "defender_count",
    "victim_out",
    "victim_in",
    "bully_out",
    "bully_in",
)


def score_rows(results: Sequence[SessionResult]) -> list[list]:
    rows = []
    for r in results:
        s = r.scores
        rows.append(
            [
                s.session_id,
                _num(s.victim_score),
                _num(s.bully_score),
                s.quadrant.value if s.quadrant else "",
                s.nodes,
                s.edges,
                s.victim_count,
                s.bully_count,
                s.defender_count,
                _num(s.victim_out),
                _num(s.victim_in),
                _num(s.bully_out),
                _num(s.bully_in),
            ]
        )
    return rows


RANK_COLUMNS = (
    "position",
    "motif_key",
    "global_prevalence",
    "local_prevalence",
    "rank_global",
    "rank_local",
    "rank_product",
    "scope",
    "description",
)


def rank_rows(rows: Sequence[PrevalenceRow], scope: str) -> list[list]:
    return [
        [
            i,
            r.key.hex,
            _num(float(r.global_prevalence)),
            _num(float(r.local_prevalence)),
            r.rank_global,
            r.rank_local,
            r.rank_product,
            scope,
            r.key.describe(),
        ]
        for i, r in enumerate(rows, start=1)
    ]


def stats_body(analysis: Analysis, config: RunConfig) -> dict:
    stats = analysis.stats
    body: dict = {
        "sessions": len(analysis.sessions),
        "bin_width": config.bin_width,
        "ci": {"method": "bootstrap-percentile", "level": 0.95, "resamples": config.resamples, "seed": config.seed},
    }
    if stats is None:
        body.update({"metrics": {}, "histograms": {}, "quadrants": {}, "sessions_without_bullies": 0})
        return body
    body["sessions_without_bullies"] = stats.sessions_without_bullies
    body["metrics"] = {name: asdict(m) for name, m in stats.metrics.items()}
    body["histograms"] = {
        name: [asdict(b) for b in bins] for name, bins in stats.histograms.items()
    }
    classified = sum(stats.quadrant_counts.values())
    body["quadrants"] = {
        q.value: {
            "sessions": n,
            "percent": round(100.0 * n / classified, 1) if classified else 0.0,
        }
        for q, n in stats.quadrant_counts.items()
    }
    return body


def render_report(analysis: Analysis, config: RunConfig, digest: str) -> str:
    out = [
        "cybermotif analysis report",
        f"schema: cybermotif/report v{OUTPUT_SCHEMA_VERSION}",
        f"config_hash: {digest}",
        "",
        f"Sessions analyzed: {len(analysis.sessions)}",
    ]
    stats = analysis.stats
    if stats is None:
        out.append("No sessions to analyze.")
        return "\n".join(out) + "\n"
    out.append(
        f"Sessions without bullies: {stats.sessions_without_bullies} "
        "(excluded from bully-score aggregates and quadrant tallies)"
    )
    out.append("")
    classified = sum(stats.quadrant_counts.values())
    out.append("Quadrants")
    for q, n in stats.quadrant_counts.items():
        pct = 100.0 * n / classified if classified else 0.0
        out.append(f"  {QUADRANT_LABELS[q]}: {n} sessions ({pct:.1f}%)")
    out.append("")
    out.append(f"Session graph statistics (95% bootstrap CI, {config.resamples} resamples, seed {config.seed})")
    out.append(f"  {'metric':<16}{'n':>6}{'median':>10}{'mean':>10}{'lower':>10}{'upper':>10}")
    for name, m in stats.metrics.items():
        out.append(
            f"  {name:<16}{m.n:>6}{m.median:>10.2f}{m.mean:>10.2f}{m.ci_lower:>10.2f}{m.ci_upper:>10.2f}"
        )
    for scope, rows in analysis.tables.items():
        k = config.top_k if scope == "all" else config.top_k_quadrant
        title = "all sessions" if scope == "all" else QUADRANT_LABELS[Quadrant(scope)]
        out.append("")
        out.append(f"Top {k} motifs: {title} ({analysis.scope_sizes[scope]} sessions)")
        for i, r in enumerate(rows[:k], start=1):
            out.append(
                f"  {i:>2}. {r.key.hex}  P_global {100 * float(r.global_prevalence):5.1f}%  "
                f"P_local {100 * float(r.local_prevalence):5.1f}%  rank {r.rank_global}x{r.rank_local}={r.rank_product}  "
                f"[{r.key.describe()}]"
            )
    out.append("")
    out.append("Session scores")
    for r in analysis.sessions:
        s = r.scores
        bully = "Bully Score n/a" if s.bully_score is None else f"Bully Score {truncate2(s.bully_score)}"
        quad = s.quadrant.value if s.quadrant else "-"
        out.append(f"  {s.session_id}  Victim Score {truncate2(s.victim_score)}  {bully}  {quad}")
    return "\n".join(out) + "\n"


def write_graph_files(graph: SessionGraph, directory: Path, digest: str, formats: Sequence[str]) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    meta = {"schema_version": OUTPUT_SCHEMA_VERSION, "config_hash": digest}
    written = []
    stem = _safe_name(graph.session_id)
    if "graphml" in formats:
        path = directory / f"{stem}.graphml"
        graph.write_graphml(path, meta={"schema": "cybermotif/session-graph", **meta})
        written.append(path)
    if "dot" in formats:
        path = directory / f"{stem}.dot"
        path.write_text(graph.to_dot({"schema": "cybermotif/session-graph v1", "config_hash": digest}))
        written.append(path)
    if "json" in formats:
        path = directory / f"{stem}.json"
        path.write_text(graph.to_json({"config_hash": digest}), encoding="utf-8")
        written.append(path)
    return written


def _safe_name(text: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in text) or "session"


def write_outputs(analysis: Analysis, config: RunConfig, out_dir: str | Path | None = None) -> list[Path]:
    out = Path(out_dir or config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    digest = config.digest()
    files: dict[str, str] = {}

    files["scores.csv"] = _csv_text("scores", digest, SCORE_COLUMNS, score_rows(analysis.sessions))
    files["stats.json"] = _json_text("stats", digest, stats_body(analysis, config))
    if analysis.stats is not None:
        for name, bins in analysis.stats.histograms.items():
            files[f"histogram_{name}.csv"] = _csv_text(
                "histogram",
                digest,
                ("lower", "upper", "count", "negative", "nonnegative"),
                [[_num(b.lower), _num(b.upper), b.count, b.negative, b.nonnegative] for b in bins],
            )
    census_rows = [
        [r.session_id, key.hex, f] for r in analysis.sessions for key, f in r.census.items()
    ]
    files["census.csv"] = _csv_text("census", digest, ("session_id", "motif_key", "f"), census_rows)
    for scope, rows in analysis.tables.items():
        files[f"motifs_{scope}.csv"] = _csv_text("motif-ranking", digest, RANK_COLUMNS, rank_rows(rows, scope))
    files["report.txt"] = render_report(analysis, config, digest)

    written = []
    for name, text in files.items():
        path = out / name
        path.write_text(text, encoding="utf-8")
        written.append(path)

    if config.export_dot and analysis.tables:
        bundle = out / "motifs_dot"
        bundle.mkdir(exist_ok=True)
        for scope, rows in analysis.tables.items():
            k = config.top_k if scope == "all" else config.top_k_quadrant
            for i, r in enumerate(rows[:k], start=1):
                path = bundle / f"{scope}_{i:02d}_{r.key.hex}.dot"
                path.write_text(f"// config_hash: {digest}\n" + r.key.to_dot(f"{scope}_{i}"))
                written.append(path)
    formats = [f for f, on in (("graphml", config.export_graphml), ("dot", config.export_dot), ("json", config.export_json)) if on]
    if formats:
        for r in analysis.sessions:
            written += write_graph_files(r.graph, out / "graphs", digest, formats)
    return written


def find_session(sessions: Sequence[ResolvedSession], session_id: str) -> ResolvedSession:
    for s in sessions:
        if s.session_id == session_id:
            return s
    raise UnknownSession(f"unknown session id {session_id!r}")
