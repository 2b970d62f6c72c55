"""Command line entry point: ``cybermotif <subcommand> ...``.

Exit codes: 0 success, 1 input error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from cybermotif.consensus import ResolvedSession, load_corpus
from cybermotif.errors import EmptyScope, InputError, InvariantViolation
from cybermotif.io import RESOLVED_SCHEMA, read_resolved, write_resolved
from cybermotif.pipeline import (
    QUADRANT_LABELS,
    RunConfig,
    analyze_session,
    find_session,
    rank_rows,
    run_analysis,
    write_graph_files,
    write_outputs,
)
from cybermotif.prevalence import prevalence_table, rank_motifs, scope_by_quadrant
from cybermotif.scores import Quadrant

log = logging.getLogger("cybermotif")

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


def _is_resolved(path: Path) -> bool:
    if path.suffix.lower() != ".json":
        return False
    try:
        with path.open(encoding="utf-8") as fh:
            head = fh.read(4096)
    except OSError:
        return False
    return RESOLVED_SCHEMA in head


def load_sessions(path: str, fmt: str | None = None) -> list[ResolvedSession]:
    """Read either a resolved corpus or a raw annotation file."""
    p = Path(path)
    if not p.exists():
        raise InputError(f"{path}: no such file")
    if _is_resolved(p):
        return read_resolved(p)
    return load_corpus(p, fmt)[0]


def cmd_ingest(args) -> int:
    sessions, summary = load_corpus(args.input, args.format)
    config = RunConfig(input=args.input, input_format=args.format)
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_resolved(out, sessions, summary, meta={"config_hash": config.digest()})
    print(
        f"{summary.sessions_read} sessions read, {summary.sessions_retained} retained "
        f"({summary.sessions_other} excluded with main victim 'other')"
    )
    print(
        f"{summary.comments_read} comments read, {summary.comments_retained} retained "
        f"({summary.comments_bystander} passive bystander comments dropped)"
    )
    print(f"wrote {out}")
    return EXIT_OK


def _config(args) -> RunConfig:
    return RunConfig(
        input=args.input,
        input_format=args.format,
        output_dir=args.output,
        bin_width=args.bin_width,
        resamples=args.resamples,
        seed=args.seed,
        top_k=args.top_k,
        top_k_quadrant=args.top_k_quadrant,
        export_graphml=args.graphml,
        export_dot=args.dot,
        export_json=args.json,
    )


def cmd_analyze(args) -> int:
    try:
        config = _config(args)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    sessions = load_sessions(args.input, args.format)
    analysis = run_analysis(sessions, config)
    written = write_outputs(analysis, config)
    print(f"analyzed {len(analysis.sessions)} sessions; wrote {len(written)} files to {config.output_dir}")
    if analysis.stats is not None:
        classified = sum(analysis.stats.quadrant_counts.values())
        for q, n in analysis.stats.quadrant_counts.items():
            pct = 100.0 * n / classified if classified else 0.0
            print(f"  {QUADRANT_LABELS[q]}: {n} sessions ({pct:.1f}%)")
    return EXIT_OK


def cmd_export_graph(args) -> int:
    sessions = load_sessions(args.input, args.format)
    session = find_session(sessions, args.session_id)
    result = analyze_session(session)
    formats = [f.strip() for f in args.formats.split(",") if f.strip()]
    bad = set(formats) - {"graphml", "dot", "json"}
    if bad:
        raise InputError(f"unknown export format(s): {', '.join(sorted(bad))}")
    digest = RunConfig(input=args.input, input_format=args.format).digest()
    for path in write_graph_files(result.graph, Path(args.output), digest, formats):
        print(path)
    return EXIT_OK


def cmd_top_motifs(args) -> int:
    sessions = load_sessions(args.input, args.format)
    results = [analyze_session(s) for s in sorted(sessions, key=lambda s: s.session_id)]
    if args.scope == "all":
        members = results
    else:
        members = scope_by_quadrant(results, Quadrant(args.scope))
    k = args.k if args.k is not None else (10 if args.scope == "all" else 5)
    rows = rank_motifs(prevalence_table([m.census for m in members], scope=args.scope))[:k]
    if args.json_out:
        print(json.dumps([dict(zip(("position", "motif_key", "global_prevalence", "local_prevalence",
                                    "rank_global", "rank_local", "rank_product", "scope", "description"), r))
                          for r in rank_rows(rows, args.scope)], indent=1))
    else:
        print(f"scope {args.scope}: {len(members)} sessions")
        for i, r in enumerate(rows, start=1):
            print(
                f"{i:>3}. {r.key.hex}  P_global={float(r.global_prevalence):.4f}  "
                f"P_local={float(r.local_prevalence):.4f}  rank={r.rank_global}x{r.rank_local}={r.rank_product}  "
                f"{r.key.describe()}"
            )
    if args.dot_dir:
        out = Path(args.dot_dir)
        out.mkdir(parents=True, exist_ok=True)
        for i, r in enumerate(rows, start=1):
            (out / f"{args.scope}_{i:02d}_{r.key.hex}.dot").write_text(r.key.to_dot(f"{args.scope}_{i}"))
    return EXIT_OK


def cmd_synth(args) -> int:
    from cybermotif.synthetic import generate_records, write_jsonl

    records = generate_records(args.sessions, args.other, seed=args.seed)
    write_jsonl(records, args.output)
    print(f"wrote {len(records)} records for {args.sessions} sessions to {args.output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cybermotif", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input(p):
        p.add_argument("input", help="annotation file (.jsonl/.csv) or resolved corpus (.json)")
        p.add_argument("--format", choices=("jsonl", "csv"), default=None, help="annotation file format")

    p = sub.add_parser("ingest", help="apply annotator consensus and write a resolved corpus")
    add_input(p)
    p.add_argument("-o", "--output", default="resolved.json")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("analyze", help="scores, quadrants, motif census and rankings")
    add_input(p)
    p.add_argument("-o", "--output", default="out", help="output directory")
    p.add_argument("--bin-width", type=float, default=10.0)
    p.add_argument("--resamples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--top-k-quadrant", type=int, default=5)
    p.add_argument("--graphml", action="store_true", help="also export every session graph as GraphML")
    p.add_argument("--dot", action="store_true", help="also export DOT graphs and top-motif DOT bundle")
    p.add_argument("--json", action="store_true", help="also export JSON adjacency graphs")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("export-graph", help="export one session graph")
    add_input(p)
    p.add_argument("session_id")
    p.add_argument("-o", "--output", default=".", help="output directory")
    p.add_argument("--formats", default="graphml,dot,json")
    p.set_defaults(func=cmd_export_graph)

    p = sub.add_parser("top-motifs", help="print the top ranked motifs for a scope")
    add_input(p)
    p.add_argument("--scope", choices=("all",) + tuple(q.value for q in Quadrant), default="all")
    p.add_argument("-k", type=int, default=None, help="default 10 for all, 5 per quadrant")
    p.add_argument("--dot-dir", default=None, help="write DOT renderings of the listed motifs here")
    p.add_argument("--json", dest="json_out", action="store_true", help="print JSON instead of text")
    p.set_defaults(func=cmd_top_motifs)

    p = sub.add_parser("synth", help="write a seeded synthetic annotation corpus")
    p.add_argument("-o", "--output", default="synthetic.jsonl")
    p.add_argument("--sessions", type=int, default=40)
    p.add_argument("--other", type=int, default=0, help="sessions whose main victim vote is 'other'")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (InputError, EmptyScope) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
