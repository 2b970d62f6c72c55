"""Readers for annotation files and the resolved-corpus interchange file.

Annotation input follows ``schemas/annotations-v1.md``. Two encodings are
accepted: JSON Lines (``.jsonl``/``.ndjson``) and CSV, one record per
(comment, annotator) plus one ``main_victim`` record per (session, annotator).
"""

from __future__ import annotations

import csv
import json
from os import PathLike
from pathlib import Path
from typing import Any, Iterator

from cybermotif.consensus import (
    AnnotationRecord,
    CommentBundle,
    IngestSummary,
    ResolvedComment,
    ResolvedSession,
)
from cybermotif.errors import InputError, MalformedRecord, UnknownRole
from cybermotif.roles import MainVictimLabel, MainVictimVote, Role, SeverityLabel

INPUT_SCHEMA = "cybermotif/annotations"
INPUT_SCHEMA_VERSION = 1
RESOLVED_SCHEMA = "cybermotif/resolved-corpus"
RESOLVED_SCHEMA_VERSION = 1
MAX_ANNOTATORS = 5

CSV_COLUMNS = (
    "kind",
    "session_id",
    "comment_id",
    "author",
    "timestamp",
    "annotator_id",
    "is_bullying",
    "role",
    "severity",
    "topics",
    "main_victim",
)

_TRUE = {"1", "true", "t", "yes", "y"}
_FALSE = {"0", "false", "f", "no", "n"}


def detect_format(path: str | PathLike) -> str:
    suffix = Path(path).suffix.lower()
    if suffix in (".jsonl", ".ndjson", ".json"):
        return "jsonl"
    if suffix in (".csv", ".tsv"):
        return "csv"
    raise InputError(f"cannot infer input format from {path!s}; pass --format")


def _iter_jsonl(path: Path) -> Iterator[tuple[str, dict]]:
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            locator = f"{path.name}:{lineno}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(f"invalid JSON ({exc.msg})", locator) from None
            if not isinstance(record, dict):
                raise MalformedRecord("record is not an object", locator)
            yield locator, record


def _iter_csv(path: Path) -> Iterator[tuple[str, dict]]:
    delimiter = "\t" if path.suffix.lower() == ".tsv" else ","
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter=delimiter)
        if reader.fieldnames is None:
            return
        missing = {"kind", "session_id"} - set(reader.fieldnames)
        if missing:
            raise MalformedRecord(f"missing columns {sorted(missing)}", f"{path.name}:1")
        for row in reader:
            if None in row:
                raise MalformedRecord("too many fields", f"{path.name}:{reader.line_num}")
            yield f"{path.name}:{reader.line_num}", {k: v for k, v in row.items() if v != ""}


def _field(record: dict, name: str, locator: str) -> Any:
    try:
        value = record[name]
    except KeyError:
        raise MalformedRecord(f"missing field {name!r}", locator) from None
    if value is None:
        raise MalformedRecord(f"null field {name!r}", locator)
    return value


def _as_bool(value: Any, locator: str) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, int) and value in (0, 1):
        return bool(value)
    text = str(value).strip().lower()
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise MalformedRecord(f"is_bullying must be boolean, got {value!r}", locator)


def _as_int(value: Any, name: str, locator: str) -> int:
    if isinstance(value, bool):
        raise MalformedRecord(f"{name} must be an integer", locator)
    try:
        return int(value)
    except (TypeError, ValueError):
        raise MalformedRecord(f"{name} must be an integer, got {value!r}", locator) from None


def _topics(value: Any) -> tuple[str, ...]:
    if value is None:
        return ()
    if isinstance(value, str):
        return tuple(t.strip() for t in value.split(";") if t.strip())
    return tuple(str(t) for t in value)


def read_annotations(
    path: str | PathLike, fmt: str | None = None
) -> tuple[list[CommentBundle], dict[str, list[MainVictimVote]]]:
    """Group raw rows into comment bundles and per-session main-victim votes."""
    path = Path(path)
    fmt = fmt or detect_format(path)
    if fmt == "jsonl":
        rows = _iter_jsonl(path)
    elif fmt == "csv":
        rows = _iter_csv(path)
    else:
        raise InputError(f"unsupported format {fmt!r}")

    comments: dict[tuple[str, str], dict] = {}
    votes: dict[str, dict[str, MainVictimVote]] = {}
    for locator, record in rows:
        kind = str(record.get("kind", "annotation")).strip().lower()
        version = record.get("schema_version")
        if version is not None and _as_int(version, "schema_version", locator) != INPUT_SCHEMA_VERSION:
            raise MalformedRecord(f"unsupported schema_version {version}", locator)
        session_id = str(_field(record, "session_id", locator))
        annotator = str(_field(record, "annotator_id", locator))
        if kind == "main_victim":
            raw = str(_field(record, "main_victim", locator)).strip().lower()
            try:
                vote = MainVictimVote(raw)
            except ValueError:
                raise MalformedRecord(f"unknown main_victim vote {raw!r}", locator) from None
            bucket = votes.setdefault(session_id, {})
            if annotator in bucket:
                raise MalformedRecord(f"duplicate main_victim vote by {annotator}", locator)
            bucket[annotator] = vote
            continue
        if kind != "annotation":
            raise MalformedRecord(f"unknown record kind {kind!r}", locator)

        comment_id = str(_field(record, "comment_id", locator))
        author = str(_field(record, "author", locator))
        timestamp = _as_int(_field(record, "timestamp", locator), "timestamp", locator)
        try:
            role = Role.parse(str(_field(record, "role", locator)))
        except UnknownRole as exc:
            raise UnknownRole(f"{locator}: {exc}") from None
        try:
            severity = SeverityLabel.parse(str(record.get("severity", "not_bullying")))
        except ValueError:
            raise MalformedRecord(f"unknown severity {record.get('severity')!r}", locator) from None
        annotation = AnnotationRecord(
            annotator_id=annotator,
            is_bullying=_as_bool(_field(record, "is_bullying", locator), locator),
            role=role,
            severity=severity,
            topics=_topics(record.get("topics")),
        )
        try:
            annotation.check()
        except InputError as exc:
            raise type(exc)(f"{locator}: {exc}") from None

        key = (session_id, comment_id)
        entry = comments.get(key)
        if entry is None:
            entry = comments[key] = {"author": author, "timestamp": timestamp, "annotations": {}}
        elif entry["author"] != author or entry["timestamp"] != timestamp:
            raise MalformedRecord(
                f"comment {comment_id} has conflicting author/timestamp across annotators", locator
            )
        if annotator in entry["annotations"]:
            raise MalformedRecord(f"duplicate annotation by {annotator} on comment {comment_id}", locator)
        if len(entry["annotations"]) >= MAX_ANNOTATORS:
            raise MalformedRecord(
                f"comment {comment_id} has more than {MAX_ANNOTATORS} annotations", locator
            )
        entry["annotations"][annotator] = annotation

    bundles = [
        CommentBundle(
            comment_id=comment_id,
            session_id=session_id,
            author=entry["author"],
            timestamp=entry["timestamp"],
            annotations=tuple(entry["annotations"].values()),
        )
        for (session_id, comment_id), entry in sorted(comments.items())
    ]
    return bundles, {sid: list(v.values()) for sid, v in sorted(votes.items())}


# resolved corpus -----------------------------------------------------------


def resolved_to_dict(
    sessions: list[ResolvedSession], summary: IngestSummary | None = None, meta: dict | None = None
) -> dict:
    out: dict[str, Any] = {
        "schema": RESOLVED_SCHEMA,
        "schema_version": RESOLVED_SCHEMA_VERSION,
    }
    if meta:
        out.update(meta)
    if summary is not None:
        out["summary"] = summary.as_dict()
    out["sessions"] = [
        {
            "session_id": s.session_id,
            "main_victim": s.main_victim.value,
            "comments": [
                {
                    "sequence": c.sequence,
                    "comment_id": c.comment_id,
                    "author": c.author,
                    "timestamp": c.timestamp,
                    "role": c.role.value,
                    "severity": c.severity,
                }
                for c in s.comments
            ],
        }
        for s in sessions
    ]
    return out


def write_resolved(path: str | PathLike, sessions, summary=None, meta=None) -> None:
    data = resolved_to_dict(sessions, summary, meta)
    Path(path).write_text(json.dumps(data, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")


def read_resolved(path: str | PathLike) -> list[ResolvedSession]:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"invalid JSON ({exc.msg})", f"{path.name}:{exc.lineno}") from None
    except OSError as exc:
        raise InputError(str(exc)) from None
    if data.get("schema") != RESOLVED_SCHEMA:
        raise MalformedRecord(f"not a resolved corpus (schema={data.get('schema')!r})", path.name)
    if data.get("schema_version") != RESOLVED_SCHEMA_VERSION:
        raise MalformedRecord(f"unsupported schema_version {data.get('schema_version')}", path.name)
    sessions = []
    for i, s in enumerate(data.get("sessions", [])):
        locator = f"{path.name}: sessions[{i}]"
        try:
            sid = str(s["session_id"])
            comments = tuple(
                ResolvedComment(
                    comment_id=str(c["comment_id"]),
                    session_id=sid,
                    author=str(c["author"]),
                    timestamp=int(c["timestamp"]),
                    role=Role.parse(c["role"]),
                    severity=float(c["severity"]),
                    sequence=int(c["sequence"]),
                )
                for c in s["comments"]
            )
            sessions.append(ResolvedSession(sid, MainVictimLabel(s["main_victim"]), comments))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedRecord(f"bad session entry ({exc})", locator) from None
    return sessions
