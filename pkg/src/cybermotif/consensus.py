"""Reduce per-annotator comment labels to one consensus record per comment.

The pipeline per comment is: split annotators on the is-bullying flag and keep
the majority side, take the plurality role within that side (falling back to
a fixed preference order on ties), and average the kept severities. Comments
that resolve to Passive Bystander are dropped. Sessions are kept only when the
Main Victim vote lands on Poster or Participants.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from os import PathLike
from typing import Iterable, Sequence

from cybermotif.errors import EmptyMajority, InconsistentAnnotation, MalformedRecord
from cybermotif.roles import (
    SEVERITY_SCALE,
    MainVictimLabel,
    MainVictimVote,
    Role,
    SeverityLabel,
)

logger = logging.getLogger(__name__)

BULLYING_PREFERENCE = (
    Role.AGGRESSIVE_DEFENDER,
    Role.AGGRESSIVE_VICTIM,
    Role.BULLY_ASSISTANT,
    Role.BULLY,
)
NOT_BULLYING_PREFERENCE = (
    Role.NON_AGG_DEFENDER_SUPPORT_VICTIM,
    Role.NON_AGG_DEFENDER_CONFRONT_BULLY,
    Role.NON_AGGRESSIVE_VICTIM,
    Role.PASSIVE_BYSTANDER,
)


@dataclass(frozen=True)
class AnnotationRecord:
    annotator_id: str
    is_bullying: bool
    role: Role
    severity: SeverityLabel
    topics: tuple[str, ...] = ()

    def check(self) -> None:
        if self.role is Role.MAIN_VICTIM:
            raise InconsistentAnnotation(
                f"annotator {self.annotator_id}: main_victim is not a comment role"
            )
        if not self.is_bullying and self.severity is not SeverityLabel.NOT_BULLYING:
            raise InconsistentAnnotation(
                f"annotator {self.annotator_id}: severity {self.severity.value} "
                "on a comment marked not bullying"
            )
        if self.is_bullying and self.role is Role.PASSIVE_BYSTANDER:
            raise InconsistentAnnotation(
                f"annotator {self.annotator_id}: passive_bystander on a comment marked bullying"
            )


@dataclass(frozen=True)
class CommentBundle:
    comment_id: str
    session_id: str
    author: str
    timestamp: int
    annotations: tuple[AnnotationRecord, ...]


@dataclass(frozen=True)
class ResolvedComment:
    comment_id: str
    session_id: str
    author: str
    timestamp: int
    role: Role
    severity: float
    # 1-based position within the session; 0 until the session is assembled
    sequence: int = 0


@dataclass(frozen=True)
class ResolvedSession:
    session_id: str
    main_victim: MainVictimLabel
    comments: tuple[ResolvedComment, ...] = ()


@dataclass
class IngestSummary:
    sessions_read: int = 0
    sessions_retained: int = 0
    sessions_other: int = 0
    comments_read: int = 0
    comments_retained: int = 0
    comments_bystander: int = 0
    main_victim_ties: int = 0
    participants_other_ties: int = 0
    excluded_sessions: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "sessions_read": self.sessions_read,
            "sessions_retained": self.sessions_retained,
            "sessions_other": self.sessions_other,
            "comments_read": self.comments_read,
            "comments_retained": self.comments_retained,
            "comments_bystander": self.comments_bystander,
            "main_victim_ties": self.main_victim_ties,
            "participants_other_ties": self.participants_other_ties,
            "excluded_sessions": list(self.excluded_sessions),
        }


def map_severity(labels: Sequence[SeverityLabel]) -> float:
    """Mean of the numeric severity scale over the given (majority) labels."""
    if not labels:
        raise EmptyMajority("no majority annotators to average severity over")
    return sum(SEVERITY_SCALE[label] for label in labels) / len(labels)


def _preference(is_bullying: bool) -> tuple[Role, ...]:
    if is_bullying:
        head, tail = BULLYING_PREFERENCE, NOT_BULLYING_PREFERENCE
    else:
        head, tail = NOT_BULLYING_PREFERENCE, BULLYING_PREFERENCE
    return head + tail


def majority_side(annotations: Sequence[AnnotationRecord]) -> list[AnnotationRecord]:
    bullying = [a for a in annotations if a.is_bullying]
    not_bullying = [a for a in annotations if not a.is_bullying]
    # even split goes to the conservative side
    if len(bullying) > len(not_bullying):
        return bullying
    return not_bullying


def plurality_role(kept: Sequence[AnnotationRecord]) -> Role:
    counts = Counter(a.role for a in kept)
    top = max(counts.values())
    tied = {role for role, n in counts.items() if n == top}
    if len(tied) == 1:
        return tied.pop()
    for role in _preference(kept[0].is_bullying):
        if role in tied:
            return role
    raise AssertionError("preference order does not cover tied roles")  # pragma: no cover


def resolve_comment(bundle: CommentBundle) -> ResolvedComment | None:
    """Consensus role and severity for one comment, or ``None`` for bystanders."""
    if not bundle.annotations:
        raise EmptyMajority(f"comment {bundle.comment_id} has no annotations")
    for record in bundle.annotations:
        record.check()
    kept = majority_side(bundle.annotations)
    role = plurality_role(kept)
    if role is Role.PASSIVE_BYSTANDER:
        return None
    return ResolvedComment(
        comment_id=bundle.comment_id,
        session_id=bundle.session_id,
        author=bundle.author,
        timestamp=bundle.timestamp,
        role=role,
        severity=map_severity([a.severity for a in kept]),
    )


def _merge_vote(vote: MainVictimVote | MainVictimLabel) -> MainVictimLabel:
    if vote in (MainVictimVote.OP, MainVictimVote.PICTURE, MainVictimLabel.POSTER):
        return MainVictimLabel.POSTER
    if vote in (MainVictimVote.PARTICIPANTS, MainVictimLabel.PARTICIPANTS):
        return MainVictimLabel.PARTICIPANTS
    return MainVictimLabel.OTHER


def resolve_main_victim(votes: Iterable[MainVictimVote | MainVictimLabel]) -> MainVictimLabel:
    """Majority vote after merging OP and Picture into Poster.

    Poster wins any tie it is part of; a Participants/Other tie goes to
    Participants so the session stays analyzable.
    """
    counts = Counter(_merge_vote(v) for v in votes)
    if not counts:
        raise ValueError("no main victim votes")
    top = max(counts.values())
    tied = [label for label in MainVictimLabel if counts.get(label, 0) == top]
    if len(tied) > 1 and MainVictimLabel.POSTER not in tied:
        logger.warning("participants/other tie in main victim vote; choosing participants")
    return tied[0]


def _main_victim_tie(votes: Iterable[MainVictimVote]) -> bool:
    counts = Counter(_merge_vote(v) for v in votes)
    top = max(counts.values())
    return sum(1 for n in counts.values() if n == top) > 1


def resolve_session(
    session_id: str,
    bundles: Iterable[CommentBundle],
    votes: Sequence[MainVictimVote],
    summary: IngestSummary | None = None,
) -> ResolvedSession:
    summary = summary if summary is not None else IngestSummary()
    main_victim = resolve_main_victim(votes)
    if _main_victim_tie(votes):
        summary.main_victim_ties += 1
        if main_victim is MainVictimLabel.PARTICIPANTS:
            summary.participants_other_ties += 1
    resolved = []
    for bundle in bundles:
        summary.comments_read += 1
        comment = resolve_comment(bundle)
        if comment is None:
            summary.comments_bystander += 1
            continue
        resolved.append(comment)
    resolved.sort(key=lambda c: (c.timestamp, c.comment_id))
    comments = tuple(replace(c, sequence=i) for i, c in enumerate(resolved, start=1))
    return ResolvedSession(session_id=session_id, main_victim=main_victim, comments=comments)


def resolve_corpus(
    bundles: Iterable[CommentBundle],
    votes: dict[str, list[MainVictimVote]],
) -> tuple[list[ResolvedSession], IngestSummary]:
    by_session: dict[str, list[CommentBundle]] = {}
    for bundle in bundles:
        by_session.setdefault(bundle.session_id, []).append(bundle)
    summary = IngestSummary()
    sessions = []
    for session_id in sorted(set(by_session) | set(votes)):
        if not votes.get(session_id):
            raise MalformedRecord("no main_victim votes", locator=f"session {session_id}")
        summary.sessions_read += 1
        session = resolve_session(session_id, by_session.get(session_id, []), votes[session_id], summary)
        if session.main_victim is MainVictimLabel.OTHER:
            summary.sessions_other += 1
            summary.excluded_sessions.append(session_id)
            continue
        summary.comments_retained += len(session.comments)
        sessions.append(session)
    summary.sessions_retained = len(sessions)
    return sessions, summary


def load_corpus(
    path: str | PathLike, fmt: str | None = None
) -> tuple[list[ResolvedSession], IngestSummary]:
    """Parse an annotation file and apply consensus; also return drop counts."""
    from cybermotif.io import read_annotations

    bundles, votes = read_annotations(path, fmt)
    if not bundles and not votes:
        logger.warning("%s contains no records", path)
    sessions, summary = resolve_corpus(bundles, votes)
    logger.info(
        "ingested %d sessions (%d excluded as other), %d/%d comments kept (%d bystander)",
        summary.sessions_retained,
        summary.sessions_other,
        summary.comments_retained,
        summary.comments_read,
        summary.comments_bystander,
    )
    return sessions, summary


def ingest_corpus(path: str | PathLike, fmt: str | None = None) -> list[ResolvedSession]:
    return load_corpus(path, fmt)[0]
