from __future__ import annotations

import pytest

from cybermotif.consensus import (
    AnnotationRecord,
    CommentBundle,
    ResolvedSession,
    resolve_session,
)
from cybermotif.graph import MAIN_VICTIM, NodeId, SessionGraph
from cybermotif.roles import MainVictimLabel, MainVictimVote, Role, SeverityLabel

R = Role
S = SeverityLabel


def ann(annotator, role, severity=None, is_bullying=None):
    if is_bullying is None:
        is_bullying = role in (R.BULLY, R.BULLY_ASSISTANT, R.AGGRESSIVE_VICTIM, R.AGGRESSIVE_DEFENDER)
    if severity is None:
        severity = S.MILD if is_bullying else S.NOT_BULLYING
    return AnnotationRecord(str(annotator), is_bullying, role, severity)


def bundle(comment_id, author, timestamp, annotations, session_id="ex1"):
    return CommentBundle(comment_id, session_id, author, timestamp, tuple(annotations))


def _bully_side(role, severities, extra_not=0):
    recs = [ann(f"a{i}", role, sev) for i, sev in enumerate(severities)]
    recs += [ann(f"n{i}", R.PASSIVE_BYSTANDER) for i in range(extra_not)]
    return recs


def example_bundles():
    """Annotations reproducing the eight-comment example session.

    Severities: 2.00, 1.00, 1.60, 1.67, 1.60, 1.80, 1.40, and 1 for the
    type A defender.
    """
    M, D = S.MILD, S.MODERATE
    return [
        bundle("c1", "u1", 100, _bully_side(R.BULLY, [D, D, D], extra_not=2)),
        bundle("c2", "u2", 110, _bully_side(R.BULLY, [M, M, M], extra_not=2)),
        bundle("c3", "u3", 120, _bully_side(R.AGGRESSIVE_DEFENDER, [M, M, D, D, D])),
        bundle(
            "c4",
            "u4",
            130,
            [
                ann("a0", R.AGGRESSIVE_DEFENDER, D),
                ann("a1", R.AGGRESSIVE_DEFENDER, D),
                ann("a2", R.BULLY, M),
                ann("a3", R.PASSIVE_BYSTANDER),
                ann("a4", R.NON_AGGRESSIVE_VICTIM),
            ],
        ),
        bundle(
            "c5",
            "u5",
            140,
            [
                ann("a0", R.AGGRESSIVE_VICTIM, M),
                ann("a1", R.AGGRESSIVE_VICTIM, M),
                ann("a2", R.AGGRESSIVE_VICTIM, D),
                ann("a3", R.BULLY, D),
                ann("a4", R.BULLY, D),
            ],
        ),
        bundle("c6", "u6", 150, _bully_side(R.BULLY, [D, D, D, M, D])),
        bundle("c7", "u3", 160, _bully_side(R.AGGRESSIVE_VICTIM, [M, M, D, D, M])),
        bundle(
            "c8",
            "u7",
            170,
            [
                ann("a0", R.NON_AGG_DEFENDER_CONFRONT_BULLY),
                ann("a1", R.NON_AGG_DEFENDER_CONFRONT_BULLY),
                ann("a2", R.NON_AGG_DEFENDER_CONFRONT_BULLY),
                ann("a3", R.BULLY, S.SEVERE),
                ann("a4", R.PASSIVE_BYSTANDER),
            ],
        ),
    ]


@pytest.fixture
def example_session() -> ResolvedSession:
    votes = [MainVictimVote.OP, MainVictimVote.OP, MainVictimVote.PICTURE, MainVictimVote.PARTICIPANTS, MainVictimVote.OTHER]
    return resolve_session("ex1", example_bundles(), votes)


def rounded_degree_graph() -> SessionGraph:
    """The example session with every edge weight rounded to two decimals,
    so node degrees are exact two-decimal values."""
    b1, b2, b3 = (NodeId(u, R.BULLY) for u in ("b1", "b2", "b3"))
    av1, av2 = NodeId("av1", R.AGGRESSIVE_VICTIM), NodeId("av2", R.AGGRESSIVE_VICTIM)
    ad1, ad2 = NodeId("ad1", R.AGGRESSIVE_DEFENDER), NodeId("ad2", R.AGGRESSIVE_DEFENDER)
    na = NodeId("na", R.NON_AGG_DEFENDER_CONFRONT_BULLY)
    g = SessionGraph.with_sentinel("rounded", MainVictimLabel.POSTER)
    for n in (b1, b2, ad1, ad2, av1, b3, av2, na):
        g.add_node(n)
    edges = [
        (b1, MAIN_VICTIM, 2.0),
        (b2, MAIN_VICTIM, 1.0),
        (MAIN_VICTIM, ad1, 1.60),
        (ad1, b1, 1.60),
        (ad1, b2, 1.60),
        (MAIN_VICTIM, ad2, 1.67),
        (ad2, b1, 1.67),
        (ad2, b2, 1.67),
        (av1, b1, 1.60),
        (av1, b2, 1.60),
        (b3, MAIN_VICTIM, 1.80),
        (b3, av1, 1.80),
        (av2, b1, 1.40),
        (av2, b2, 1.40),
        (av2, b3, 1.40),
        (na, b1, 1.0),
        (na, b2, 1.0),
        (na, b3, 1.0),
    ]
    for u, v, w in edges:
        g.add_weight(u, v, w)
    return g


@pytest.fixture
def rounded_graph() -> SessionGraph:
    return rounded_degree_graph()


def example_records() -> list[dict]:
    """The example session as raw annotation records (with main victim votes)."""
    records = []
    for b in example_bundles():
        for a in b.annotations:
            records.append(
                {
                    "kind": "annotation",
                    "session_id": b.session_id,
                    "comment_id": b.comment_id,
                    "author": b.author,
                    "timestamp": b.timestamp,
                    "annotator_id": a.annotator_id,
                    "is_bullying": a.is_bullying,
                    "role": a.role.value,
                    "severity": a.severity.value,
                    "topics": [],
                }
            )
    for i, v in enumerate(["op", "op", "picture", "participants", "other"]):
        records.append({"kind": "main_victim", "session_id": "ex1", "annotator_id": f"a{i}", "main_victim": v})
    return records


def pytest_terminal_summary(terminalreporter):
    results = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(report, "user_properties", ()))
            if "criterion" in props and report.when == "call":
                results[props["criterion"]] = "PASS" if outcome == "passed" else "FAIL"
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(results, key=lambda s: int(s.split(".")[0])):
        terminalreporter.write_line(f"{results[name]}  {name}")
