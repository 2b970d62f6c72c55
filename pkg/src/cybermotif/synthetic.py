"""Seeded synthetic annotation corpora in the input schema.

Used for demos, determinism checks and end-to-end tests; the real annotated
dataset is not bundled.
"""

from __future__ import annotations

import json
import random
from os import PathLike
from pathlib import Path

from cybermotif.roles import Role

BULLYING_SIDE = (
    Role.BULLY,
    Role.BULLY_ASSISTANT,
    Role.AGGRESSIVE_VICTIM,
    Role.AGGRESSIVE_DEFENDER,
)
# rough shape of the role mix in a bullying-heavy comment thread
ROLE_WEIGHTS = {
    Role.PASSIVE_BYSTANDER: 0.42,
    Role.BULLY: 0.28,
    Role.AGGRESSIVE_DEFENDER: 0.07,
    Role.NON_AGGRESSIVE_VICTIM: 0.06,
    Role.NON_AGG_DEFENDER_SUPPORT_VICTIM: 0.05,
    Role.NON_AGG_DEFENDER_CONFRONT_BULLY: 0.04,
    Role.AGGRESSIVE_VICTIM: 0.04,
    Role.BULLY_ASSISTANT: 0.04,
}
SEVERITIES = ("mild", "moderate", "severe")


def _annotation(rng: random.Random, role: Role) -> tuple[bool, str, str]:
    is_bullying = role in BULLYING_SIDE
    if is_bullying:
        severity = rng.choices(SEVERITIES, weights=(0.6, 0.3, 0.1))[0]
    else:
        severity = "not_bullying"
    return is_bullying, role.value, severity


def generate_records(
    n_sessions: int = 40,
    n_other: int = 0,
    seed: int = 0,
    annotators: int = 5,
    agreement: float = 0.7,
    max_users: int = 12,
    max_comments: int = 30,
) -> list[dict]:
    """Raw input records for ``n_sessions`` sessions, ``n_other`` of which
    carry an "other" main-victim majority."""
    if not 0 <= n_other <= n_sessions:
        raise ValueError("n_other must lie in [0, n_sessions]")
    rng = random.Random(seed)
    other = set(rng.sample(range(n_sessions), n_other))
    roles = list(ROLE_WEIGHTS)
    weights = list(ROLE_WEIGHTS.values())
    width = len(str(n_sessions))
    records: list[dict] = []
    for s in range(n_sessions):
        sid = f"s{s:0{width}d}"
        pool = [f"user{u:02d}" for u in range(rng.randint(2, max_users))]
        t = 1_380_000_000 + rng.randrange(10**7)
        for c in range(rng.randint(3, max_comments)):
            # occasional identical timestamps exercise the comment_id tie-break
            t += rng.choice((0, 1, 30, 120, 600))
            true_role = rng.choices(roles, weights)[0]
            author = rng.choice(pool)
            for a in range(annotators):
                role = true_role if rng.random() < agreement else rng.choices(roles, weights)[0]
                is_bullying, role_text, severity = _annotation(rng, role)
                records.append(
                    {
                        "kind": "annotation",
                        "session_id": sid,
                        "comment_id": f"{sid}-c{c:03d}",
                        "author": author,
                        "timestamp": t,
                        "annotator_id": f"a{a}",
                        "is_bullying": is_bullying,
                        "role": role_text,
                        "severity": severity,
                        "topics": rng.sample(["appearance", "race", "gender", "social status"], rng.randint(0, 2)),
                    }
                )
        if s in other:
            votes = ["other"] * 3 + rng.choices(["op", "picture", "participants"], k=2)
        else:
            target = rng.choices(["op", "picture", "participants"], weights=(0.5, 0.2, 0.3))[0]
            votes = [target] * 3 + rng.choices(["op", "picture", "participants", "other"], k=2)
        rng.shuffle(votes)
        for a, vote in enumerate(votes):
            records.append({"kind": "main_victim", "session_id": sid, "annotator_id": f"a{a}", "main_victim": vote})
    return records


def write_jsonl(records: list[dict], path: str | PathLike) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
    return path
