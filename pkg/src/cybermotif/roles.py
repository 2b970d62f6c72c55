"""Label vocabularies shared by every stage of the pipeline."""

from __future__ import annotations

from enum import Enum

from cybermotif.errors import UnknownRole


class Role(str, Enum):
    BULLY = "bully"
    BULLY_ASSISTANT = "bully_assistant"
    AGGRESSIVE_VICTIM = "aggressive_victim"
    NON_AGGRESSIVE_VICTIM = "non_aggressive_victim"
    MAIN_VICTIM = "main_victim"
    AGGRESSIVE_DEFENDER = "aggressive_defender"
    # Type B: supports the victim
    NON_AGG_DEFENDER_SUPPORT_VICTIM = "non_aggressive_defender:support_of_the_victim"
    # Type A: confronts the bully directly
    NON_AGG_DEFENDER_CONFRONT_BULLY = "non_aggressive_defender:direct_to_the_bully"
    PASSIVE_BYSTANDER = "passive_bystander"

    @classmethod
    def parse(cls, text: str) -> "Role":
        key = text.strip().lower()
        try:
            return cls(key)
        except ValueError:
            pass
        alias = _ROLE_ALIASES.get(key.replace("-", "_").replace(" ", "_"))
        if alias is None:
            raise UnknownRole(f"unknown role {text!r}")
        return alias


_ROLE_ALIASES = {m.name.lower(): m for m in Role}
_ROLE_ALIASES.update(
    {
        "bully_asst": Role.BULLY_ASSISTANT,
        "agg_victim": Role.AGGRESSIVE_VICTIM,
        "non_agg_victim": Role.NON_AGGRESSIVE_VICTIM,
        "agg_def": Role.AGGRESSIVE_DEFENDER,
        "aggressive_defender_of_victim": Role.AGGRESSIVE_DEFENDER,
        "non_agg_defender_victim": Role.NON_AGG_DEFENDER_SUPPORT_VICTIM,
        "non_agg_defender_bully": Role.NON_AGG_DEFENDER_CONFRONT_BULLY,
        "type_b": Role.NON_AGG_DEFENDER_SUPPORT_VICTIM,
        "type_a": Role.NON_AGG_DEFENDER_CONFRONT_BULLY,
        "bystander": Role.PASSIVE_BYSTANDER,
    }
)

BULLY_ROLES = frozenset({Role.BULLY, Role.BULLY_ASSISTANT})
VICTIM_ROLES = frozenset({Role.MAIN_VICTIM, Role.AGGRESSIVE_VICTIM, Role.NON_AGGRESSIVE_VICTIM})
DEFENDER_ROLES = frozenset(
    {
        Role.AGGRESSIVE_DEFENDER,
        Role.NON_AGG_DEFENDER_SUPPORT_VICTIM,
        Role.NON_AGG_DEFENDER_CONFRONT_BULLY,
    }
)


class SeverityLabel(str, Enum):
    NOT_BULLYING = "not_bullying"
    MILD = "mild"
    MODERATE = "moderate"
    SEVERE = "severe"

    @property
    def value_numeric(self) -> int:
        return SEVERITY_SCALE[self]

    @classmethod
    def parse(cls, text: str) -> "SeverityLabel":
        key = text.strip().lower().replace("-", "_").replace(" ", "_")
        if key in ("", "none", "not_cyberbullying", "non_cyberbullying"):
            return cls.NOT_BULLYING
        return cls(key)


SEVERITY_SCALE = {
    SeverityLabel.NOT_BULLYING: 1,
    SeverityLabel.MILD: 1,
    SeverityLabel.MODERATE: 2,
    SeverityLabel.SEVERE: 3,
}


class MainVictimVote(str, Enum):
    OP = "op"
    PICTURE = "picture"
    PARTICIPANTS = "participants"
    OTHER = "other"


class MainVictimLabel(str, Enum):
    POSTER = "poster"
    PARTICIPANTS = "participants"
    OTHER = "other"
