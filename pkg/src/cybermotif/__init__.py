"""Role-labeled interaction graphs, power-balance scores and colored motif
census for annotated cyberbullying sessions."""

from cybermotif.consensus import (
    map_severity,
    resolve_comment,
    resolve_main_victim,
    ingest_corpus,
)
from cybermotif.graph import SessionGraph, NodeId, MAIN_VICTIM, build_graph, role_sets
from cybermotif.motifs import MotifKey, canonicalize, enumerate_motifs, simplify
from cybermotif.prevalence import (
    global_prevalence,
    local_prevalence,
    prevalence_table,
    rank_motifs,
    scope_by_quadrant,
)
from cybermotif.roles import MainVictimLabel, Role, SeverityLabel
from cybermotif.scores import (
    Quadrant,
    SessionScores,
    bully_score,
    corpus_stats,
    quadrant,
    score_session,
    victim_score,
)

__version__ = "0.1.0"

__all__ = [
    "MAIN_VICTIM",
    "MainVictimLabel",
    "MotifKey",
    "NodeId",
    "Quadrant",
    "Role",
    "SessionGraph",
    "SessionScores",
    "SeverityLabel",
    "build_graph",
    "bully_score",
    "canonicalize",
    "corpus_stats",
    "enumerate_motifs",
    "global_prevalence",
    "ingest_corpus",
    "local_prevalence",
    "map_severity",
    "prevalence_table",
    "quadrant",
    "rank_motifs",
    "resolve_comment",
    "resolve_main_victim",
    "role_sets",
    "scope_by_quadrant",
    "score_session",
    "simplify",
    "victim_score",
]
