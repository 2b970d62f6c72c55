from dataclasses import replace

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cybermotif.consensus import ResolvedComment, ResolvedSession
from cybermotif.errors import InvariantViolation
from cybermotif.graph import (
    MAIN_VICTIM,
    NodeId,
    SessionGraph,
    apply_edge_rules,
    build_graph,
    role_sets,
)
from cybermotif.roles import BULLY_ROLES, DEFENDER_ROLES, VICTIM_ROLES, MainVictimLabel, Role

R = Role


def comment(i, user, role, severity=1.0):
    return ResolvedComment(f"c{i}", "s", user, i, role, severity, sequence=i)


def session(*comments):
    return ResolvedSession("s", MainVictimLabel.POSTER, tuple(comments))


def w(g, u, v):
    return round(g.weight(u, v), 2)


def test_example_first_five(example_session):
    first5 = replace(example_session, comments=example_session.comments[:5])
    g = build_graph(first5)
    u1, u2 = NodeId("u1", R.BULLY), NodeId("u2", R.BULLY)
    u3, u4 = NodeId("u3", R.AGGRESSIVE_DEFENDER), NodeId("u4", R.AGGRESSIVE_DEFENDER)
    u5 = NodeId("u5", R.AGGRESSIVE_VICTIM)
    expected = {
        (u1, MAIN_VICTIM): 2.00,
        (u2, MAIN_VICTIM): 1.00,
        (MAIN_VICTIM, u3): 1.60,
        (u3, u1): 1.60,
        (u3, u2): 1.60,
        (MAIN_VICTIM, u4): 1.67,
        (u4, u1): 1.67,
        (u4, u2): 1.67,
        (u5, u1): 1.60,
        (u5, u2): 1.60,
    }
    assert {e: round(x, 2) for e, x in g.edges.items()} == expected


def test_example_full_graph_degrees(example_session):
    g = build_graph(example_session)
    assert (g.number_of_nodes(), g.number_of_edges()) == (9, 18)
    sets = role_sets(g)
    assert (len(sets.victims), len(sets.bullies), len(sets.defenders)) == (3, 3, 3)
    degrees = sorted((round(g.out_degree(n), 2), round(g.in_degree(n), 2)) for n in sets.victims)
    assert degrees == [(3.2, 1.8), (3.27, 4.8), (4.2, 0.0)]
    degrees = sorted((round(g.out_degree(n), 2), round(g.in_degree(n), 2)) for n in sets.bullies)
    assert degrees == [(1.0, 7.27), (2.0, 7.27), (3.6, 2.4)]


def test_rounded_fixture_role_sets(rounded_graph):
    sets = role_sets(rounded_graph)
    assert (len(sets.victims), len(sets.bullies), len(sets.defenders)) == (3, 3, 3)


def test_empty_session():
    g = build_graph(session())
    assert g.nodes == [MAIN_VICTIM] and g.number_of_edges() == 0
    sets = role_sets(g)
    assert sets.victims == {MAIN_VICTIM} and not sets.bullies and not sets.defenders


def test_repeat_accumulates():
    g = build_graph(session(comment(1, "b", R.BULLY, 1.0), comment(2, "b", R.BULLY, 2.0)))
    assert g.edges == {(NodeId("b", R.BULLY), MAIN_VICTIM): 3.0}


def test_aggressive_defender_rule():
    b1, b2 = NodeId("b1", R.BULLY), NodeId("b2", R.BULLY)
    g = build_graph(session(comment(1, "b1", R.BULLY), comment(2, "b2", R.BULLY)))
    before = g.number_of_edges()
    d = NodeId("d", R.AGGRESSIVE_DEFENDER)
    g.add_node(d)
    apply_edge_rules(g, d, 1.60)
    assert g.number_of_edges() - before == 3
    assert g.weight(MAIN_VICTIM, d) == g.weight(d, b1) == g.weight(d, b2) == 1.60


def test_type_a_ignores_severity():
    g = build_graph(session(comment(1, "b", R.BULLY, 2.0), comment(2, "d", R.NON_AGG_DEFENDER_CONFRONT_BULLY, 2.5)))
    assert g.weight(NodeId("d", R.NON_AGG_DEFENDER_CONFRONT_BULLY), NodeId("b", R.BULLY)) == 1.0


def test_type_b_supports_all_victims():
    g = build_graph(
        session(
            comment(1, "v", R.NON_AGGRESSIVE_VICTIM),
            comment(2, "d", R.NON_AGG_DEFENDER_SUPPORT_VICTIM, 3.0),
        )
    )
    d = NodeId("d", R.NON_AGG_DEFENDER_SUPPORT_VICTIM)
    assert g.weight(MAIN_VICTIM, d) == 1.0
    assert g.weight(NodeId("v", R.NON_AGGRESSIVE_VICTIM), d) == 1.0


def test_bully_into_sentinel_only_graph():
    g = build_graph(session(comment(1, "b", R.BULLY, 2.0)))
    assert g.number_of_edges() == 1


def test_non_aggressive_victim_adds_no_edges():
    g = build_graph(session(comment(1, "b", R.BULLY), comment(2, "v", R.NON_AGGRESSIVE_VICTIM)))
    assert g.number_of_edges() == 1 and g.number_of_nodes() == 3


def test_backward_looking_only():
    # defender first, bully later: the bully's attack does not link to the defender
    g = build_graph(session(comment(1, "d", R.AGGRESSIVE_DEFENDER), comment(2, "b", R.BULLY)))
    d, b = NodeId("d", R.AGGRESSIVE_DEFENDER), NodeId("b", R.BULLY)
    assert g.edges == {(MAIN_VICTIM, d): 1.0, (b, MAIN_VICTIM): 1.0}


def test_two_role_user():
    g = build_graph(session(comment(1, "x", R.BULLY), comment(2, "x", R.AGGRESSIVE_DEFENDER)))
    sets = role_sets(g)
    assert NodeId("x", R.BULLY) in sets.bullies
    assert NodeId("x", R.AGGRESSIVE_DEFENDER) in sets.defenders
    # distinct role nodes of one user may link to each other
    assert g.weight(NodeId("x", R.AGGRESSIVE_DEFENDER), NodeId("x", R.BULLY)) == 1.0


def test_commenting_op_is_not_the_sentinel():
    g = build_graph(session(comment(1, MAIN_VICTIM.user, R.AGGRESSIVE_VICTIM)))
    assert g.number_of_nodes() == 2


@pytest.mark.parametrize("role", [R.MAIN_VICTIM, R.PASSIVE_BYSTANDER])
def test_rejects_non_comment_roles(role):
    with pytest.raises(InvariantViolation):
        build_graph(session(comment(1, "u", role)))


def test_other_session_rejected():
    with pytest.raises(InvariantViolation):
        build_graph(ResolvedSession("s", MainVictimLabel.OTHER))


def test_no_self_loops():
    g = SessionGraph.with_sentinel()
    with pytest.raises(InvariantViolation):
        g.add_weight(MAIN_VICTIM, MAIN_VICTIM, 1.0)


# exports --------------------------------------------------------------------


def test_json_roundtrip(example_session):
    g = build_graph(example_session)
    back = SessionGraph.from_json(g.to_json({"config_hash": "x"}))
    assert back == g
    assert back.main_victim is MainVictimLabel.POSTER


def test_graphml_readback(tmp_path, example_session):
    g = build_graph(example_session)
    path = tmp_path / "g.graphml"
    g.write_graphml(path, meta={"schema_version": 1, "config_hash": "abc"})
    h = nx.read_graphml(path)
    assert h.number_of_nodes() == 9 and h.number_of_edges() == 18
    assert h.graph["config_hash"] == "abc"
    roles = sorted(d["role"] for _, d in h.nodes(data=True))
    assert roles.count("bully") == 3
    assert sorted(d["weight"] for *_, d in h.edges(data=True))[-1] == 2.0


def test_dot(example_session):
    text = build_graph(example_session).to_dot({"config_hash": "abc"})
    assert text.startswith("// config_hash: abc\n")
    assert text.count("->") == 18
    assert sum(1 for line in text.splitlines() if "role=" in line) == 9
    assert 'weight=1.67' in text


# properties -------------------------------------------------------------------

COMMENT_ROLES = [r for r in Role if r not in (R.MAIN_VICTIM, R.PASSIVE_BYSTANDER)]
SEVERITIES = [1.0, 4 / 3, 1.4, 1.5, 1.6, 5 / 3, 2.0, 2.5, 3.0]


@st.composite
def sessions(draw, max_comments=25):
    n = draw(st.integers(0, max_comments))
    users = [f"u{i}" for i in range(draw(st.integers(1, 6)))]
    comments = [
        comment(i + 1, draw(st.sampled_from(users)), draw(st.sampled_from(COMMENT_ROLES)), draw(st.sampled_from(SEVERITIES)))
        for i in range(n)
    ]
    return session(*comments)


def signature(u: NodeId, v: NodeId) -> str | None:
    if u.role in BULLY_ROLES and v.role in VICTIM_ROLES:
        return "B->V"
    if u.role in DEFENDER_ROLES and v.role in BULLY_ROLES:
        return "D->B"
    if u.role in VICTIM_ROLES and v.role in DEFENDER_ROLES:
        return "V->D"
    if u.role is R.AGGRESSIVE_VICTIM and v.role in BULLY_ROLES:
        return "Vagg->B"
    return None


@settings(max_examples=150)
@given(sessions())
def test_structural_invariants(s):
    g = build_graph(s)
    pairs = {(c.author, c.role) for c in s.comments}
    assert g.number_of_nodes() == 1 + len(pairs)
    for (u, v), weight in g.edges.items():
        assert u != v and weight > 0
        assert u in g and v in g
        assert signature(u, v) is not None
    assert build_graph(s) == g


@settings(max_examples=100)
@given(sessions(max_comments=15))
def test_prefix_monotone(s):
    prev = build_graph(replace(s, comments=()))
    for k in range(1, len(s.comments) + 1):
        cur = build_graph(replace(s, comments=s.comments[:k]))
        assert set(prev.nodes) <= set(cur.nodes)
        for e, weight in prev.edges.items():
            assert cur.edges[e] >= weight
        prev = cur
