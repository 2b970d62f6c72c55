"""Session Graph construction.

Nodes are ``(user, role)`` pairs; every graph starts with a Main Victim
sentinel. Comments are replayed oldest first and each one only ever links to
nodes that already exist, so the graph reflects who a commenter could have
been responding to at the time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from cybermotif.consensus import ResolvedComment, ResolvedSession
from cybermotif.errors import InvariantViolation, MalformedRecord
from cybermotif.roles import BULLY_ROLES, DEFENDER_ROLES, VICTIM_ROLES, MainVictimLabel, Role

GRAPH_SCHEMA = "cybermotif/session-graph"
GRAPH_SCHEMA_VERSION = 1


class NodeId(NamedTuple):
    user: str
    role: Role

    def label(self) -> str:
        return f"{self.user}|{self.role.value}"


MAIN_VICTIM_USER = "<main-victim>"
MAIN_VICTIM = NodeId(MAIN_VICTIM_USER, Role.MAIN_VICTIM)


@dataclass(frozen=True)
class RoleSets:
    bullies: frozenset[NodeId]
    victims: frozenset[NodeId]
    defenders: frozenset[NodeId]


class SessionGraph:
    """Directed weighted graph keyed by :class:`NodeId`.

    Node and edge dicts preserve insertion order, which is the construction
    order and is what every exporter follows.
    """

    def __init__(self, session_id: str = "", main_victim: MainVictimLabel | None = None):
        self.session_id = session_id
        self.main_victim = main_victim
        self._nodes: dict[NodeId, None] = {}
        self._edges: dict[tuple[NodeId, NodeId], float] = {}
        self._out: dict[NodeId, float] = {}
        self._in: dict[NodeId, float] = {}

    @classmethod
    def with_sentinel(cls, session_id: str = "", main_victim: MainVictimLabel | None = None):
        g = cls(session_id, main_victim)
        g.add_node(MAIN_VICTIM)
        return g

    # structure -------------------------------------------------------------

    @property
    def nodes(self) -> list[NodeId]:
        return list(self._nodes)

    @property
    def edges(self) -> dict[tuple[NodeId, NodeId], float]:
        return dict(self._edges)

    def number_of_nodes(self) -> int:
        return len(self._nodes)

    def number_of_edges(self) -> int:
        return len(self._edges)

    def __contains__(self, node: object) -> bool:
        return node in self._nodes

    def role(self, node: NodeId) -> Role:
        return node.role

    def weight(self, u: NodeId, v: NodeId) -> float:
        return self._edges.get((u, v), 0.0)

    def add_node(self, node: NodeId) -> bool:
        if node in self._nodes:
            return False
        self._nodes[node] = None
        self._out[node] = 0.0
        self._in[node] = 0.0
        return True

    def add_weight(self, u: NodeId, v: NodeId, w: float) -> None:
        """Create edge ``u -> v`` or add ``w`` to its weight."""
        if u == v:
            raise InvariantViolation(f"self-loop on {u}")
        if not w > 0:
            raise InvariantViolation(f"non-positive weight {w} on {u} -> {v}")
        if u not in self._nodes or v not in self._nodes:
            raise InvariantViolation(f"edge {u} -> {v} references a missing node")
        self._edges[(u, v)] = self._edges.get((u, v), 0.0) + w
        self._out[u] += w
        self._in[v] += w

    def out_degree(self, node: NodeId) -> float:
        return self._out[node]

    def in_degree(self, node: NodeId) -> float:
        return self._in[node]

    def copy(self) -> "SessionGraph":
        g = SessionGraph(self.session_id, self.main_victim)
        for n in self._nodes:
            g.add_node(n)
        for (u, v), w in self._edges.items():
            g.add_weight(u, v, w)
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SessionGraph):
            return NotImplemented
        return (
            self.session_id == other.session_id
            and self.nodes == other.nodes
            and self._edges == other._edges
        )

    def __repr__(self) -> str:
        return (
            f"SessionGraph({self.session_id!r}, nodes={self.number_of_nodes()}, "
            f"edges={self.number_of_edges()})"
        )

    # export ----------------------------------------------------------------

    def to_dict(self, meta: dict | None = None) -> dict:
        index = {n: i for i, n in enumerate(self._nodes)}
        out = {"schema": GRAPH_SCHEMA, "schema_version": GRAPH_SCHEMA_VERSION}
        if meta:
            out.update(meta)
        out.update(
            {
                "session_id": self.session_id,
                "main_victim": self.main_victim.value if self.main_victim else None,
                "nodes": [{"user": n.user, "role": n.role.value} for n in self._nodes],
                "edges": [
                    {"source": index[u], "target": index[v], "weight": w}
                    for (u, v), w in self._edges.items()
                ],
            }
        )
        return out

    def to_json(self, meta: dict | None = None) -> str:
        return json.dumps(self.to_dict(meta), indent=1, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "SessionGraph":
        if data.get("schema") != GRAPH_SCHEMA:
            raise MalformedRecord(f"not a session graph (schema={data.get('schema')!r})")
        mv = data.get("main_victim")
        g = cls(data.get("session_id", ""), MainVictimLabel(mv) if mv else None)
        try:
            nodes = [NodeId(n["user"], Role(n["role"])) for n in data["nodes"]]
            for n in nodes:
                g.add_node(n)
            for e in data["edges"]:
                g.add_weight(nodes[e["source"]], nodes[e["target"]], float(e["weight"]))
        except (KeyError, IndexError, ValueError) as exc:
            raise MalformedRecord(f"bad session graph ({exc})") from None
        return g

    @classmethod
    def from_json(cls, text: str) -> "SessionGraph":
        return cls.from_dict(json.loads(text))

    def to_networkx(self):
        import networkx as nx

        g = nx.DiGraph(session_id=self.session_id)
        for i, n in enumerate(self._nodes):
            g.add_node(f"n{i}", user=n.user, role=n.role.value)
        index = {n: f"n{i}" for i, n in enumerate(self._nodes)}
        for (u, v), w in self._edges.items():
            g.add_edge(index[u], index[v], weight=round(w, 2))
        return g

    def write_graphml(self, path, meta: dict | None = None) -> None:
        import networkx as nx

        g = self.to_networkx()
        for k, v in (meta or {}).items():
            g.graph[k] = v
        nx.write_graphml(g, path)

    def to_dot(self, meta: dict | None = None) -> str:
        lines = []
        for k, v in (meta or {}).items():
            lines.append(f"// {k}: {v}")
        lines.append(f"digraph {_dot_id(self.session_id or 'session')} {{")
        index = {n: f"n{i}" for i, n in enumerate(self._nodes)}
        for n, name in index.items():
            lines.append(f"  {name} [user={_dot_id(n.user)}, role={_dot_id(n.role.value)}, label={_dot_id(n.label())}];")
        for (u, v), w in self._edges.items():
            lines.append(f"  {index[u]} -> {index[v]} [weight={w:.2f}, label=\"{w:.2f}\"];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_id(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def role_sets(graph: SessionGraph) -> RoleSets:
    nodes = graph.nodes
    return RoleSets(
        bullies=frozenset(n for n in nodes if n.role in BULLY_ROLES),
        victims=frozenset(n for n in nodes if n.role in VICTIM_ROLES),
        defenders=frozenset(n for n in nodes if n.role in DEFENDER_ROLES),
    )


def apply_edge_rules(graph: SessionGraph, node: NodeId, w: float) -> None:
    """Add the edges a new comment by ``node`` induces, in place.

    Targets are the nodes already present, so ``node`` must have been
    inserted beforehand.
    """
    if node not in graph:
        raise InvariantViolation(f"{node} not inserted before applying edge rules")
    # graph-order iteration keeps edge insertion deterministic
    bullies = [n for n in graph.nodes if n.role in BULLY_ROLES]
    victims = [n for n in graph.nodes if n.role in VICTIM_ROLES]
    role = node.role
    if role in BULLY_ROLES:
        for v in victims:
            graph.add_weight(node, v, w)
    elif role is Role.AGGRESSIVE_DEFENDER:
        for v in victims:
            graph.add_weight(v, node, w)
        for b in bullies:
            graph.add_weight(node, b, w)
    elif role is Role.NON_AGG_DEFENDER_CONFRONT_BULLY:
        for b in bullies:
            graph.add_weight(node, b, 1.0)
    elif role is Role.NON_AGG_DEFENDER_SUPPORT_VICTIM:
        for v in victims:
            graph.add_weight(v, node, 1.0)
    elif role is Role.AGGRESSIVE_VICTIM:
        for b in bullies:
            graph.add_weight(node, b, w)
    elif role in (Role.NON_AGGRESSIVE_VICTIM, Role.MAIN_VICTIM):
        pass
    else:
        raise InvariantViolation(f"role {role.value} cannot appear in a session graph")


def add_comment(graph: SessionGraph, comment: ResolvedComment) -> NodeId:
    if comment.role in (Role.MAIN_VICTIM, Role.PASSIVE_BYSTANDER):
        raise InvariantViolation(
            f"comment {comment.comment_id} carries role {comment.role.value}, which consensus never emits"
        )
    node = NodeId(comment.author, comment.role)
    graph.add_node(node)
    apply_edge_rules(graph, node, comment.severity)
    return node


def build_graph(session: ResolvedSession | Iterable[ResolvedComment], session_id: str = "") -> SessionGraph:
    """Replay a session's comments in sequence order into a Session Graph."""
    if isinstance(session, ResolvedSession):
        if session.main_victim is MainVictimLabel.OTHER:
            raise InvariantViolation(f"session {session.session_id} has main victim 'other'")
        graph = SessionGraph.with_sentinel(session.session_id, session.main_victim)
        comments = session.comments
    else:
        graph = SessionGraph.with_sentinel(session_id)
        comments = tuple(session)
    for comment in sorted(comments, key=lambda c: (c.sequence, c.timestamp, c.comment_id)):
        add_comment(graph, comment)
    return graph
