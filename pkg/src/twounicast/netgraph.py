"""Network data model for multi-unicast wireline networks.

A network is a capacitated directed acyclic graph with named nodes, an
ordered list of edges and an ordered list of unicast sessions. Capacities
are exact: a nonnegative ``Fraction`` or ``INF``. Cut-based queries also
accept networks built with ``allow_cycles=True`` (the hardness gadget needs
them); coding operations require a topological order and reject those.

Edge order is canonical. Every deterministic output in the package
(cuts, certificates, schemes) follows it.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

INF = float("inf")

ExtRational = Union[Fraction, float]


class NetworkError(ValueError):
    """Raised for malformed or invalid networks."""


class CycleError(NetworkError):
    def __init__(self, node: str):
        super().__init__(f"graph has a directed cycle through node {node!r}")
        self.node = node


def is_inf(x: ExtRational) -> bool:
    return isinstance(x, float) and x == INF


def to_ext(value) -> ExtRational:
    """Coerce ints, Fractions, decimal/fraction strings and "inf" to ExtRational."""
    if isinstance(value, float):
        if value == INF:
            return INF
        raise NetworkError(f"floating point capacity {value!r} is not exact")
    if isinstance(value, str):
        text = value.strip()
        if text.lower() in ("inf", "+inf", "infinity"):
            return INF
        try:
            value = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise NetworkError(f"bad capacity {value!r}") from exc
    if isinstance(value, bool):
        raise NetworkError("boolean is not a capacity")
    value = Fraction(value)
    if value < 0:
        raise NetworkError(f"negative capacity {value}")
    return value


def format_ext(x: ExtRational) -> str:
    if is_inf(x):
        return "inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def ext_sum(values: Iterable[ExtRational]) -> ExtRational:
    total: ExtRational = Fraction(0)
    for v in values:
        if is_inf(v):
            return INF
        total += v
    return total


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    cap: ExtRational


@dataclass(frozen=True)
class Session:
    src: str
    dst: str


@dataclass(frozen=True)
class Network:
    """Immutable capacitated DAG with unicast sessions.

    Construct through :func:`make_network` or :func:`parse_network`, which
    validate the graph. Session indices are 0-based throughout the package.
    """

    nodes: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    sessions: Tuple[Session, ...] = field(default=())
    allow_cycles: bool = False

    # -- derived indices (cached, the object is immutable) --

    @cached_property
    def node_index(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.nodes)}

    @cached_property
    def edge_index(self) -> Dict[str, int]:
        return {e.id: i for i, e in enumerate(self.edges)}

    @cached_property
    def out_edges(self) -> Dict[str, Tuple[int, ...]]:
        out: Dict[str, List[int]] = {v: [] for v in self.nodes}
        for i, e in enumerate(self.edges):
            out[e.tail].append(i)
        return {v: tuple(ix) for v, ix in out.items()}

    @cached_property
    def in_edges(self) -> Dict[str, Tuple[int, ...]]:
        inc: Dict[str, List[int]] = {v: [] for v in self.nodes}
        for i, e in enumerate(self.edges):
            inc[e.head].append(i)
        return {v: tuple(ix) for v, ix in inc.items()}

    @cached_property
    def topo_order(self) -> Tuple[str, ...]:
        return _topological_order(self.nodes, self.edges)

    @cached_property
    def topo_edges(self) -> Tuple[int, ...]:
        """Edge indices sorted by topological position of the tail, ties canonical."""
        pos = {v: i for i, v in enumerate(self.topo_order)}
        return tuple(sorted(range(len(self.edges)), key=lambda i: (pos[self.edges[i].tail], i)))

    @property
    def k(self) -> int:
        return len(self.sessions)

    def edge(self, eid: str) -> Edge:
        try:
            return self.edges[self.edge_index[eid]]
        except KeyError:
            raise NetworkError(f"unknown edge {eid!r}") from None

    def cap(self, eid: str) -> ExtRational:
        return self.edge(eid).cap

    def capacity(self, S: Iterable[str]) -> ExtRational:
        """C(S), the total capacity of an edge set."""
        return ext_sum(self.edge(e).cap for e in set(S))

    def check_nodes(self, nodes: Iterable[str]) -> None:
        for v in nodes:
            if v not in self.node_index:
                raise NetworkError(f"unknown node {v!r}")

    def check_edges(self, S: Iterable[str]) -> None:
        for e in S:
            if e not in self.edge_index:
                raise NetworkError(f"unknown edge {e!r}")

    def with_capacities(self, caps: Mapping[str, object]) -> "Network":
        self.check_edges(caps)
        edges = [Edge(e.id, e.tail, e.head, to_ext(caps[e.id]) if e.id in caps else e.cap) for e in self.edges]
        return Network(self.nodes, tuple(edges), self.sessions, self.allow_cycles)

    def with_sessions(self, sessions: Sequence[Tuple[str, str]]) -> "Network":
        return make_network(
            self.nodes, [(e.id, e.tail, e.head, e.cap) for e in self.edges], sessions, allow_cycles=self.allow_cycles
        )


def _topological_order(nodes: Sequence[str], edges: Sequence[Edge]) -> Tuple[str, ...]:
    indeg = {v: 0 for v in nodes}
    succ: Dict[str, List[str]] = {v: [] for v in nodes}
    for e in edges:
        indeg[e.head] += 1
        succ[e.tail].append(e.head)
    ready = [v for v in nodes if indeg[v] == 0]
    order: List[str] = []
    pos = {v: i for i, v in enumerate(nodes)}
    heap = [(pos[v], v) for v in ready]
    heapq.heapify(heap)
    while heap:
        _, v = heapq.heappop(heap)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, (pos[w], w))
    if len(order) != len(nodes):
        raise CycleError(_find_cycle_node(nodes, succ))
    return tuple(order)


def _find_cycle_node(nodes: Sequence[str], succ: Mapping[str, List[str]]) -> str:
    color = {v: 0 for v in nodes}
    for root in nodes:
        if color[root]:
            continue
        stack = [(root, iter(succ[root]))]
        color[root] = 1
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[v] = 2
                stack.pop()
            elif color[nxt] == 1:
                return nxt
            elif color[nxt] == 0:
                color[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
    raise AssertionError("no cycle found")


def make_network(
    nodes: Iterable[str],
    edges: Iterable[Sequence],
    sessions: Iterable[Sequence[str]] = (),
    allow_cycles: bool = False,
) -> Network:
    """Build and validate a network from plain tuples.

    ``edges`` holds ``(id, tail, head, cap)`` tuples; ``sessions`` holds
    ``(src, dst)`` pairs. Directed cycles raise :class:`CycleError` unless
    ``allow_cycles`` is set.
    """
    node_list = tuple(str(v) for v in nodes)
    if len(set(node_list)) != len(node_list):
        raise NetworkError("duplicate node identifier")
    known = set(node_list)
    edge_list = []
    seen = set()
    for eid, tail, head, cap in edges:
        eid = str(eid)
        if eid in seen:
            raise NetworkError(f"duplicate edge id {eid!r}")
        seen.add(eid)
        for v in (tail, head):
            if v not in known:
                raise NetworkError(f"edge {eid!r} references unknown node {v!r}")
        edge_list.append(Edge(eid, tail, head, to_ext(cap)))
    sess = []
    for src, dst in sessions:
        for v in (src, dst):
            if v not in known:
                raise NetworkError(f"session references unknown node {v!r}")
        sess.append(Session(src, dst))
    net = Network(node_list, tuple(edge_list), tuple(sess), bool(allow_cycles))
    if not allow_cycles:
        net.topo_order  # raises CycleError
    return net


# -- serialization --


def parse_network(text: Union[bytes, str]) -> Network:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise NetworkError(f"invalid UTF-8 at byte {exc.start}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkError(f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return network_from_json(doc)


def network_from_json(doc) -> Network:
    if not isinstance(doc, dict):
        raise NetworkError("network document must be a JSON object")
    try:
        nodes = doc["nodes"]
        edges = [(e["id"], e["tail"], e["head"], _cap_field(e["cap"])) for e in doc.get("edges", [])]
        sessions = [(s["src"], s["dst"]) for s in doc.get("sessions", [])]
    except (KeyError, TypeError) as exc:
        raise NetworkError(f"missing or malformed field: {exc}") from exc
    allow = doc.get("allow_cycles", False)
    if not isinstance(allow, bool):
        raise NetworkError("allow_cycles must be a boolean")
    return make_network(nodes, edges, sessions, allow_cycles=allow)


def _cap_field(value):
    if isinstance(value, (int, str)) and not isinstance(value, bool):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise NetworkError(f"capacity must be a string or integer, got {value!r}")


def network_to_json(net: Network) -> dict:
    doc = {
        "nodes": list(net.nodes),
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head, "cap": format_ext(e.cap)} for e in net.edges],
        "sessions": [{"src": s.src, "dst": s.dst} for s in net.sessions],
    }
    if net.allow_cycles:
        doc["allow_cycles"] = True
    return doc


def emit_network(net: Network) -> bytes:
    return (json.dumps(network_to_json(net), indent=2) + "\n").encode("utf-8")


# -- queries and surgery --


def reachable(net: Network, sources: Iterable[str], removed: Optional[FrozenSet[int]] = None) -> FrozenSet[str]:
    """Nodes reachable by a directed path (possibly empty) from ``sources``.

    ``removed`` optionally holds edge indices to ignore, which lets cut
    predicates query G\\S without building a new network.
    """
    sources = list(sources)
    net.check_nodes(sources)
    seen = set(sources)
    stack = list(sources)
    out = net.out_edges
    edges = net.edges
    while stack:
        v = stack.pop()
        for i in out[v]:
            if removed and i in removed:
                continue
            w = edges[i].head
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def edge_indices(net: Network, S: Iterable[str]) -> FrozenSet[int]:
    idx = net.edge_index
    try:
        return frozenset(idx[e] for e in S)
    except KeyError as exc:
        raise NetworkError(f"unknown edge {exc.args[0]!r}") from None


def remove_edges(net: Network, S: Iterable[str]) -> Network:
    drop = edge_indices(net, S)
    kept = tuple(e for i, e in enumerate(net.edges) if i not in drop)
    return Network(net.nodes, kept, net.sessions, net.allow_cycles)


def expand_unit_edges(net: Network, only: Optional[Iterable[str]] = None) -> Tuple[Network, Dict[str, str]]:
    """Replace each finite edge of capacity c by c parallel unit edges.

    Returns the new network and a map from new edge id to original id.
    Copies are named ``<id>#<n>`` (n from 1); an edge of capacity 1 keeps
    its id, capacity 0 edges vanish, and infinite edges are kept as is.
    With ``only``, edges outside that set are also kept as is.
    """
    edges = []
    origin: Dict[str, str] = {}
    taken = {e.id for e in net.edges}
    keep = None
    if only is not None:
        keep = set(only)
        net.check_edges(keep)
    for e in net.edges:
        if is_inf(e.cap) or (keep is not None and e.id not in keep):
            edges.append(e)
            origin[e.id] = e.id
            continue
        if Fraction(e.cap).denominator != 1:
            raise NetworkError(f"edge {e.id!r} has non-integer capacity {format_ext(e.cap)}")
        c = int(e.cap)
        if c == 1:
            edges.append(Edge(e.id, e.tail, e.head, Fraction(1)))
            origin[e.id] = e.id
            continue
        for n in range(1, c + 1):
            nid = f"{e.id}#{n}"
            while nid in taken:
                nid += "'"
            taken.add(nid)
            edges.append(Edge(nid, e.tail, e.head, Fraction(1)))
            origin[nid] = e.id
    return Network(net.nodes, tuple(edges), net.sessions, net.allow_cycles), origin
