"""Exact max-flow / min-cut and edge-disjoint path extraction.

Shortest augmenting paths (Edmonds-Karp) over exact rationals. Residual
arcs are scanned in canonical edge order, so the returned cut and flow
are deterministic. Infinite edges carry 1 + (sum of finite capacities)
during the computation; a cut that needs one of them is reported as INF.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .netgraph import INF, ExtRational, Network, NetworkError, edge_indices, format_ext, is_inf


@dataclass(frozen=True)
class Cut:
    value: ExtRational
    edges: Tuple[str, ...]
    flow: Dict[str, Fraction] = field(default_factory=dict, compare=False)
    source_side: FrozenSet[str] = field(default=frozenset(), compare=False)

    def to_json(self) -> dict:
        return {
            "value": format_ext(self.value),
            "edges": list(self.edges),
            "flow": {e: format_ext(f) for e, f in self.flow.items() if f},
        }


def _max_flow(n_nodes: int, arcs: List[Tuple[int, int, Fraction]], s: int, t: int):
    """Edmonds-Karp on an explicit arc list.

    ``arcs[i] = (u, v, cap)``; returns (value, flow per arc, source side mask).
    Adjacency is built in arc order, which fixes the BFS tie-breaking.
    """
    adj: List[List[Tuple[int, int, int]]] = [[] for _ in range(n_nodes)]
    # entries: (arc index, direction +1 forward / -1 backward, other endpoint)
    for i, (u, v, _) in enumerate(arcs):
        adj[u].append((i, 1, v))
        adj[v].append((i, -1, u))
    flow = [Fraction(0)] * len(arcs)
    total = Fraction(0)
    while True:
        parent: List[Optional[Tuple[int, int, int]]] = [None] * n_nodes
        seen = [False] * n_nodes
        seen[s] = True
        q = deque([s])
        while q and not seen[t]:
            u = q.popleft()
            for i, d, w in adj[u]:
                if seen[w]:
                    continue
                resid = arcs[i][2] - flow[i] if d == 1 else flow[i]
                if resid > 0:
                    seen[w] = True
                    parent[w] = (i, d, u)
                    q.append(w)
        if not seen[t]:
            return total, flow, seen
        bottleneck = None
        w = t
        while w != s:
            i, d, u = parent[w]
            resid = arcs[i][2] - flow[i] if d == 1 else flow[i]
            bottleneck = resid if bottleneck is None else min(bottleneck, resid)
            w = u
        w = t
        while w != s:
            i, d, u = parent[w]
            flow[i] += bottleneck * d
            w = u
        total += bottleneck


def mincut(net: Network, A: Iterable[str], B: Iterable[str], removed: Iterable[str] = ()) -> Cut:
    """Minimum-capacity edge cut separating node set A from node set B.

    Edges listed in ``removed`` are treated as absent. Conventions: the
    value is 0 (empty cut) when A or B is empty or no A-to-B path exists,
    and INF when A and B intersect.
    """
    A, B = list(dict.fromkeys(A)), list(dict.fromkeys(B))
    net.check_nodes(A)
    net.check_nodes(B)
    gone = edge_indices(net, removed)
    if set(A) & set(B):
        return Cut(INF, ())
    if not A or not B:
        return Cut(Fraction(0), (), {}, frozenset(A))
    live = [i for i in range(len(net.edges)) if i not in gone]
    big = 1 + sum((net.edges[i].cap for i in live if not is_inf(net.edges[i].cap)), Fraction(0))
    n = len(net.nodes)
    ix = net.node_index
    src, dst = n, n + 1
    arcs = []
    for i in live:
        e = net.edges[i]
        arcs.append((ix[e.tail], ix[e.head], big if is_inf(e.cap) else e.cap))
    # terminal arcs can never be cut: they are larger than any finite cut
    terminal_cap = big * (len(live) + 1)
    for a in A:
        arcs.append((src, ix[a], terminal_cap))
    for b in B:
        arcs.append((ix[b], dst, terminal_cap))
    value, flow, side = _max_flow(n + 2, arcs, src, dst)
    source_side = frozenset(v for v in net.nodes if side[ix[v]])
    cut_edges = tuple(net.edges[i].id for i in live if side[ix[net.edges[i].tail]] and not side[ix[net.edges[i].head]])
    edge_flow = {net.edges[i].id: flow[k] for k, i in enumerate(live)}
    if value >= big:
        return Cut(INF, cut_edges, edge_flow, source_side)
    return Cut(value, cut_edges, edge_flow, source_side)


def cut_value(net: Network, A: Iterable[str], B: Iterable[str], removed: Iterable[str] = ()) -> ExtRational:
    return mincut(net, A, B, removed).value


def edge_disjoint_paths(
    net: Network, s: str, t: str, forbidden: Iterable[str] = (), share_infinite: bool = False
) -> List[Tuple[str, ...]]:
    """Maximum family of pairwise edge-disjoint s-t paths avoiding ``forbidden``.

    The network must be unit-expanded: every finite capacity equals 1.
    Infinite edges count as single edges for disjointness unless
    ``share_infinite`` is set, in which case any number of paths may use
    them. Paths are returned as tuples of edge ids, extracted from a
    maximum flow by following the lowest-index flow-carrying edge at each
    node.
    """
    if s == t:
        raise NetworkError("source and destination coincide")
    net.check_nodes([s, t])
    for e in net.edges:
        if not is_inf(e.cap) and e.cap != 1:
            raise NetworkError(f"edge {e.id!r} has non-unit capacity {format_ext(e.cap)}")
    gone = edge_indices(net, forbidden)
    live = [i for i in range(len(net.edges)) if i not in gone]
    ix = net.node_index
    wide = Fraction(len(net.edges) + 1)
    arcs = [
        (ix[net.edges[i].tail], ix[net.edges[i].head], wide if share_infinite and is_inf(net.edges[i].cap) else Fraction(1))
        for i in live
    ]
    _, flow, _ = _max_flow(len(net.nodes), arcs, ix[s], ix[t])
    used = {live[k]: int(f) for k, f in enumerate(flow) if f > 0}
    # flow on a DAG decomposes into paths; peel them greedily
    paths = []
    while True:
        path = []
        v = s
        while v != t:
            nxt = next((i for i in net.out_edges[v] if used.get(i)), None)
            if nxt is None:
                break
            used[nxt] -= 1
            path.append(net.edges[nxt].id)
            v = net.edges[nxt].head
        if v != t:
            if path:
                raise AssertionError("flow decomposition failed")
            break
        paths.append(tuple(path))
    return paths
