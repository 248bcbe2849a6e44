"""GNS cuts, exact minimum GNS cut search, and edge-cut bound generation.

A set S of edges is a GNS cut for a session set I when the sessions can
be ordered so that G\\S has no path from s_i to t_j whenever i is not
strictly earlier than j. Equivalently the relation "s_i reaches t_j in
G\\S" restricted to I, self-loops included, is acyclic. For two sessions
this means s1-/->t1, s2-/->t2 plus one of s2-/->t1 (pattern A) or
s1-/->t2 (pattern B).

Session indices are 0-based; S_x^y labels use the 1-based names 1, 2, 12.
"""

from __future__ import annotations

import heapq
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from . import lp
from .flows import cut_value, mincut
from .netgraph import INF, ExtRational, Network, NetworkError, edge_indices, format_ext, is_inf, reachable
from .rate_regions import Region, make_region


@dataclass(frozen=True)
class GnsCertificate:
    edges: Tuple[str, ...]
    orientation: str  # "A" / "B" for two sessions, "pi" otherwise, "" when empty
    pi: Tuple[int, ...]  # sessions listed so that paths only run forward
    minimal: bool

    def to_json(self) -> dict:
        return {"edges": list(self.edges), "orientation": self.orientation, "pi": list(self.pi), "minimal": self.minimal}


EMPTY_CERTIFICATE = GnsCertificate((), "", (), False)


def _sessions(net: Network, I: Optional[Iterable[int]]) -> Tuple[int, ...]:
    if I is None:
        I = range(net.k)
    I = tuple(sorted(set(int(i) for i in I)))
    if not I:
        raise NetworkError("session set must be nonempty")
    for i in I:
        if not 0 <= i < net.k:
            raise NetworkError(f"invalid session index {i}")
    return I


def _relation(net: Network, removed: FrozenSet[int], I: Sequence[int]) -> Dict[int, Set[int]]:
    arcs = {}
    for i in I:
        seen = reachable(net, [net.sessions[i].src], removed)
        arcs[i] = {j for j in I if net.sessions[j].dst in seen}
    return arcs


def _acyclic_order(arcs: Dict[int, Set[int]]) -> Optional[Tuple[int, ...]]:
    """Kahn's algorithm, smallest index first; None when a cycle (or self-loop) exists."""
    if any(i in succ for i, succ in arcs.items()):
        return None
    indeg = {i: 0 for i in arcs}
    for succ in arcs.values():
        for j in succ:
            indeg[j] += 1
    heap = [i for i, d in indeg.items() if d == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        i = heapq.heappop(heap)
        order.append(i)
        for j in arcs[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, j)
    return tuple(order) if len(order) == len(arcs) else None


def _orientation(I: Sequence[int], pi: Sequence[int]) -> str:
    if len(I) == 2:
        return "A" if tuple(pi) == tuple(I) else "B"
    return "pi"


def _gns_order(net: Network, removed: FrozenSet[int], I: Sequence[int]) -> Optional[Tuple[int, ...]]:
    return _acyclic_order(_relation(net, removed, I))


def is_gns_cut(net: Network, S: Iterable[str], I: Optional[Iterable[int]] = None) -> Optional[GnsCertificate]:
    """Certificate when S is a GNS cut for session set I (default: all sessions)."""
    I = _sessions(net, I)
    S = tuple(dict.fromkeys(S))
    removed = edge_indices(net, S)
    pi = _gns_order(net, removed, I)
    if pi is None:
        return None
    minimal = all(_gns_order(net, removed - {i}, I) is None for i in removed)
    edges = tuple(net.edges[i].id for i in sorted(removed))
    return GnsCertificate(edges, _orientation(I, pi), pi, minimal)


def gns_order_bruteforce(net: Network, S: Iterable[str], I: Optional[Iterable[int]] = None) -> Optional[Tuple[int, ...]]:
    """Reference check trying every ordering of I directly."""
    from itertools import permutations

    I = _sessions(net, I)
    removed = edge_indices(net, S)
    arcs = _relation(net, removed, I)
    for perm in permutations(I):
        pos = {i: p for p, i in enumerate(perm)}
        if all(pos[i] < pos[j] for i in I for j in arcs[i]):
            return perm
    return None


def is_minimal_gns_cut(net: Network, S: Iterable[str], I: Optional[Iterable[int]] = None) -> bool:
    I = _sessions(net, I)
    removed = edge_indices(net, S)
    if _gns_order(net, removed, I) is None:
        raise NetworkError("edge set is not a GNS cut")
    return all(_gns_order(net, removed - {i}, I) is None for i in removed)


# -- exact minimum GNS cut --


class _Search:
    """Branch and bound over hitting sets of violating paths.

    At each node some edges are forced into the cut (F) and some are
    forbidden (X). A violation in G\\F is a self-loop s_i ~> t_i or a cycle
    of the session relation; any completion must cut one edge of the
    witness paths outside X, which gives the branching. The lower bound is
    the largest single-commodity min cut that every completion must pay.
    """

    def __init__(self, net: Network, I: Sequence[int]):
        self.net = net
        self.I = tuple(I)
        ix = net.node_index
        self.n = len(net.nodes)
        self.tail = [ix[e.tail] for e in net.edges]
        self.head = [ix[e.head] for e in net.edges]
        self.out: List[List[int]] = [[] for _ in range(self.n)]
        for i in range(len(net.edges)):
            self.out[self.tail[i]].append(i)
        finite = [e.cap for e in net.edges if not is_inf(e.cap)]
        scale = lcm(*[Fraction(c).denominator for c in finite]) if finite else 1
        self.scale = scale
        self.cost = [None if is_inf(e.cap) else int(Fraction(e.cap) * scale) for e in net.edges]
        self.big = sum(c for c in self.cost if c is not None) + 1
        self.frozen = frozenset(i for i, c in enumerate(self.cost) if c is None)
        self.src = {i: ix[net.sessions[i].src] for i in self.I}
        self.dst = {i: ix[net.sessions[i].dst] for i in self.I}
        self.best = float("inf")
        self.leaves: List[Tuple[int, ...]] = []
        self.two = len(self.I) == 2

    # graph primitives on index sets

    def _reach(self, start: int, removed) -> Set[int]:
        seen = {start}
        stack = [start]
        out, head = self.out, self.head
        while stack:
            v = stack.pop()
            for i in out[v]:
                if i in removed:
                    continue
                w = head[i]
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    def _path01(self, s: int, t: int, removed, X) -> Optional[Tuple[int, List[int]]]:
        """Path s ~> t in G\\removed with the fewest edges outside X (0-1 BFS)."""
        dist = {s: 0}
        prev: Dict[int, Tuple[int, int]] = {}
        dq = deque([s])
        done = set()
        while dq:
            v = dq.popleft()
            if v in done:
                continue
            done.add(v)
            if v == t:
                break
            for i in self.out[v]:
                if i in removed:
                    continue
                w = self.head[i]
                d = dist[v] + (0 if i in X else 1)
                if w not in dist or d < dist[w]:
                    dist[w] = d
                    prev[w] = (i, v)
                    if d == dist[v]:
                        dq.appendleft(w)
                    else:
                        dq.append(w)
        if t not in dist:
            return None
        path = []
        v = t
        while v != s:
            i, v = prev[v]
            path.append(i)
        return dist[t], path

    def _flow(self, sources: Sequence[int], sinks: Sequence[int], removed, X) -> int:
        """Integer max flow with forbidden and infinite edges at capacity ``big``."""
        if set(sources) & set(sinks):
            return self.big
        n = self.n + 2
        S, T = self.n, self.n + 1
        cap: Dict[Tuple[int, int], int] = {}
        adj: List[Set[int]] = [set() for _ in range(n)]

        def add(u, v, c):
            cap[(u, v)] = cap.get((u, v), 0) + c
            cap.setdefault((v, u), 0)
            adj[u].add(v)
            adj[v].add(u)

        for i in range(len(self.cost)):
            if i in removed:
                continue
            c = self.big if (i in X or self.cost[i] is None) else self.cost[i]
            if c:
                add(self.tail[i], self.head[i], c)
        for s in sources:
            add(S, s, self.big)
        for t in sinks:
            add(t, T, self.big)
        total = 0
        while total < self.big:
            prev = {S: None}
            q = deque([S])
            while q and T not in prev:
                u = q.popleft()
                for v in adj[u]:
                    if v not in prev and cap[(u, v)] > 0:
                        prev[v] = u
                        q.append(v)
            if T not in prev:
                break
            f = None
            v = T
            while prev[v] is not None:
                u = prev[v]
                f = cap[(u, v)] if f is None else min(f, cap[(u, v)])
                v = u
            v = T
            while prev[v] is not None:
                u = prev[v]
                cap[(u, v)] -= f
                cap[(v, u)] += f
                v = u
            total += f
        return min(total, self.big)

    def lower_bound(self, removed, X) -> int:
        src, dst = self.src, self.dst
        if self.two:
            a, b = self.I
            lb_a = max(self._flow([src[a], src[b]], [dst[a]], removed, X), self._flow([src[b]], [dst[a], dst[b]], removed, X))
            lb_b = max(self._flow([src[a]], [dst[a], dst[b]], removed, X), self._flow([src[a], src[b]], [dst[b]], removed, X))
            return min(lb_a, lb_b)
        return max(self._flow([src[i]], [dst[i]], removed, X) for i in self.I)

    def witness(self, removed, X) -> Optional[List[int]]:
        """Cuttable edges of a violating structure; [] if none, None if unfixable."""
        reach = {i: self._reach(self.src[i], removed) for i in self.I}
        arcs = {i: [j for j in self.I if self.dst[j] in reach[i]] for i in self.I}
        for i in self.I:
            if i in arcs[i]:
                found = self._path01(self.src[i], self.dst[i], removed, X)
                if found[0] == 0:
                    return None
                return sorted(set(e for e in found[1] if e not in X))
        cycle = _shortest_cycle(arcs)
        if cycle is None:
            return []
        edges: Set[int] = set()
        for u, v in zip(cycle, cycle[1:] + cycle[:1]):
            found = self._path01(self.src[u], self.dst[v], removed, X)
            edges.update(e for e in found[1] if e not in X)
        if not edges:
            return None
        return sorted(edges)

    def run(self, F: Tuple[int, ...] = (), X: FrozenSet[int] = frozenset()) -> None:
        X = X | self.frozen
        self._dfs(F, X, sum(self.cost[i] for i in F))

    def _dfs(self, F: Tuple[int, ...], X: FrozenSet[int], cost: int) -> None:
        removed = frozenset(F)
        if cost > self.best:
            return
        w = self.witness(removed, X)
        if w is None:
            return
        if not w:
            self._record(F, cost)
            return
        if cost + self.lower_bound(removed, X) > self.best:
            return
        excluded = set(X)
        for e in w:
            self._dfs(F + (e,), frozenset(excluded), cost + self.cost[e])
            excluded.add(e)

    def _record(self, F: Tuple[int, ...], cost: int) -> None:
        if cost < self.best:
            self.best = cost
            self.leaves = []
        self.leaves.append(tuple(sorted(F)))

    def children(self) -> List[Tuple[Tuple[int, ...], FrozenSet[int]]]:
        """Top-level branches, used to fan the search out over workers."""
        w = self.witness(frozenset(), self.frozen)
        if not w:
            return [((), frozenset())]
        out = []
        excluded: Set[int] = set()
        for e in w:
            out.append(((e,), frozenset(excluded)))
            excluded.add(e)
        return out


def _shortest_cycle(arcs: Dict[int, List[int]]) -> Optional[List[int]]:
    best = None
    for start in sorted(arcs):
        prev = {start: None}
        q = deque([start])
        hit = None
        while q and hit is None:
            u = q.popleft()
            for v in arcs[u]:
                if v == start:
                    hit = u
                    break
                if v not in prev:
                    prev[v] = u
                    q.append(v)
        if hit is None:
            continue
        cyc = [hit]
        while prev[cyc[-1]] is not None:
            cyc.append(prev[cyc[-1]])
        cyc.reverse()
        if best is None or len(cyc) < len(best):
            best = cyc
    return best


def _run_branch(args):
    net, I, F, X = args
    search = _Search(net, I)
    search.run(F, X)
    return search.best, search.leaves


def _finish(net: Network, I: Sequence[int], best, leaves) -> Tuple[ExtRational, GnsCertificate]:
    if best == float("inf"):
        return INF, EMPTY_CERTIFICATE
    candidates = sorted(set(leaves))
    for cand in candidates:
        removed = frozenset(cand)
        if all(_gns_order(net, removed - {i}, I) is None for i in removed):
            cert = is_gns_cut(net, [net.edges[i].id for i in cand], I)
            return net.capacity(cert.edges), cert
    raise AssertionError("no minimal optimal cut among search leaves")


def min_gns_cut(
    net: Network, I: Optional[Iterable[int]] = None, jobs: int = 1, method: str = "bnb"
) -> Tuple[ExtRational, GnsCertificate]:
    """Exact minimum-capacity GNS cut.

    Returns INF with an empty certificate when no finite GNS cut exists.
    Among optimal cuts the certificate is the lexicographically least
    minimal one (edges compared by canonical position), independent of
    ``jobs``. ``method="exhaustive"`` runs the cost-bounded subset search
    of :func:`min_gns_cut_exhaustive` instead.
    """
    I = _sessions(net, I)
    if method == "exhaustive":
        return min_gns_cut_exhaustive(net, I)
    if method != "bnb":
        raise ValueError(f"unknown method {method!r}")
    if jobs > 1:
        root = _Search(net, I)
        tasks = [(net, I, F, X) for F, X in root.children()]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_branch, tasks))
        best = min((b for b, _ in results), default=float("inf"))
        leaves = [leaf for b, ls in results if b == best for leaf in ls]
        return _finish(net, I, best, leaves)
    search = _Search(net, I)
    search.run()
    return _finish(net, I, search.best, search.leaves)


def min_gns_cut_exhaustive(
    net: Network, I: Optional[Iterable[int]] = None, max_edges: Optional[int] = 20
) -> Tuple[ExtRational, GnsCertificate]:
    """Reference solver: examine every edge subset that could be optimal.

    Subsets are grown over finite edges in capacity order and a branch is
    abandoned once its capacity exceeds the best cut found, so every subset
    of capacity at most the optimum is tested. ``max_edges=None`` lifts the
    size guard.
    """
    I = _sessions(net, I)
    cand = sorted((i for i, e in enumerate(net.edges) if not is_inf(e.cap)), key=lambda i: (net.edges[i].cap, i))
    if max_edges is not None and len(cand) > max_edges:
        raise NetworkError(f"{len(cand)} edges is too many for exhaustive search")
    if _gns_order(net, frozenset(cand), I) is None:
        return INF, EMPTY_CERTIFICATE
    caps = [net.edges[i].cap for i in cand]
    best = sum(caps, Fraction(0))
    best_sets: List[Tuple[int, ...]] = []
    chosen: List[int] = []

    def grow(start: int, cost: Fraction) -> None:
        nonlocal best, best_sets
        if _gns_order(net, frozenset(chosen), I) is not None:
            if cost < best:
                best, best_sets = cost, []
            best_sets.append(tuple(sorted(chosen)))
        for n in range(start, len(cand)):
            if cost + caps[n] > best:
                break
            chosen.append(cand[n])
            grow(n + 1, cost + caps[n])
            chosen.pop()

    grow(0, Fraction(0))
    return _finish(net, I, 0, best_sets)


# -- S_x^y classification --


@dataclass(frozen=True)
class EdgeClassification:
    labels: Dict[str, Tuple[str, str]]  # edge -> (x, y), each "1", "2" or "12"
    S_hat: Tuple[Tuple[str, ...], Tuple[str, ...]]
    C: Tuple[ExtRational, ExtRational]  # C_1(S), C_2(S)

    def group(self, x: str, y: str) -> Tuple[str, ...]:
        return tuple(e for e, lab in self.labels.items() if lab == (x, y))

    def to_json(self) -> dict:
        return {
            "labels": {e: f"S_{x}^{y}" for e, (x, y) in self.labels.items()},
            "S_hat_1": list(self.S_hat[0]),
            "S_hat_2": list(self.S_hat[1]),
            "C_1": format_ext(self.C[0]),
            "C_2": format_ext(self.C[1]),
        }


def _label(members: Iterable[int]) -> str:
    return "".join(str(i + 1) for i in sorted(members))


def restricted_cut_value(net: Network, S: Iterable[str], i: int) -> ExtRational:
    """C_i(S): the cheapest s_i-t_i cut using only edges of S."""
    S = set(S)
    relaxed = net.with_capacities({e.id: INF for e in net.edges if e.id not in S})
    sess = net.sessions[i]
    return cut_value(relaxed, [sess.src], [sess.dst])


def classify_cut_edges(net: Network, S: Iterable[str]) -> EdgeClassification:
    """Label each edge of a minimal two-session GNS cut by its connectivity.

    An edge e gets S_x^y when, in G\\(S\\e), exactly the sources x reach
    tail(e) and exactly the destinations y are reachable from head(e).
    """
    if net.k != 2:
        raise NetworkError("classification needs a two-unicast network")
    S = tuple(dict.fromkeys(S))
    if not is_minimal_gns_cut(net, S, (0, 1)):
        raise NetworkError("edge set is not a minimal GNS cut")
    removed = edge_indices(net, S)
    labels = {}
    order = sorted(S, key=net.edge_index.get)
    for eid in order:
        i = net.edge_index[eid]
        rest = removed - {i}
        e = net.edges[i]
        x = [k for k in range(2) if e.tail in reachable(net, [net.sessions[k].src], rest)]
        seen = reachable(net, [e.head], rest)
        y = [k for k in range(2) if net.sessions[k].dst in seen]
        labels[eid] = (_label(x), _label(y))
    hats = []
    for k in ("1", "2"):
        hats.append(tuple(e for e in order if k in labels[e][0] and k in labels[e][1]))
    C = (restricted_cut_value(net, S, 0), restricted_cut_value(net, S, 1))
    return EdgeClassification(labels, (hats[0], hats[1]), C)


# -- bound regions --


def _indicator(k: int, J: Iterable[int]) -> Tuple[int, ...]:
    J = set(J)
    return tuple(1 if i in J else 0 for i in range(k))


def cutset_bound(net: Network) -> Region:
    """sum_{i in J} R_i <= c({s_i}; {t_i}) for every nonempty J, pruned."""
    k = net.k
    ineqs = []
    for size in range(1, k + 1):
        for J in combinations(range(k), size):
            A = [net.sessions[i].src for i in J]
            B = [net.sessions[i].dst for i in J]
            ineqs.append((_indicator(k, J), cut_value(net, A, B)))
    return make_region(k, ineqs)


def _coreachable(net: Network, target: str) -> FrozenSet[str]:
    seen = {target}
    stack = [target]
    while stack:
        v = stack.pop()
        for i in net.in_edges[v]:
            u = net.edges[i].tail
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return frozenset(seen)


def network_sharing_edges(net: Network, i: int, j: int) -> Tuple[str, ...]:
    """Edges that may be left out of a sum cut for the fixed pair (i, j).

    Their tail is reachable from s_i but not s_j, and their head reaches
    t_j but not t_i, all in the unmodified graph.
    """
    from_i = reachable(net, [net.sessions[i].src])
    from_j = reachable(net, [net.sessions[j].src])
    to_i = _coreachable(net, net.sessions[i].dst)
    to_j = _coreachable(net, net.sessions[j].dst)
    return tuple(
        e.id for e in net.edges if e.tail in from_i and e.tail not in from_j and e.head in to_j and e.head not in to_i
    )


def network_sharing_bound(net: Network) -> Region:
    if net.k != 2:
        raise NetworkError("Network Sharing bound needs a two-unicast network")
    (s1, t1), (s2, t2) = [(s.src, s.dst) for s in net.sessions]
    sums = [cut_value(net, [s1, s2], [t1, t2], removed=network_sharing_edges(net, i, j)) for i, j in ((0, 1), (1, 0))]
    return make_region(
        2,
        [((1, 0), cut_value(net, [s1], [t1])), ((0, 1), cut_value(net, [s2], [t2])), ((1, 1), min(sums))],
        prune=False,
    )


# -- symbolic edge-cut bounds (small topologies) --


def _minimal_hitting(net: Network, pairs: Sequence[Tuple[str, str]], universe: Sequence[int], limit: int = 22) -> List[FrozenSet[int]]:
    """All minimal subsets of ``universe`` whose removal kills every pair's paths."""
    if len(universe) > limit:
        raise NetworkError("too many edges for symbolic cut enumeration")
    found: List[FrozenSet[int]] = []
    for size in range(len(universe) + 1):
        for sub in combinations(universe, size):
            s = frozenset(sub)
            if any(f <= s for f in found):
                continue
            if all(t not in reachable(net, [src], s) for src, t in pairs):
                found.append(s)
    return found


def symbolic_edge_cut_bounds(net: Network, kind: str = "gns") -> List[Tuple[Tuple[int, ...], Tuple[str, ...]]]:
    """Edge-cut bounds valid for every capacity assignment of the topology.

    Returns ``(J, T)`` pairs meaning  sum_{i in J} R_i <= C(T).  Sum bounds
    come from minimal {s1,s2}-{t1,t2} cuts. ``kind="ns"`` shrinks them by
    the Network Sharing rule; ``kind="gns"`` adds every minimal s_i-t_i
    cut that is also a GNS cut. Individual bounds are the minimal s_i-t_i
    cuts containing no sum-bound set. Exponential; meant for small
    examples.
    """
    if net.k != 2:
        raise NetworkError("symbolic bounds need a two-unicast network")
    (s1, t1), (s2, t2) = [(s.src, s.dst) for s in net.sessions]
    universe = list(range(len(net.edges)))
    joint = _minimal_hitting(net, [(s1, t1), (s1, t2), (s2, t1), (s2, t2)], universe)
    sums: List[FrozenSet[int]] = list(joint)
    if kind == "ns":
        reduced = set()
        for i, j in ((0, 1), (1, 0)):
            skip = edge_indices(net, network_sharing_edges(net, i, j))
            reduced.update(T - skip for T in joint)
        sums = [T for T in reduced if not any(U < T for U in reduced)]
    elif kind == "gns":
        for s, t in ((s1, t1), (s2, t2)):
            for T in _minimal_hitting(net, [(s, t)], universe):
                if T not in sums and _gns_order(net, T, (0, 1)) is not None:
                    sums.append(T)
    elif kind != "cutset":
        raise ValueError(f"unknown kind {kind!r}")
    out = []
    for i, (s, t) in enumerate(((s1, t1), (s2, t2))):
        for T in _minimal_hitting(net, [(s, t)], universe):
            if not any(U <= T for U in sums):
                out.append(((i,), T))
    out += [((0, 1), T) for T in sums]
    key = lambda item: (len(item[0]), item[0], sorted(item[1]))
    return [(J, tuple(net.edges[e].id for e in sorted(T))) for J, T in sorted(out, key=key)]


# -- edge-cut bound classification --


@dataclass(frozen=True)
class EdgeCutVerdict:
    verdict: str  # "GnsCut", "ImpliedByIndividual" or "NotAnEdgeCutBound"
    reason: str
    certificate: object = None
    capacities: Optional[Dict[str, ExtRational]] = field(default=None)

    def to_json(self) -> dict:
        doc = {"verdict": self.verdict, "reason": self.reason}
        cert = self.certificate
        if isinstance(cert, GnsCertificate):
            doc["certificate"] = cert.to_json()
        elif cert is not None:
            doc["certificate"] = cert
        if self.capacities is not None:
            doc["capacities"] = {e: format_ext(c) for e, c in self.capacities.items()}
        return doc


def _falsifying_caps(net: Network, S: Sequence[str], on_cut: Dict[str, Fraction]) -> Dict[str, ExtRational]:
    S = set(S)
    return {e.id: (on_cut[e.id] if e.id in S else INF) for e in net.edges}


def classify_edge_cut_bound(net: Network, S: Iterable[str], max_cut_edges: int = 20) -> EdgeCutVerdict:
    """Decide whether R1+R2 <= C(S) holds for every capacity assignment.

    GnsCut when S is a GNS cut. Otherwise the bound can only hold if it is
    implied by the individual cutset bounds, i.e. C_1(S)+C_2(S) <= C(S)
    for all capacities on S (edges outside S made infinite, as in the
    two-multicast argument). That condition is decided exactly: first a
    disjoint split of S into an s1-t1 cut and an s2-t2 cut is sought, and
    failing that an LP maximizes C_1+C_2-C(S) over normalized capacities.
    A positive optimum yields an explicit falsifying capacity assignment.
    """
    if net.k != 2:
        raise NetworkError("classification needs a two-unicast network")
    S = tuple(sorted(set(S), key=lambda e: net.edge_index[e] if e in net.edge_index else -1))
    net.check_edges(S)
    cert = is_gns_cut(net, S, (0, 1))
    if cert is not None:
        return EdgeCutVerdict("GnsCut", "S is a GNS cut", cert)
    removed = edge_indices(net, S)
    for k in range(2):
        s, t = net.sessions[k].src, net.sessions[k].dst
        if t in reachable(net, [s], removed):
            caps = _falsifying_caps(net, S, {e: Fraction(0) for e in S})
            return EdgeCutVerdict("NotAnEdgeCutBound", f"S does not cut s{k + 1} from t{k + 1}", None, caps)
    if len(S) > max_cut_edges:
        raise NetworkError("edge set too large to classify")
    idx = [net.edge_index[e] for e in S]
    fam = []
    for k in range(2):
        pair = [(net.sessions[k].src, net.sessions[k].dst)]
        fam.append(_minimal_hitting(net, pair, idx))
    for T1 in fam[0]:
        for T2 in fam[1]:
            if not T1 & T2:
                part = {
                    "kind": "partition",
                    "s1_t1_cut": [net.edges[i].id for i in sorted(T1)],
                    "s2_t2_cut": [net.edges[i].id for i in sorted(set(idx) - T1)],
                }
                return EdgeCutVerdict("ImpliedByIndividual", "S splits into disjoint individual cuts", part)
    # variables: c_e for e in S, then u, v
    m = len(idx)
    pos = {e: p for p, e in enumerate(idx)}
    c = [-1] * m + [1, 1]
    rows, rhs = [[1] * m + [0, 0]], [1]
    for k, family in enumerate(fam):
        for T in family:
            row = [0] * (m + 2)
            for e in T:
                row[pos[e]] = -1
            row[m + k] = 1
            rows.append(row)
            rhs.append(0)
    res = lp.maximize(c, rows, rhs, n=m + 2)
    gap = res.value
    if gap <= 0:
        return EdgeCutVerdict(
            "ImpliedByIndividual",
            "C_1(S)+C_2(S) <= C(S) for every capacity choice (exact LP)",
            {"kind": "lp", "max_gap": format_ext(gap)},
        )
    scale = lcm(*[x.denominator for x in res.x[:m]])
    on_cut = {net.edges[e].id: res.x[p] * scale for p, e in enumerate(idx)}
    caps = _falsifying_caps(net, S, on_cut)
    probe = net.with_capacities(caps)
    c1 = cut_value(probe, [net.sessions[0].src], [net.sessions[0].dst])
    c2 = cut_value(probe, [net.sessions[1].src], [net.sessions[1].dst])
    assert c1 + c2 > probe.capacity(S)
    return EdgeCutVerdict(
        "NotAnEdgeCutBound",
        f"with these capacities c(s1;t1)+c(s2;t2) = {format_ext(c1 + c2)} > C(S) = {format_ext(probe.capacity(S))}",
        None,
        caps,
    )
