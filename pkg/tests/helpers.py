"""Random instance generators and brute-force oracles shared by the tests."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations
from typing import List, Sequence, Tuple

from twounicast.netgraph import INF, Network, edge_indices, make_network, reachable


def random_dag(
    rng: random.Random,
    n_nodes: Tuple[int, int] = (4, 7),
    n_edges: Tuple[int, int] = (4, 10),
    caps: Sequence = (1, 1, 2, 3),
    k: int = 2,
    distinct: bool = True,
) -> Network:
    """Random DAG on v0 < v1 < ... with k sessions drawn as ordered node pairs."""
    n = rng.randint(*n_nodes)
    nodes = [f"v{i}" for i in range(n)]
    edges = []
    for j in range(rng.randint(*n_edges)):
        a, b = sorted(rng.sample(range(n), 2))
        edges.append((f"e{j + 1}", nodes[a], nodes[b], rng.choice(caps)))
    sessions = []
    for _ in range(k):
        a, b = sorted(rng.sample(range(n), 2)) if distinct else sorted(rng.choices(range(n), k=2))
        sessions.append((nodes[a], nodes[b]))
    return make_network(nodes, edges, sessions)


def st_dag(rng: random.Random, n_mid: Tuple[int, int] = (1, 3), n_edges: Tuple[int, int] = (5, 8), caps=(1, 2)) -> Network:
    """Random two-unicast DAG with dedicated nodes s1, s2 < middle < t1, t2."""
    nodes = ["s1", "s2"] + [f"v{i}" for i in range(rng.randint(*n_mid))] + ["t1", "t2"]
    edges = []
    for j in range(rng.randint(*n_edges)):
        i = rng.randrange(len(nodes) - 2)
        h = rng.randrange(max(i + 1, 2), len(nodes))
        edges.append((f"e{j + 1}", nodes[i], nodes[h], rng.choice(caps)))
    return make_network(nodes, edges, [("s1", "t1"), ("s2", "t2")])


def gns_cut_instance(rng: random.Random, maxcap: int = 2, plant: int = 3, n_mid=(3, 8), n_inf=(3, 12), n_cut=(1, 6)):
    """Random two-unicast network built around a minimal GNS cut S.

    Infinite edges form a DAG with the GNS property. Cut edges are then
    added only between node pairs whose direct connection would break it,
    so every cut edge is needed and S is minimal by construction. With
    ``plant`` some cut edges come in pairs linked by an infinite path, the
    pattern that forces coded upgrades. Off-cut capacities are set to C(S).
    """
    while True:
        order = ["s1", "s2"] + [f"v{i}" for i in range(rng.randint(*n_mid))] + ["t1", "t2"]
        edges = []
        for j in range(rng.randint(*n_inf)):
            i = rng.randrange(len(order) - 2)
            h = rng.randrange(max(i + 1, 2), len(order))
            edges.append((f"e{j}", order[i], order[h], INF))
        g = make_network(order, edges, [("s1", "t1"), ("s2", "t2")])
        rev = make_network(order, [(e.id, e.head, e.tail, e.cap) for e in g.edges])
        X = {v: {i for i, s in enumerate(("s1", "s2")) if v in reachable(g, [s])} for v in order}
        Y = {v: {i for i, t in enumerate(("t1", "t2")) if v in reachable(rev, [t])} for v in order}
        if 0 in Y["s1"] or 1 in Y["s2"]:
            continue
        c12, c21 = 1 in Y["s1"], 0 in Y["s2"]
        if c12 and c21:
            continue

        def breaks(u, v):
            x, y = X[u], Y[v]
            return bool(x & y) or (c12 and 1 in x and 0 in y) or (c21 and 0 in x and 1 in y)

        pairs = [
            (order[i], order[j])
            for i in range(len(order))
            for j in range(i + 1, len(order))
            if order[i] not in ("t1", "t2") and order[j] not in ("s1", "s2") and breaks(order[i], order[j])
        ]
        if not pairs:
            continue
        reach = {v: reachable(g, [v]) for v in order}
        motifs = []
        for P in (0, 1):
            A = [(u, y) for u, y in pairs if P in X[u] and P not in Y[y]]
            B = [(z, w) for z, w in pairs if P in Y[w] and P not in X[z]]
            motifs += [(a, b) for a in A for b in B if b[0] in reach[a[1]]]
        S: List[str] = []
        if plant and motifs:
            for _ in range(rng.randint(1, plant)):
                for u, v in rng.choice(motifs):
                    S.append(f"c{len(S)}")
                    edges.append((S[-1], u, v, rng.randint(1, maxcap)))
        for _ in range(rng.randint(*n_cut)):
            u, v = rng.choice(pairs)
            S.append(f"c{len(S)}")
            edges.append((S[-1], u, v, rng.randint(1, maxcap)))
        net = make_network(order, edges, [("s1", "t1"), ("s2", "t2")])
        CS = net.capacity(S)
        return net.with_capacities({e.id: CS for e in net.edges if e.id not in S}), S


def min_gns_cut_naive(net: Network, I=None) -> Fraction:
    """Minimum capacity over all edge subsets, checked by permutation brute force."""
    from twounicast.edgecut_bounds import gns_order_bruteforce

    best = INF
    ids = [e.id for e in net.edges]
    for r in range(len(ids) + 1):
        for sub in combinations(ids, r):
            if gns_order_bruteforce(net, sub, I) is not None:
                best = min(best, net.capacity(sub))
    return best


def path_families_max(net: Network, s: str, t: str) -> int:
    """Largest family of pairwise edge-disjoint s-t paths, by brute force."""
    paths = []

    def walk(v, used):
        if v == t:
            paths.append(frozenset(used))
            return
        for i in net.out_edges[v]:
            if i not in used:
                walk(net.edges[i].head, used + [i])

    walk(s, [])
    best = 0

    def grow(start, taken, count):
        nonlocal best
        best = max(best, count)
        for n in range(start, len(paths)):
            if not (paths[n] & taken):
                grow(n + 1, taken | paths[n], count + 1)

    grow(0, frozenset(), 0)
    return best


def cut_oracle(net: Network, A, B) -> Fraction:
    """c(A;B) by enumerating every edge subset."""
    A, B = set(A), set(B)
    if A & B:
        return INF
    best = INF
    ids = [e.id for e in net.edges]
    for r in range(len(ids) + 1):
        for sub in combinations(ids, r):
            if not (reachable(net, A, edge_indices(net, sub)) & B):
                best = min(best, net.capacity(sub))
    return best


def all_orders_ok(net: Network, S, I) -> bool:
    """True when some permutation of I leaves only forward paths after removing S."""
    removed = edge_indices(net, S)
    for perm in permutations(I):
        ok = True
        for p, i in enumerate(perm):
            seen = reachable(net, [net.sessions[i].src], removed)
            if any(net.sessions[j].dst in seen for j in perm[: p + 1]):
                ok = False
                break
        if ok:
            return True
    return False


# -- undirected graphs with three labelled terminals, up to isomorphism --

TERMINALS = ("x", "y", "z")


def terminal_graphs(max_edges: int):
    """Every undirected multigraph with at most ``max_edges`` edges and
    distinguished terminals x, y, z, up to terminal-preserving isomorphism.

    Non-terminal vertices are never isolated. Graphs are grown one edge at
    a time, and every graph arises from a smaller one by adding an edge, so
    the enumeration is complete. Returns edge lists of (u, v) pairs.
    """
    import networkx as nx
    from networkx.algorithms.isomorphism import categorical_node_match

    match = categorical_node_match("role", None)

    def graph(edges):
        g = nx.MultiGraph()
        for t in TERMINALS:
            g.add_node(t, role=t)
        for u, v in edges:
            for w in (u, v):
                if w not in g:
                    g.add_node(w, role="-")
            g.add_edge(u, v)
        return g

    level = [()]
    found = [()]
    for _ in range(max_edges):
        buckets = {}
        nxt = []
        for edges in level:
            inner = sorted({w for e in edges for w in e} - set(TERMINALS))
            verts = list(TERMINALS) + inner
            a, b = f"n{len(inner)}", f"n{len(inner) + 1}"
            cands = [(u, v) for i, u in enumerate(verts) for v in verts[i + 1 :]]
            cands += [(u, a) for u in verts] + [(a, b)]
            for e in cands:
                new = tuple(sorted(edges + (tuple(sorted(e)),)))
                g = graph(new)
                key = (nx.weisfeiler_lehman_graph_hash(nx.Graph(g), node_attr="role"), tuple(sorted(d for _, d in g.degree())))
                bucket = buckets.setdefault(key, [])
                if any(nx.is_isomorphic(g, h, node_match=match) for h in bucket):
                    continue
                bucket.append(g)
                nxt.append(new)
        level = nxt
        found += nxt
    return found
