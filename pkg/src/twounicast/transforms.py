"""Network constructors: the k-unicast to two-unicast extension, the fusion
and monotonicity gadgets, the super-source transform and the gadget that
turns a multiterminal cut instance into a GNS cut instance.

New nodes get deterministic prefixed names, so repeated builds produce
identical networks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .netgraph import INF, Network, NetworkError, format_ext, is_inf, make_network, to_ext

EXT = "ext:"


class TransformError(ValueError):
    pass


# -- coarsest common partition --


@dataclass(frozen=True)
class PartitionTerm:
    c: int
    i: int  # 1-based index into R
    j: int  # 1-based index into r

    def to_json(self) -> dict:
        return {"c": self.c, "i": self.i, "j": self.j}


def coarsest_common_partition(R: Sequence[int], r: Sequence[int]) -> List[PartitionTerm]:
    """Split [0, sum R) at every prefix sum of R and of r.

    Term h covers the h-th piece; i and j name the blocks of R and r that
    contain it. Zero entries of R or r never produce a term.
    """
    R = [int(x) for x in R]
    r = [int(x) for x in r]
    if any(x < 0 for x in R + r):
        raise TransformError("entries must be nonnegative")
    if sum(R) != sum(r):
        raise TransformError(f"sums differ: {sum(R)} != {sum(r)}")
    terms = []
    i = j = 0
    left_i = R[0] if R else 0
    left_j = r[0] if r else 0
    done = 0
    total = sum(R)
    while done < total:
        while left_i == 0:
            i += 1
            left_i = R[i]
        while left_j == 0:
            j += 1
            left_j = r[j]
        c = min(left_i, left_j)
        terms.append(PartitionTerm(c, i + 1, j + 1))
        left_i -= c
        left_j -= c
        done += c
    return terms


# -- the extension around a (k+m)-unicast block --


@dataclass(frozen=True)
class ExtensionMetadata:
    k: int
    m: int
    R: Tuple[int, ...]  # block rates, length k+m
    r: Tuple[int, ...]
    terms: Tuple[PartitionTerm, ...]
    s: str
    t: str
    s_j: Tuple[str, ...]
    t_j: Tuple[str, ...]
    v_j: Tuple[str, ...]
    # per term h: names of x, y, z, w, w1, w2, w3
    gadget: Tuple[Dict[str, str], ...]
    block_sources: Tuple[str, ...]  # s'_h
    block_sinks: Tuple[str, ...]  # t'_h
    block_nodes: Tuple[str, ...]
    block_edges: Tuple[str, ...]

    @property
    def target(self) -> Tuple[int, ...]:
        return (sum(self.R[: self.k]),) + tuple(self.R[self.k + j] + self.r[j] for j in range(self.m))

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "m": self.m,
            "R": list(self.R),
            "r": list(self.r),
            "target": list(self.target),
            "terms": [t.to_json() for t in self.terms],
            "s": self.s,
            "t": self.t,
            "s_j": list(self.s_j),
            "t_j": list(self.t_j),
            "v_j": list(self.v_j),
            "gadget": [dict(g) for g in self.gadget],
            "block_sources": list(self.block_sources),
            "block_sinks": list(self.block_sinks),
            "block_nodes": list(self.block_nodes),
            "block_edges": list(self.block_edges),
        }

    def block(self, net: Network) -> Network:
        """The embedded block, recovered from the extended network."""
        edges = [net.edge(e) for e in self.block_edges]
        return make_network(
            self.block_nodes, [(e.id, e.tail, e.head, e.cap) for e in edges], list(zip(self.block_sources, self.block_sinks))
        )


def build_theorem5_extension(block: Network, R: Sequence[int], r: Sequence[int]) -> Tuple[Network, ExtensionMetadata]:
    """(m+1)-unicast network around a (k+m)-unicast block.

    R lists all k+m block rates and r the m side rates, with
    R_1 + ... + R_k = r_1 + ... + r_m. Session 0 is (s, t); session j is
    (s_j, t_j). Each partition term (c, i, j) gets a butterfly: x feeds
    s'_i and t'_i feeds z; w combines z and y, and its copies meet y at
    w2 (towards t) and x at w3 (towards t_j).
    """
    R = tuple(int(x) for x in R)
    r = tuple(int(x) for x in r)
    m = len(r)
    if len(R) != block.k:
        raise TransformError(f"block has {block.k} sessions but {len(R)} rates were given")
    k = block.k - m
    if k < 1 or m < 1:
        raise TransformError("need at least one session on each side")
    if any(x < 0 for x in R + r):
        raise TransformError("rates must be nonnegative")
    if sum(R[:k]) != sum(r):
        raise TransformError(f"R_1+...+R_k = {sum(R[:k])} differs from r_1+...+r_m = {sum(r)}")
    terms = coarsest_common_partition(R[:k], r)
    nodes = list(block.nodes)
    edges = [(e.id, e.tail, e.head, e.cap) for e in block.edges]

    def node(name: str) -> str:
        v = EXT + name
        if v in block.node_index:
            raise TransformError(f"block already has a node named {v!r}")
        nodes.append(v)
        return v

    def edge(u: str, v: str, cap) -> None:
        if cap:
            edges.append((f"{u}>{v}", u, v, cap))

    s, t = node("s"), node("t")
    s_j = tuple(node(f"s{j + 1}") for j in range(m))
    t_j = tuple(node(f"t{j + 1}") for j in range(m))
    v_j = tuple(node(f"v{j + 1}") for j in range(m))
    src = [x.src for x in block.sessions]
    dst = [x.dst for x in block.sessions]
    for j in range(m):
        c = R[k + j]
        edge(s_j[j], v_j[j], c)
        edge(v_j[j], src[k + j], c)
        edge(dst[k + j], t_j[j], c)
    gadgets = []
    for term in terms:
        tag = f"({term.i},{term.j})"
        g = {name: node(name + tag) for name in ("x", "y", "z", "w", "w1", "w2", "w3")}
        c = term.c
        i, j = term.i - 1, term.j - 1
        for u, v in [
            (s, g["x"]),
            (g["x"], src[i]),
            (s_j[j], g["y"]),
            (dst[i], g["z"]),
            (g["z"], g["w"]),
            (g["y"], g["w"]),
            (g["w"], g["w1"]),
            (g["w1"], g["w2"]),
            (g["w1"], g["w3"]),
            (g["y"], g["w2"]),
            (g["x"], g["w3"]),
            (g["w2"], t),
            (g["w3"], t_j[j]),
        ]:
            edge(u, v, c)
        gadgets.append(g)
    sessions = [(s, t)] + list(zip(s_j, t_j))
    net = make_network(nodes, edges, sessions)
    meta = ExtensionMetadata(
        k, m, R, r, tuple(terms), s, t, s_j, t_j, v_j, tuple(gadgets), tuple(src), tuple(dst), block.nodes, tuple(e.id for e in block.edges)
    )
    return net, meta


# -- fusion and monotonicity gadgets --


def fusion_gadget(block: Network, rates: Sequence, session: int = 0) -> Network:
    """Split block session ``session`` into two sessions of rates R_a, R_b.

    New sources s_a, s_b feed s' over edges of capacity R_a and R_b, and t'
    feeds new destinations t_a, t_b the same way. The two new sessions take
    the place of the fused one; the others keep their block terminals.
    """
    if len(rates) != 2:
        raise TransformError("fusion splits a session into exactly two")
    if not 0 <= session < block.k:
        raise TransformError(f"block has no session {session + 1}")
    Ra, Rb = (to_ext(x) for x in rates)
    fused = block.sessions[session]
    nodes = list(block.nodes)
    names = {}
    for tag in ("s_a", "s_b", "t_a", "t_b"):
        v = f"fuse:{tag}"
        if v in block.node_index:
            raise TransformError(f"block already has a node named {v!r}")
        names[tag] = v
        nodes.append(v)
    edges = [(e.id, e.tail, e.head, e.cap) for e in block.edges]
    for u, v, c in [
        (names["s_a"], fused.src, Ra),
        (names["s_b"], fused.src, Rb),
        (fused.dst, names["t_a"], Ra),
        (fused.dst, names["t_b"], Rb),
    ]:
        if c:
            edges.append((f"{u}>{v}", u, v, c))
    sessions = [(x.src, x.dst) for x in block.sessions]
    sessions[session : session + 1] = [(names["s_a"], names["t_a"]), (names["s_b"], names["t_b"])]
    return make_network(nodes, edges, sessions)


def monotonicity_gadget(block: Network, r: Sequence, R: Optional[Sequence] = None) -> Network:
    """Give each block session a new source and destination plus a bypass.

    s_i feeds s'_i and t'_i feeds t_i over edges of capacity R_i (infinite
    when R is omitted); the bypass s_i -> t_i has capacity r_i. Edges of
    capacity 0 are left out.
    """
    if len(r) != block.k or (R is not None and len(R) != block.k):
        raise TransformError(f"need one value per block session ({block.k})")
    r = [to_ext(x) for x in r]
    feed = [INF] * block.k if R is None else [to_ext(x) for x in R]
    nodes = list(block.nodes)
    edges = [(e.id, e.tail, e.head, e.cap) for e in block.edges]
    sessions = []
    for i, sess in enumerate(block.sessions):
        si, ti = f"mono:s{i + 1}", f"mono:t{i + 1}"
        for v in (si, ti):
            if v in block.node_index:
                raise TransformError(f"block already has a node named {v!r}")
        nodes += [si, ti]
        for u, v, c in [(si, sess.src, feed[i]), (sess.dst, ti, feed[i]), (si, ti, r[i])]:
            if c:
                edges.append((f"{u}>{v}", u, v, c))
        sessions.append((si, ti))
    return make_network(nodes, edges, sessions)


# -- super-source transform --


def supersource_transform(net: Network, R: Sequence, name: str = "super") -> Network:
    """Single-source multicast instance: s feeds s_i over capacity R_i.

    Both sessions of the result start at the super source, so a mincut to
    each destination gives its multicast capacity. Zero-rate feeders are
    left out.
    """
    if net.k != 2:
        raise TransformError("the super-source transform needs two sessions")
    if name in net.node_index:
        raise TransformError(f"node name {name!r} already in use")
    R = [to_ext(x) for x in R]
    if len(R) != 2 or any(x < 0 for x in R):
        raise TransformError("need two nonnegative rates")
    edges = [(e.id, e.tail, e.head, e.cap) for e in net.edges]
    for i, sess in enumerate(net.sessions):
        if R[i]:
            edges.append((f"{name}>{sess.src}", name, sess.src, R[i]))
    return make_network(list(net.nodes) + [name], edges, [(name, x.dst) for x in net.sessions])


# -- multiterminal cut gadget --

UndirectedEdge = Union[Tuple[str, str], Tuple[str, str, str]]


def _undirected(H: Sequence[UndirectedEdge]) -> List[Tuple[str, str, str]]:
    out = []
    for n, e in enumerate(H):
        if len(e) == 3:
            out.append((str(e[0]), str(e[1]), str(e[2])))
        elif len(e) == 2:
            out.append((f"h{n + 1}", str(e[0]), str(e[1])))
        else:
            raise TransformError(f"bad undirected edge {e!r}")
        if out[-1][1] == out[-1][2]:
            raise TransformError(f"self-loop {e!r}")
    if len({e[0] for e in out}) != len(out):
        raise TransformError("duplicate edge ids")
    return out


def np_gadget(H: Sequence[UndirectedEdge], x: str, y: str, z: str, nodes: Sequence[str] = ()) -> Network:
    """Two-unicast network whose min GNS cut equals H's min x,y,z multiterminal cut.

    H lists undirected edges as (u, v) or (id, u, v); ``nodes`` may add
    isolated vertices. Each edge u-v becomes a unit central edge w -> w'
    entered from u and v and leaving to u and v over flank edges of
    capacity |E(H)| + 1. Sessions: s1 = x, t1 = z, s2 = z, t2 = y.
    """
    edges = _undirected(H)
    verts = list(dict.fromkeys(list(nodes) + [v for _, a, b in edges for v in (a, b)]))
    for v in (x, y, z):
        if v not in verts:
            raise TransformError(f"terminal {v!r} is not a vertex of H")
    if len({x, y, z}) != 3:
        raise TransformError("terminals must be distinct")
    big = Fraction(len(edges) + 1)
    all_nodes = list(verts)
    out = []
    for eid, u, v in edges:
        w, w2 = f"gadget:{eid}:w", f"gadget:{eid}:w'"
        all_nodes += [w, w2]
        out += [
            (f"gadget:{eid}:center", w, w2, 1),
            (f"gadget:{eid}:{u}>w", u, w, big),
            (f"gadget:{eid}:{v}>w", v, w, big),
            (f"gadget:{eid}:w'>{u}", w2, u, big),
            (f"gadget:{eid}:w'>{v}", w2, v, big),
        ]
    return make_network(all_nodes, out, [(x, z), (z, y)], allow_cycles=True)


def multiterminal_cut(H: Sequence[UndirectedEdge], terminals: Sequence[str]) -> int:
    """Fewest edges of H whose removal separates every pair of terminals (brute force)."""
    from itertools import combinations

    edges = _undirected(H)
    terminals = list(terminals)
    for size in range(len(edges) + 1):
        for drop in combinations(range(len(edges)), size):
            gone = set(drop)
            parent: Dict[str, str] = {}

            def find(a: str) -> str:
                parent.setdefault(a, a)
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            for n, (_, a, b) in enumerate(edges):
                if n not in gone:
                    parent[find(a)] = find(b)
            roots = [find(v) for v in terminals]
            if len(set(roots)) == len(roots):
                return size
    raise AssertionError("removing every edge separates the terminals")
