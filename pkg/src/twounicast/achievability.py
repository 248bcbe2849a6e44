"""Constructive linear codes: GNS corner points, two-multicast corners,
and the forward direction of the rate-transfer reduction.

Every constructed scheme is checked by exhaustive simulation before it is
returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .coding import (
    DEFAULT_VERIFY_CAP,
    Scheme,
    SchemeError,
    SearchBudgetExceeded,
    _input_blocks,
    empty_scheme,
    search_linear,
    symbol_limit,
    verify,
)
from .edgecut_bounds import EdgeClassification, classify_cut_edges, is_minimal_gns_cut
from .flows import edge_disjoint_paths
from .gf import field as gf_field
from .netgraph import INF, Edge, Network, NetworkError, edge_indices, expand_unit_edges, is_inf, make_network, reachable
from .rate_regions import two_multicast_region


class ConstructionError(RuntimeError):
    """A construction step does not apply to this instance."""


# -- assembly from global vectors --


def _unit_rows(M: int, start: int, n: int) -> List[List[int]]:
    rows = []
    for t in range(n):
        r = [0] * M
        r[start + t] = 1
        rows.append(r)
    return rows


def _assemble(
    net: Network,
    q: int,
    messages: Sequence[int],
    targets: Dict[str, Optional[List[List[int]]]],
    demands: Optional[List[Tuple[int, str]]] = None,
    N: int = 1,
) -> Scheme:
    """Local maps realizing prescribed global vectors.

    ``targets[e]`` lists the global vectors edge e must carry; None means
    forward a basis of everything the tail sees. Raises ConstructionError
    when some target is not in the span available at the tail, or a
    destination cannot decode.
    """
    F = gf_field(q)
    M = sum(messages)
    offsets = [sum(messages[:i]) for i in range(net.k)]
    glob: Dict[str, List[List[int]]] = {}
    sym: Dict[str, int] = {}
    maps: Dict[str, List[List[int]]] = {}

    def rows_at(v: str) -> List[List[int]]:
        rows = []
        for kind, key, n in _input_blocks(net, sym, messages, v):
            rows += _unit_rows(M, offsets[key], n) if kind == "msg" else glob[key]
        return rows

    for j in net.topo_edges:
        e = net.edges[j]
        T = rows_at(e.tail)
        want = targets.get(e.id)
        if want is None:
            want = [T[i] for i in F.independent_rows(T)]
        if len(want) > symbol_limit(net, N, messages, e.id):
            raise ConstructionError(f"edge {e.id} would need {len(want)} symbols")
        D = F.solve_left(T, want)
        if D is None:
            raise ConstructionError(f"edge {e.id}: target not available at {e.tail}")
        sym[e.id] = len(want)
        maps[e.id] = D
        glob[e.id] = [list(r) for r in want]
    demands = demands if demands is not None else [(i, s.dst) for i, s in enumerate(net.sessions)]
    decoders = []
    for i, v in demands:
        T = rows_at(v)
        E = _unit_rows(M, offsets[i], messages[i])
        D = F.solve_left(T, E)
        if D is None:
            raise ConstructionError(f"destination {v} cannot decode session {i + 1}")
        decoders.append(D)
    unicast = demands == [(i, s.dst) for i, s in enumerate(net.sessions)]
    return Scheme(q, N, tuple(messages), sym, maps, decoders, None if unicast else list(demands))


def _checked(net: Network, sch: Scheme) -> Scheme:
    report = verify(net, sch, cap=max(DEFAULT_VERIFY_CAP, sch.q ** sum(sch.messages)))
    if not report.zero_error:
        raise ConstructionError(f"constructed scheme fails on {report.first_failure}")
    return sch


# -- GNS corner points --


def corner_point(C: Tuple[Fraction, Fraction], CS: Fraction, corner: int) -> Tuple[Fraction, Fraction]:
    """Corner 1 maximizes R1 first, corner 2 maximizes R2 first."""
    C1, C2 = C
    if corner == 1:
        return (C1, min(C2, CS - C1))
    if corner == 2:
        return (min(C1, CS - C2), C2)
    raise ValueError("corner must be 1 or 2")


@dataclass
class CornerScheme:
    """A GNS corner scheme on the network with cut edges split into unit copies."""

    network: Network
    origin: Dict[str, str]  # copy -> original edge id
    cut: Tuple[str, ...]  # copies of the cut edges
    scheme: Scheme
    rates: Tuple[int, int]
    case: str
    method: str  # "construction" or "search"
    trace: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        from .netgraph import network_to_json

        return {
            "rates": list(self.rates),
            "case": self.case,
            "method": self.method,
            "cut": list(self.cut),
            "origin": self.origin,
            "network": network_to_json(self.network),
            "scheme": self.scheme.to_json(),
            "trace": list(self.trace),
        }


class _Symbols:
    """Cut-edge contents as GF(2) combinations of named message symbols."""

    def __init__(self, cut: Sequence[str]):
        self.owner: Dict[int, int] = {}
        self.vec: Dict[str, FrozenSet[int]] = {e: frozenset() for e in cut}
        self.role: Dict[str, tuple] = {e: ("free",) for e in cut}
        self._next = 0

    def new(self, session: int) -> int:
        self._next += 1
        self.owner[self._next] = session
        return self._next

    def count(self, session: int) -> int:
        return sum(1 for s in self.owner.values() if s == session)

    def impose_zero(self, total: FrozenSet[int], prefer: FrozenSet[int]) -> int:
        """Restrict the message space to sum(total) = 0 by eliminating one symbol."""
        pick = sorted(total & prefer) or sorted(total)
        if not pick:
            raise ConstructionError("nothing to eliminate")
        sigma = pick[0]
        for e, v in self.vec.items():
            if sigma in v:
                self.vec[e] = v ^ total
        del self.owner[sigma]
        return sigma

    def drop(self, sigma: int) -> None:
        for e, v in self.vec.items():
            if sigma in v:
                self.vec[e] = v - {sigma}
        del self.owner[sigma]

    def chain(self, edges: Sequence[str], start: FrozenSet[int]) -> FrozenSet[int]:
        """g_f1 = start + old(f1), g_fk = g_f(k-1) + old(fk); returns sum of olds."""
        g = start
        olds: FrozenSet[int] = frozenset()
        for f in edges:
            olds = olds ^ self.vec[f]
            g = g ^ self.vec[f]
            self.vec[f] = g
        return olds


class _Corner:
    def __init__(self, net: Network, S: Sequence[str]):
        self.net = net
        ex, origin = expand_unit_edges(net, only=S)
        self.ex = ex
        self.origin = origin
        self.cut = tuple(e.id for e in ex.edges if origin[e.id] in set(S))
        self.cutset = set(self.cut)
        self.cls: EdgeClassification = classify_cut_edges(ex, self.cut)
        self.relaxed = ex.with_capacities({e.id: INF for e in ex.edges if e.id not in self.cutset})
        self.trace: List[str] = []

    def group(self, x: int, y: int) -> List[str]:
        """S_x^y with 0-based session sets encoded as 0, 1 or 2 (= both)."""
        name = lambda i: "12" if i == 2 else str(i + 1)
        return list(self.cls.group(name(x), name(y)))

    def label(self, e: str) -> str:
        x, y = self.cls.labels[e]
        return f"S_{x}^{y}"

    def paths(self, i: int) -> List[List[str]]:
        s = self.ex.sessions[i]
        hat = self.cls.S_hat[i]
        found = edge_disjoint_paths(self.relaxed, s.src, s.dst, forbidden=hat, share_infinite=True)
        return [[f for f in p if f in self.cutset] for p in found]

    def scheme(self, V: _Symbols) -> Scheme:
        k0 = sorted(s for s, o in V.owner.items() if o == 0)
        k1 = sorted(s for s, o in V.owner.items() if o == 1)
        coord = {s: c for c, s in enumerate(k0 + k1)}
        M = len(coord)
        targets: Dict[str, Optional[List[List[int]]]] = {}
        for e in self.ex.edges:
            if e.id in self.cutset:
                v = V.vec[e.id]
                if v:
                    row = [0] * M
                    for s in v:
                        row[coord[s]] = 1
                    targets[e.id] = [row]
                else:
                    targets[e.id] = []
            else:
                targets[e.id] = None
        return _checked(self.ex, _assemble(self.ex, 2, (len(k0), len(k1)), targets))


def _base(C: _Corner, V: _Symbols, P: int) -> None:
    """Route fresh P symbols on S_hat_P and fresh Q symbols on the rest."""
    Q = 1 - P
    hatP = set(C.cls.S_hat[P])
    for e in C.cut:
        if e in hatP:
            V.vec[e] = frozenset({V.new(P)})
            V.role[e] = ("route", P)
        else:
            V.vec[e] = frozenset({V.new(Q)})
            V.role[e] = ("route", Q)
    C.trace.append(f"base routing: R{P + 1}={V.count(P)}, R{Q + 1}={V.count(Q)}")


def _case_one(C: _Corner, V: _Symbols, P: int, target: Tuple[int, int]) -> None:
    Q = 1 - P
    _base(C, V, P)
    for path in C.paths(P):
        if V.count(P) >= target[P]:
            break
        if not path:
            raise ConstructionError("path avoids the cut")
        a = V.new(P)
        olds = V.chain(path, frozenset({a}))
        V.impose_zero(olds, olds)
        C.trace.append(f"XOR chain over {','.join(path)} for session {P + 1}, one constraint on session {Q + 1}")


def _stage_one(C: _Corner, V: _Symbols, P: int, unpaired: int) -> None:
    """Case II/III start: route, then butterfly S_PQ^PQ against S_Q^P.

    Unpaired S_PQ^PQ edges carry fresh symbols of session ``unpaired``.
    """
    Q = 1 - P
    for x, y, owner in [(P, P, P), (P, 2, P), (2, P, P), (Q, Q, Q), (Q, 2, Q), (2, Q, Q)]:
        for e in C.group(x, y):
            V.vec[e] = frozenset({V.new(owner)})
            V.role[e] = ("route", owner)
    both = C.group(2, 2)
    side = C.group(Q, P)
    k = min(len(both), len(side))
    for e, f in zip(both[:k], side[:k]):
        a, b = V.new(P), V.new(Q)
        V.vec[e] = frozenset({a, b})
        V.role[e] = ("mixed", f, a, b)
        V.vec[f] = frozenset({b})
        V.role[f] = ("side", e)
    for e in both[k:]:
        V.vec[e] = frozenset({V.new(unpaired)})
        V.role[e] = ("route", unpaired)
    C.trace.append(f"stage I: routing plus {k} butterfly pair(s): R{P + 1}={V.count(P)}, R{Q + 1}={V.count(Q)}")


def _free(C: _Corner, V: _Symbols, P: int, avoid=()) -> List[str]:
    """Free S_Q^P edges, those outside ``avoid`` first."""
    free = [e for e in C.group(1 - P, P) if V.role[e][0] == "free"]
    return [e for e in free if e not in avoid] + [e for e in free if e in avoid]


def _move_side(C: _Corner, V: _Symbols, f: str, to: str) -> None:
    partner = V.role[f][1]
    V.vec[to], V.role[to] = V.vec[f], V.role[f]
    V.role[partner] = V.role[partner][:1] + (to,) + V.role[partner][2:]
    V.vec[f], V.role[f] = frozenset(), ("free",)


def _stage_two(C: _Corner, V: _Symbols, P: int, target: int, costly: bool = True) -> None:
    """Raise R_P along paths that avoid S_hat_P.

    Without ``costly``, steps that would give up a symbol of the other
    session are skipped.
    """
    Q = 1 - P
    starts = {p[0] for p in C.paths(Q) if p}  # keep these for stage III
    paths = C.paths(P)
    if any(not p for p in paths):
        raise ConstructionError("path avoids the cut")
    to_t = (str(Q + 1), str(P + 1))
    paths.sort(key=lambda p: C.cls.labels[p[-1]] != to_t)
    for n, path in enumerate(paths):
        if V.count(P) >= target:
            return
        *body, last = path
        ends = {p[-1] for p in paths[n + 1 :]}
        lab = C.label(last)
        x, y = C.cls.labels[last]
        if (x, y) == (str(Q + 1), "12"):
            free = [e for e in _free(C, V, P, starts) if e not in ends]
            if not free and not costly:
                continue
            a = V.new(P)
            olds = V.chain(path, frozenset({a}))
            if free:
                V.vec[free[0]] = olds
                V.role[free[0]] = ("relay",)
                C.trace.append(f"stage II: chain over {','.join(path)}; {free[0]} relays the session {Q + 1} sum")
            else:
                V.impose_zero(olds, V.vec[last] & olds)
                C.trace.append(f"stage II: chain over {','.join(path)}; one constraint on session {Q + 1}")
        elif (x, y) == to_t:
            role = V.role[last][0]
            if role not in ("free", "side"):
                if costly:
                    raise ConstructionError(f"stage II: {last} already in use")
                continue
            free = [e for e in _free(C, V, P, starts) if e != last and e not in ends]
            if role == "side" and not free and not costly:
                continue
            a = V.new(P)
            V.chain(body, frozenset({a}))
            if role == "side":
                if free:
                    _move_side(C, V, last, free[0])
                else:
                    partner = V.role[last][1]
                    _, _, pa, pb = V.role[partner]
                    V.drop(pb)
                    V.role[partner] = ("route", P)
                    V.vec[last], V.role[last] = frozenset(), ("free",)
                    C.trace.append(f"stage II: {last} stops carrying side information, {partner} drops a session {Q + 1} symbol")
            V.vec[last] = frozenset({a})
            V.role[last] = ("last", a)
            C.trace.append(f"stage II: chain over {','.join(path)} ending on {lab}")
        else:
            raise ConstructionError(f"stage II: path ends on {lab}")


def _stage_three(C: _Corner, V: _Symbols, P: int, target: int, trade: bool) -> None:
    """Raise R_Q along paths that avoid S_hat_Q; with ``trade`` each step may cost one R_P."""
    Q = 1 - P
    paths = C.paths(Q)
    if any(not p for p in paths):
        raise ConstructionError("path avoids the cut")
    if trade:
        # free starts cost nothing, and their edges must not be spent as relays
        paths.sort(key=lambda p: V.role[p[0]][0] != "free")
    for n, path in enumerate(paths):
        if V.count(Q) >= target:
            return
        first, *rest = path
        x, y = C.cls.labels[first]
        later = {p[0] for p in paths[n + 1 :]}
        free = [e for e in _free(C, V, P, later) if e != first and not (trade and e in later)]
        b = V.new(Q)
        if (x, y) == ("12", str(P + 1)):
            if free:
                V.chain(path, frozenset({b}))
                V.vec[free[0]] = frozenset({b})
                V.role[free[0]] = ("relay",)
                C.trace.append(f"stage III: chain over {','.join(path)}; {free[0]} carries the new symbol")
            elif trade:
                olds = V.chain(path, frozenset({b}))
                V.impose_zero(olds, V.vec[path[-1]] & olds)
                C.trace.append(f"trade: chain over {','.join(path)}; one constraint on session {P + 1}")
            else:
                V.drop(b)
                return
        elif (x, y) == (str(Q + 1), str(P + 1)):
            role = V.role[first]
            if role[0] == "side":
                if free:
                    _move_side(C, V, first, free[0])
                elif trade:
                    partner = role[1]
                    _, _, pa, pb = V.role[partner]
                    V.drop(pa)
                    V.role[partner] = ("route", Q)
                    V.vec[first], V.role[first] = frozenset(), ("free",)
                    C.trace.append(f"trade: {partner} drops a session {P + 1} symbol, freeing {first}")
                else:
                    V.drop(b)
                    return
                role = V.role[first]
            if role[0] == "free":
                V.vec[first] = frozenset({b})
                V.role[first] = ("relay",)
                V.chain(rest, frozenset({b}))
                C.trace.append(f"stage III: {first} starts a chain over {','.join(path)}")
            elif role[0] in ("last", "relay"):
                if free:
                    V.vec[free[0]] = frozenset({b})
                    V.role[free[0]] = ("relay",)
                    V.chain(path, frozenset({b}))
                    C.trace.append(f"stage III: superimpose on {first}; {free[0]} carries the new symbol")
                elif trade and role[0] == "last":
                    V.drop(role[1])
                    V.vec[first] = frozenset({b})
                    V.role[first] = ("relay",)
                    V.chain(rest, frozenset({b}))
                    C.trace.append(f"trade: {first} gives up its session {P + 1} symbol")
                else:
                    V.drop(b)
                    return
            else:
                raise ConstructionError(f"stage III: {first} in role {role[0]}")
        else:
            raise ConstructionError(f"stage III: path starts on {C.label(first)}")


def _construct(C: _Corner, corner: int, target: Tuple[int, int]) -> Tuple[str, _Symbols]:
    net = C.ex
    s1, s2 = net.sessions
    cross12 = s2.dst in reachable(net, [s1.src], edge_indices(net, C.cut))
    cross21 = s1.dst in reachable(net, [s2.src], edge_indices(net, C.cut))
    if not cross12 and not cross21:
        V = _Symbols(C.cut)
        _case_one(C, V, corner - 1, target)
        _reached(V, target)
        return "I", V
    case = "II" if cross12 else "III"
    P = 0 if cross12 else 1  # s_P still reaches t_Q
    Q = 1 - P
    if corner - 1 == P:
        V = _Symbols(C.cut)
        _stage_one(C, V, P, P)
        _stage_two(C, V, P, C.cls.C[P])
        _stage_three(C, V, P, target[Q], trade=False)
        _reached(V, target)
        return case, V
    # corner favouring Q: give Q the unpaired edges first, else trade from P's corner
    base = list(C.trace)
    V = _Symbols(C.cut)
    _stage_one(C, V, P, Q)
    _stage_three(C, V, P, target[Q], trade=True)
    _stage_two(C, V, P, target[P], costly=False)
    if (V.count(0), V.count(1)) == target:
        return case, V
    C.trace[:] = base + [f"first attempt reached {(V.count(0), V.count(1))}; trading from the other corner"]
    V = _Symbols(C.cut)
    _stage_one(C, V, P, P)
    _stage_two(C, V, P, target[P])
    _stage_three(C, V, P, target[Q], trade=True)
    _reached(V, target)
    return case, V


def _reached(V: _Symbols, target: Tuple[int, int]) -> None:
    got = (V.count(0), V.count(1))
    if got != target:
        raise ConstructionError(f"construction reached {got}, not {target}")


def gns_corner_scheme(net: Network, S: Sequence[str], corner: int = 1, fallback: bool = True, budget: int = 2_000_000) -> CornerScheme:
    """Zero-error linear scheme over GF(2) at a corner of the GNS region of S.

    S must be a minimal GNS cut with integer capacities, and every edge
    outside S must have capacity at least C(S). The cut edges are split
    into unit copies. The routing, XOR-chain and butterfly stages are
    tried first; if they do not reach the corner, an exhaustive search on
    the split network takes over when ``fallback`` is set.
    """
    if net.k != 2:
        raise NetworkError("corner schemes need a two-unicast network")
    S = tuple(dict.fromkeys(S))
    net.check_edges(S)
    if not is_minimal_gns_cut(net, S, (0, 1)):
        raise NetworkError("edge set is not a minimal GNS cut")
    CS = net.capacity(S)
    if is_inf(CS) or any(Fraction(net.cap(e)).denominator != 1 for e in S):
        raise NetworkError("cut capacities must be finite integers")
    for e in net.edges:
        if e.id not in S and not is_inf(e.cap) and e.cap < CS:
            raise NetworkError(f"edge {e.id} outside the cut has capacity below C(S) = {CS}")
    C = _Corner(net, S)
    target = tuple(int(r) for r in corner_point(C.cls.C, CS, corner))
    C.trace.append(f"C1={C.cls.C[0]}, C2={C.cls.C[1]}, C(S)={CS}, corner {corner} = {target}")
    case = "?"
    try:
        case, V = _construct(C, corner, target)
        sch = C.scheme(V)
        method = "construction"
    except ConstructionError as exc:
        if not fallback:
            raise
        C.trace.append(f"construction stopped: {exc}; exhaustive search at N=1 over GF(2)")
        try:
            sch = search_linear(C.ex, target, q=2, N=1, budget=budget)
        except SearchBudgetExceeded as exc2:
            raise ConstructionError(f"search budget exhausted: {exc2}") from None
        if sch is None:
            raise ConstructionError(f"no scheme at {target} over GF(2) with N=1")
        method = "search"
    sch.trace = list(C.trace)
    return CornerScheme(C.ex, C.origin, C.cut, sch, target, case, method, list(C.trace))


# -- two-multicast --

MULTICAST_FIELDS = (2, 3, 4, 5, 7, 8)
SUPER = "super"


def _block_length(net: Network, R: Sequence[Fraction]) -> int:
    N = 1
    for x in list(R) + [e.cap for e in net.edges if not is_inf(e.cap)]:
        N = lcm(N, Fraction(x).denominator)
    return N


def two_multicast_scheme(net: Network, R: Sequence, fields: Sequence[int] = MULTICAST_FIELDS) -> Scheme:
    """Linear scheme where both destinations decode both messages.

    Adds a super source feeding s_i with N*R_i symbols, takes N*(R1+R2)
    edge-disjoint symbol paths to each destination, and assigns coding
    coefficients edge by edge so that each destination's path frontier
    stays full rank. The smallest field in ``fields`` that works is used.
    """
    if net.k != 2:
        raise NetworkError("two-multicast needs two sessions")
    R = [Fraction(r) for r in R]
    if len(R) != 2 or any(r < 0 for r in R):
        raise SchemeError("need two nonnegative rates")
    if not two_multicast_region(net).contains(R):
        raise SchemeError("rate pair lies outside the two-multicast region")
    (s1, t1), (s2, t2) = [(s.src, s.dst) for s in net.sessions]
    demands = [(0, t1), (1, t1), (0, t2), (1, t2)]
    N = _block_length(net, R)
    m = tuple(int(r * N) for r in R)
    M = sum(m)
    if M == 0:
        sch = empty_scheme(net, 2, N)
        sch.decoders = [[] for _ in demands]
        sch.demands = demands
        return sch
    # symbol network: one unit edge per symbol slot
    copies: Dict[str, List[str]] = {}
    edges = []
    for i, src in enumerate((s1, s2)):
        for t in range(m[i]):
            cid = f"{SUPER}>{i}#{t}"
            edges.append((cid, SUPER, src, 1))
    for e in net.edges:
        n = symbol_limit(net, N, m, e.id)
        copies[e.id] = [f"{e.id}@{t}" for t in range(n)]
        edges += [(c, e.tail, e.head, 1) for c in copies[e.id]]
    nodes = [v for v in net.nodes if v != SUPER] + [SUPER]
    if SUPER in net.nodes:
        raise NetworkError(f"node name {SUPER!r} is reserved")
    symnet = make_network(nodes, edges, [])
    paths = {}
    for d in (t1, t2):
        p = edge_disjoint_paths(symnet, SUPER, d)
        if len(p) < M:
            raise AssertionError("flow below the multicast rate")
        paths[d] = p[:M]
    # where each copy sits on each destination's paths
    pred: Dict[str, Dict[str, str]] = {}
    for d, ps in paths.items():
        for p in ps:
            for a, b in zip(p, p[1:]):
                pred.setdefault(b, {})[d] = a
    for q in fields:
        sch = _multicast_attempt(net, q, N, m, copies, paths, pred, demands)
        if sch is not None:
            sch.trace.append(f"GF({q}), N={N}")
            return _checked(net, sch)
    raise ConstructionError(f"no field among {tuple(fields)} supports the greedy multicast code")


def _multicast_attempt(net, q, N, m, copies, paths, pred, demands) -> Optional[Scheme]:
    from itertools import product

    F = gf_field(q)
    M = sum(m)
    offsets = (0, m[0])
    glob: Dict[str, List[int]] = {}
    for i in range(2):
        for t in range(m[i]):
            r = [0] * M
            r[offsets[i] + t] = 1
            glob[f"{SUPER}>{i}#{t}"] = r
    frontier = {d: [p[0] for p in ps] for d, ps in paths.items()}
    for j in net.topo_edges:
        e = net.edges[j]
        for c in copies[e.id]:
            users = pred.get(c, {})
            if not users:
                glob[c] = [0] * M
                continue
            parents = sorted(set(users.values()))
            ok = None
            for coef in product(range(q), repeat=len(parents)):
                if not any(coef):
                    continue
                g = [0] * M
                for a, p in zip(coef, parents):
                    g = F.axpy(a, glob[p], g)
                good = True
                for d, p in users.items():
                    rows = [g if x == p else glob[x] for x in frontier[d]]
                    if F.rank(rows) < M:
                        good = False
                        break
                if good:
                    ok = g
                    break
            if ok is None:
                return None
            glob[c] = ok
            for d, p in users.items():
                frontier[d] = [c if x == p else x for x in frontier[d]]
    targets = {e.id: [glob[c] for c in copies[e.id]] for e in net.edges}
    try:
        return _assemble(net, q, m, targets, demands, N)
    except ConstructionError:
        return None


# -- rate-transfer reduction, forward direction --


def reduction_forward_scheme(extension, block_scheme: Scheme) -> Scheme:
    """Scheme for an extended network at its target rates, from a block scheme.

    ``extension`` is the (network, metadata) pair built by
    transforms.build_theorem5_extension and ``block_scheme`` a zero-error
    scheme for the embedded block at the rates R recorded in the metadata.
    Session 0 sends the X pieces in term order; session j sends V_j and
    then its Y pieces. Inside the block everything runs as in the block
    scheme with the X pieces as the first k messages; each butterfly sends
    W = Z + Y, recovers X = W - Y at w2 and Y = W - X at w3.
    """
    from .coding import check_scheme, global_maps

    net, meta = extension
    block = meta.block(net)
    check_scheme(block, block_scheme)
    N = block_scheme.N
    if tuple(block_scheme.messages) != tuple(N * x for x in meta.R):
        raise SchemeError(f"block scheme rates {block_scheme.rates} differ from {meta.R}")
    F = gf_field(block_scheme.q)
    k, m = meta.k, meta.m
    messages = [N * x for x in meta.target]
    M = sum(messages)
    offsets = [sum(messages[:i]) for i in range(len(messages))]
    # coordinates of each piece in the extension's message vector
    X: List[List[int]] = []
    Y: List[List[int]] = []
    pos0 = 0
    posj = [offsets[1 + j] + N * meta.R[k + j] for j in range(m)]
    for term in meta.terms:
        n = N * term.c
        X.append(list(range(pos0, pos0 + n)))
        pos0 += n
        j = term.j - 1
        Y.append(list(range(posj[j], posj[j] + n)))
        posj[j] += n
    V = [list(range(offsets[1 + j], offsets[1 + j] + N * meta.R[k + j])) for j in range(m)]
    # block message coordinate -> extension coordinate
    block_coord: List[int] = []
    for i in range(k):
        for h, term in enumerate(meta.terms):
            if term.i == i + 1:
                block_coord += X[h]
    for j in range(m):
        block_coord += V[j]

    def unit(cols: Sequence[int]) -> List[List[int]]:
        return [_unit_rows(M, c, 1)[0] for c in cols]

    def plus(a: List[List[int]], b: List[List[int]]) -> List[List[int]]:
        return [[F.add[x][y] for x, y in zip(u, v)] for u, v in zip(a, b)]

    targets: Dict[str, Optional[List[List[int]]]] = {}
    for eid, rows in global_maps(block, block_scheme).items():
        lifted = []
        for row in rows:
            g = [0] * M
            for c, a in enumerate(row):
                g[block_coord[c]] = a
            lifted.append(g)
        targets[eid] = lifted

    def put(u: str, v: str, rows: List[List[int]]) -> None:
        eid = f"{u}>{v}"
        if eid in net.edge_index:
            targets[eid] = rows

    for j in range(m):
        put(meta.s_j[j], meta.v_j[j], unit(V[j]))
        put(meta.v_j[j], meta.block_sources[k + j], unit(V[j]))
        put(meta.block_sinks[k + j], meta.t_j[j], unit(V[j]))
    for h, (term, g) in enumerate(zip(meta.terms, meta.gadget)):
        i, j = term.i - 1, term.j - 1
        x, y = unit(X[h]), unit(Y[h])
        w = plus(x, y)  # Z = X on the straight-through wires
        put(meta.s, g["x"], x)
        put(g["x"], meta.block_sources[i], x)
        put(meta.s_j[j], g["y"], y)
        put(meta.block_sinks[i], g["z"], x)
        put(g["z"], g["w"], x)
        put(g["y"], g["w"], y)
        put(g["w"], g["w1"], w)
        put(g["w1"], g["w2"], w)
        put(g["w1"], g["w3"], w)
        put(g["y"], g["w2"], y)
        put(g["x"], g["w3"], x)
        put(g["w2"], meta.t, x)
        put(g["w3"], meta.t_j[j], y)
    missing = [e.id for e in net.edges if e.id not in targets]
    if missing:
        raise SchemeError(f"extension edges outside the construction: {missing}")
    try:
        sch = _assemble(net, block_scheme.q, messages, targets, None, N)
    except ConstructionError as exc:
        raise SchemeError(f"block interface mismatch: {exc}") from None
    sch.trace.append(f"butterfly forward scheme over {len(meta.terms)} partition term(s)")
    return _checked(net, sch)
