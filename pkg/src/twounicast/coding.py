"""Zero-error vector linear network codes: representation, simulation,
exhaustive verification and exhaustive search.

A scheme over GF(q) with block length N sends m_i = N*R_i message symbols
for session i. Edge e carries up to floor(N*C_e) symbols (infinite edges:
the total number of message symbols). Its map is a matrix applied to the
tail's input vector: the messages of sessions sourced at the tail, in
session order, followed by the symbols of the tail's in-edges, in
canonical edge order. Decoder i is applied to the same kind of input
vector at t_i.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .flows import _max_flow
from .gf import GF, field as gf_field, subspaces
from .netgraph import Network, NetworkError, is_inf

DEFAULT_VERIFY_CAP = 1 << 24


class SchemeError(ValueError):
    pass


class MessageSpaceTooLarge(SchemeError):
    pass


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass
class Scheme:
    q: int
    N: int
    messages: Tuple[int, ...]
    edge_symbols: Dict[str, int]
    edge_maps: Dict[str, List[List[int]]]
    decoders: List[List[List[int]]]
    demands: Optional[List[Tuple[int, str]]] = None  # (session, node) per decoder; None = unicast
    trace: List[str] = field(default_factory=list, compare=False)

    @property
    def rates(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(m, self.N) for m in self.messages)

    def demand_list(self, net: Network) -> List[Tuple[int, str]]:
        if self.demands is not None:
            return list(self.demands)
        return [(i, s.dst) for i, s in enumerate(net.sessions)]

    def to_json(self) -> dict:
        doc = {
            "field": self.q,
            "N": self.N,
            "messages": list(self.messages),
            "edges": {e: {"symbols": self.edge_symbols[e], "matrix": self.edge_maps[e]} for e in self.edge_maps},
            "decoders": self.decoders,
        }
        if self.demands is not None:
            doc["demands"] = [[i, v] for i, v in self.demands]
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


def scheme_from_json(doc) -> Scheme:
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    try:
        edges = doc["edges"]
        return Scheme(
            int(doc["field"]),
            int(doc["N"]),
            tuple(int(m) for m in doc["messages"]),
            {e: int(v["symbols"]) for e, v in edges.items()},
            {e: [[int(a) for a in row] for row in v["matrix"]] for e, v in edges.items()},
            [[[int(a) for a in row] for row in D] for D in doc["decoders"]],
            [(int(i), str(v)) for i, v in doc["demands"]] if "demands" in doc else None,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemeError(f"malformed scheme document: {exc}") from exc


# -- layout helpers --


def symbol_limit(net: Network, N: int, messages: Sequence[int], eid: str) -> int:
    cap = net.edge(eid).cap
    if is_inf(cap):
        return sum(messages)
    val = Fraction(cap) * N
    return val.numerator // val.denominator


def _input_blocks(net: Network, sym: Dict[str, int], messages: Sequence[int], v: str) -> List[Tuple[str, object, int]]:
    blocks: List[Tuple[str, object, int]] = [("msg", i, messages[i]) for i, s in enumerate(net.sessions) if s.src == v]
    blocks += [("edge", net.edges[j].id, sym[net.edges[j].id]) for j in net.in_edges[v]]
    return blocks


def input_dim(net: Network, sch: Scheme, v: str) -> int:
    return sum(n for _, _, n in _input_blocks(net, sch.edge_symbols, sch.messages, v))


def check_scheme(net: Network, sch: Scheme) -> None:
    """Raise SchemeError if dimensions or symbol counts are inconsistent."""
    demands = sch.demand_list(net)
    if len(sch.messages) != net.k or len(sch.decoders) != len(demands):
        raise SchemeError("session count mismatch")
    for i, v in demands:
        if not 0 <= i < net.k or v not in net.node_index:
            raise SchemeError(f"invalid demand ({i}, {v})")
    if set(sch.edge_maps) != {e.id for e in net.edges} or set(sch.edge_symbols) != set(sch.edge_maps):
        raise SchemeError("scheme must define every edge of the network")
    gf_field(sch.q)
    for e in net.edges:
        n_out = sch.edge_symbols[e.id]
        if n_out > symbol_limit(net, sch.N, sch.messages, e.id):
            raise SchemeError(f"edge {e.id} carries {n_out} symbols, more than its capacity allows")
        _check_matrix(sch.edge_maps[e.id], n_out, input_dim(net, sch, e.tail), sch.q, f"edge {e.id}")
    for d, (i, v) in enumerate(demands):
        _check_matrix(sch.decoders[d], sch.messages[i], input_dim(net, sch, v), sch.q, f"decoder {d + 1}")


def _check_matrix(Mx, rows: int, cols: int, q: int, what: str) -> None:
    if len(Mx) != rows or any(len(r) != cols for r in Mx):
        raise SchemeError(f"{what}: expected a {rows}x{cols} matrix")
    if any(not 0 <= a < q for r in Mx for a in r):
        raise SchemeError(f"{what}: entries must lie in 0..{q - 1}")


# -- simulation --


def simulate(net: Network, sch: Scheme, messages: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    """Run the code on one message tuple and return the decoded tuple."""
    check_scheme(net, sch)
    F = gf_field(sch.q)
    if len(messages) != net.k or any(len(w) != m for w, m in zip(messages, sch.messages)):
        raise SchemeError("message lengths do not match the scheme")
    values: Dict[str, List[int]] = {}

    def inputs(v: str) -> List[int]:
        vec: List[int] = []
        for kind, key, _ in _input_blocks(net, sch.edge_symbols, sch.messages, v):
            vec += list(messages[key]) if kind == "msg" else values[key]
        return vec

    for j in net.topo_edges:
        e = net.edges[j]
        x = inputs(e.tail)
        values[e.id] = [F.dot(row, x) for row in sch.edge_maps[e.id]]
    return tuple(tuple(F.dot(row, inputs(v)) for row in sch.decoders[d]) for d, (_, v) in enumerate(sch.demand_list(net)))


# -- exhaustive verification --


@dataclass(frozen=True)
class VerifyReport:
    zero_error: bool
    error_probability: Fraction
    first_failure: Optional[Tuple[Tuple[int, ...], ...]]
    tuples: int

    def to_json(self) -> dict:
        p = self.error_probability
        return {
            "zero_error": self.zero_error,
            "error_probability": f"{p.numerator}/{p.denominator}" if p.denominator != 1 else str(p.numerator),
            "first_failure": [list(w) for w in self.first_failure] if self.first_failure else None,
            "tuples": self.tuples,
        }


def _apply(F: GF, Mx: List[List[int]], X: np.ndarray) -> np.ndarray:
    """Rows of X (one input vector per row) mapped through matrix Mx."""
    T = X.shape[0]
    out = np.zeros((T, len(Mx)), dtype=np.int64)
    if F.prime:
        if Mx and X.shape[1]:
            out = (X @ np.array(Mx, dtype=np.int64).T) % F.q
        return out
    mul = np.array(F.mul, dtype=np.int64)
    for r, row in enumerate(Mx):
        acc = np.zeros(T, dtype=np.int64)
        for c, a in enumerate(row):
            if a:
                acc ^= mul[a][X[:, c]]
        out[:, r] = acc
    return out


def verify(net: Network, sch: Scheme, cap: int = DEFAULT_VERIFY_CAP, chunk: int = 1 << 16) -> VerifyReport:
    """Simulate every message tuple and report the exact error fraction.

    Tuples are enumerated in lexicographic order of the concatenated
    message vector; ``first_failure`` is the first wrong one.
    """
    check_scheme(net, sch)
    F = gf_field(sch.q)
    M = sum(sch.messages)
    total = sch.q**M
    if total > cap:
        raise MessageSpaceTooLarge(f"{total} message tuples exceeds the cap of {cap}")
    offsets = np.cumsum([0] + list(sch.messages))
    wrong = 0
    first = None
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        W = np.zeros((len(idx), M), dtype=np.int64)
        rem = idx.copy()
        for c in range(M - 1, -1, -1):
            W[:, c] = rem % sch.q
            rem //= sch.q
        values: Dict[str, np.ndarray] = {}

        def inputs(v: str) -> np.ndarray:
            parts = []
            for kind, key, _ in _input_blocks(net, sch.edge_symbols, sch.messages, v):
                parts.append(W[:, offsets[key] : offsets[key + 1]] if kind == "msg" else values[key])
            return np.concatenate(parts, axis=1) if parts else np.zeros((len(idx), 0), dtype=np.int64)

        for j in net.topo_edges:
            e = net.edges[j]
            values[e.id] = _apply(F, sch.edge_maps[e.id], inputs(e.tail))
        bad = np.zeros(len(idx), dtype=bool)
        for d, (i, v) in enumerate(sch.demand_list(net)):
            dec = _apply(F, sch.decoders[d], inputs(v))
            bad |= np.any(dec != W[:, offsets[i] : offsets[i + 1]], axis=1)
        n_bad = int(bad.sum())
        if n_bad and first is None:
            row = W[int(np.argmax(bad))]
            first = tuple(tuple(int(a) for a in row[offsets[i] : offsets[i + 1]]) for i in range(net.k))
        wrong += n_bad
    p = Fraction(wrong, total)
    return VerifyReport(wrong == 0, p, first, total)


# -- global transfer view --


def global_maps(net: Network, sch: Scheme) -> Dict[str, List[List[int]]]:
    """Global coding vectors (over all M message symbols) of every edge symbol."""
    F = gf_field(sch.q)
    M = sum(sch.messages)
    offsets = [sum(sch.messages[:i]) for i in range(net.k)]
    glob: Dict[str, List[List[int]]] = {}

    def rows_at(v: str) -> List[List[int]]:
        rows = []
        for kind, key, n in _input_blocks(net, sch.edge_symbols, sch.messages, v):
            if kind == "msg":
                for t in range(n):
                    r = [0] * M
                    r[offsets[key] + t] = 1
                    rows.append(r)
            else:
                rows += glob[key]
        return rows

    for j in net.topo_edges:
        e = net.edges[j]
        glob[e.id] = F.matmul(sch.edge_maps[e.id], rows_at(e.tail), inner=M)
    return glob


# -- exhaustive search --


class _Searcher:
    def __init__(self, net: Network, messages: Sequence[int], q: int, N: int, budget: int, demands=None):
        self.net = net
        self.unicast = demands is None
        self.demands = list(demands) if demands is not None else [(i, s.dst) for i, s in enumerate(net.sessions)]
        self.F = gf_field(q)
        self.q = q
        self.N = N
        self.messages = tuple(messages)
        self.M = sum(messages)
        self.budget = budget
        self.nodes = 0
        self.sym = {e.id: symbol_limit(net, N, messages, e.id) for e in net.edges}
        self.offsets = [sum(messages[:i]) for i in range(net.k)]
        self.order = [net.edges[j] for j in net.topo_edges]
        self.rows: Dict[str, List[List[int]]] = {}
        self.local: Dict[str, List[List[int]]] = {}
        self.demand = []
        for i in range(net.k):
            E = []
            for t in range(messages[i]):
                r = [0] * self.M
                r[self.offsets[i] + t] = 1
                E.append(r)
            self.demand.append(E)
        self.own = {v: 0 for v in net.nodes}
        for i, s in enumerate(net.sessions):
            self.own[s.src] += messages[i]
        wanted: Dict[str, set] = {}
        for i, v in self.demands:
            wanted.setdefault(v, set()).add(i)
        self.need = {v: sum(messages[i] for i in I) for v, I in wanted.items()}
        self.wanted = {v: sorted(I) for v, I in wanted.items()}
        self.node_index = {v: n for n, v in enumerate(net.nodes)}

    def _unit(self, pos: int) -> List[int]:
        r = [0] * self.M
        r[pos] = 1
        return r

    def inputs(self, v: str, rows: Dict[str, List[List[int]]]) -> List[List[int]]:
        out = []
        for kind, key, n in _input_blocks(self.net, self.sym, self.messages, v):
            if kind == "msg":
                out += [self._unit(self.offsets[key] + t) for t in range(n)]
            else:
                out += rows[key]
        return out

    def known_at(self, v: str) -> List[List[int]]:
        """Own messages and decided in-edges at v."""
        out = []
        for kind, key, n in _input_blocks(self.net, self.sym, self.messages, v):
            if kind == "msg":
                out += [self._unit(self.offsets[key] + t) for t in range(n)]
            elif key in self.rows:
                out += self.rows[key]
        return out

    def optimistic_ok(self, pos: int) -> bool:
        """Can every sink still decode?

        Three ceilings, all sound. Undecided edges forwarding everything
        their tail knows must put each demand in the sink's span. The
        dimension reaching a node cannot exceed the joint rank of its own
        messages and decided in-edges plus, per undecided in-edge, the
        smaller of the edge's symbol count and the dimension at its tail;
        at a sink, that allowance must also cover the part of the demand
        missing from what the sink already knows. And the messages a node decodes cannot exceed any cut between their
        sources and the node, weighing decided edges by rank and undecided
        edges by symbol count, both restricted to the demanded coordinates.
        """
        rows = dict(self.rows)
        F = self.F
        for e in self.order[pos:]:
            basis, _ = F.rref(self.inputs(e.tail, rows))
            rows[e.id] = basis
        for i, v in self.demands:
            if self.messages[i] and not F.in_span(self.inputs(v, rows), self.demand[i]):
                return False
        decided = {e.id for e in self.order[:pos]}
        ub: Dict[str, int] = {}
        for v in self.net.topo_order:
            known = [self._unit(self.offsets[i] + t) for i, s in enumerate(self.net.sessions) if s.src == v for t in range(self.messages[i])]
            total = 0
            for j in self.net.in_edges[v]:
                e = self.net.edges[j]
                if e.id in decided:
                    known += rows[e.id]
                else:
                    total += min(self.sym[e.id], ub[e.tail], len(rows[e.id]))
            r = F.rank(known)
            ub[v] = total + r
            if v in self.wanted:
                E = [row for i in self.wanted[v] for row in self.demand[i]]
                if F.rank(known + E) - r > total:
                    return False
        return all(self._cut_ok(rows, decided, I, v) for v, I in self.wanted.items())

    def _cut_ok(self, rows: Dict[str, List[List[int]]], decided: set, I: Sequence[int], v: str) -> bool:
        """Cut-set test for the sessions in I decoded together at v.

        Edges are weighed by the rank of their rows restricted to the
        coordinates of I: whatever v decodes of I lies in the span of a
        cut's rows plus messages of other sessions from beyond the cut.
        """
        I = [i for i in I if self.messages[i] and self.net.sessions[i].src != v]
        need = sum(self.messages[i] for i in I)
        if not need:
            return True
        cols = [self.offsets[i] + t for i in I for t in range(self.messages[i])]
        idx = self.node_index
        n = len(idx)
        arcs = []
        for e in self.net.edges:
            w = self.F.rank([[r[c] for c in cols] for r in rows[e.id]])
            if e.id not in decided:
                w = min(w, self.sym[e.id])
            if w:
                arcs.append((idx[e.tail], idx[e.head], w))
        arcs += [(n, idx[self.net.sessions[i].src], need) for i in I]
        value, _, _ = _max_flow(n + 1, arcs, n, idx[v])
        return value >= need

    def run(self) -> Optional[Scheme]:
        if not self.optimistic_ok(0):
            return None
        return self._dfs(0)

    def _dfs(self, pos: int) -> Optional[Scheme]:
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchBudgetExceeded(f"search budget of {self.budget} nodes exhausted")
        if pos == len(self.order):
            return self._finish()
        F = self.F
        e = self.order[pos]
        G_in = self.inputs(e.tail, self.rows)
        idx = self._fresh_first(G_in, F.independent_rows(G_in))
        c = self.sym[e.id]
        width = len(G_in)
        if len(idx) <= c:
            choices = [[[1 if k == j else 0 for k in range(len(idx))] for j in range(len(idx))]]
        else:
            choices = subspaces(F, len(idx), c)
        basis = [G_in[j] for j in idx]
        # only the span reached at the head matters downstream: skip
        # candidates repeating a span already tried, or overlapping what the
        # head knows while a larger span is available
        H = self.known_at(e.head)
        r_H = F.rank(H)
        target = min(r_H + min(c, len(idx)), F.rank(H + basis))
        seen = set()
        for coeffs in choices:
            glob = F.matmul(coeffs, basis, inner=self.M)
            span, _ = F.rref(H + glob)
            key = tuple(map(tuple, span))
            if len(span) < target or key in seen:
                continue
            seen.add(key)
            local = []
            for a in coeffs:
                row = [0] * width
                for k, j in enumerate(idx):
                    row[j] = a[k]
                local.append(row)
            pad = c - len(coeffs)
            self.rows[e.id] = glob + [[0] * self.M for _ in range(pad)]
            self.local[e.id] = local + [[0] * width for _ in range(pad)]
            if self.optimistic_ok(pos + 1):
                found = self._dfs(pos + 1)
                if found is not None:
                    return found
        del self.rows[e.id]
        del self.local[e.id]
        return None

    def _fresh_first(self, G_in: List[List[int]], idx: List[int]) -> List[int]:
        """Reorder a basis so rows outside everything already sent lead.

        Any order spans the same space, so enumeration stays complete; this
        one makes the first candidates the ones carrying new information.
        """
        sent = [r for rows in self.rows.values() for r in rows]
        fresh: List[int] = []
        for j in idx:
            if not self.F.in_span(sent + [G_in[k] for k in fresh], [G_in[j]]):
                fresh.append(j)
        return fresh + [j for j in idx if j not in fresh]

    def _finish(self) -> Optional[Scheme]:
        decoders = []
        for i, v in self.demands:
            T = self.inputs(v, self.rows)
            if self.messages[i] == 0:
                decoders.append([])
                continue
            D = self.F.solve_left(T, self.demand[i])
            if D is None:
                return None
            decoders.append(D)
        edges = [e.id for e in self.net.edges]
        return Scheme(
            self.q,
            self.N,
            self.messages,
            {e: self.sym[e] for e in edges},
            {e: [list(r) for r in self.local[e]] for e in edges},
            decoders,
            None if self.unicast else list(self.demands),
        )


def message_counts(rates: Sequence, N: int) -> Tuple[int, ...]:
    out = []
    for r in rates:
        m = Fraction(r) * N
        if m.denominator != 1 or m < 0:
            raise SchemeError(f"rate {r} times block length {N} is not a nonnegative integer")
        out.append(int(m))
    return tuple(out)


def search_linear(
    net: Network,
    rates: Sequence,
    q: int = 2,
    N: int = 1,
    budget: int = 2_000_000,
    demands: Optional[Sequence[Tuple[int, str]]] = None,
) -> Optional[Scheme]:
    """First zero-error linear scheme achieving exactly ``rates``, or None.

    The search assigns edges in topological order. It enumerates the row
    space of each edge's global coding matrix inside the span available at
    its tail, rather than raw local coefficients. When the span fits in the
    edge it is forwarded whole. Otherwise every subspace of dimension equal
    to the edge's symbol count is tried in canonical order. Larger spaces
    never hurt any downstream decoder, so this is complete; for the same
    reason a candidate is skipped when it repeats, or is contained in, the
    span another candidate brings to the edge's head. A branch is cut when
    some destination could not decode even under optimistic ceilings on
    the undecided edges. Raises SearchBudgetExceeded rather
    than returning None when the node budget runs out. ``demands``
    overrides the default of session i decoded at t_i, e.g. for multicast.
    """
    if len(rates) != net.k:
        raise SchemeError("one rate per session is required")
    if N < 1:
        raise SchemeError("block length must be positive")
    for e in net.edges:
        if not is_inf(e.cap) and (Fraction(e.cap) * N).denominator != 1:
            raise SchemeError(f"capacity of {e.id} times block length is not an integer")
    messages = message_counts(rates, N)
    found = _Searcher(net, messages, q, N, budget, demands).run()
    if found is not None:
        report = verify(net, found, cap=max(DEFAULT_VERIFY_CAP, found.q ** sum(messages)))
        if not report.zero_error:
            raise AssertionError("search produced a scheme that fails verification")
    return found


def empty_scheme(net: Network, q: int = 2, N: int = 1) -> Scheme:
    """All-zero scheme at rate zero for every session."""
    messages = tuple(0 for _ in net.sessions)
    sym = {e.id: symbol_limit(net, N, messages, e.id) for e in net.edges}
    sch = Scheme(q, N, messages, sym, {}, [[] for _ in net.sessions])
    for e in net.edges:
        width = sum(n for _, _, n in _input_blocks(net, sym, messages, e.tail))
        sch.edge_maps[e.id] = [[0] * width for _ in range(sym[e.id])]
    return sch


def random_scheme(net: Network, messages: Sequence[int], q: int, N: int, rng) -> Scheme:
    """Uniformly random edge maps and decoders (used for property tests)."""
    sym = {e.id: symbol_limit(net, N, messages, e.id) for e in net.edges}
    maps = {}
    for e in net.edges:
        width = sum(n for _, _, n in _input_blocks(net, sym, messages, e.tail))
        maps[e.id] = [[rng.randrange(q) for _ in range(width)] for _ in range(sym[e.id])]
    decoders = []
    for i, s in enumerate(net.sessions):
        width = sum(n for _, _, n in _input_blocks(net, sym, messages, s.dst))
        decoders.append([[rng.randrange(q) for _ in range(width)] for _ in range(messages[i])])
    return Scheme(q, N, tuple(messages), sym, maps, decoders)
