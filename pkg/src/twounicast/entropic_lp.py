"""Entropic LP outer bound from Shannon-type inequalities.

The random variables are one message W_i per session and one edge
symbol X_e per edge. The LP variables are joint entropies h(A) of
subsets A of that roster. Constraints are the elemental Shannon
inequalities, mutual independence of the messages, functional
dependence of each edge on its tail's inputs and of each message on its
destination's inputs, and the edge capacities.

Functional dependencies are applied exactly by closure: once h(X_e | P)
= 0 for the tail inputs P, every subset A satisfies h(A) = h(cl(A)), so
only closed subsets need LP variables. Rows that coincide after the
substitution are merged. Everything is then in the form  A h <= b  with
b >= 0, and solved with the exact simplex in :mod:`lp`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from . import lp
from .netgraph import INF, ExtRational, Network, NetworkError, format_ext, is_inf

MAX_ROSTER = 14


@dataclass
class EntropySpace:
    """Roster of random variables and the functional dependencies among them."""

    names: Tuple[str, ...]
    k: int  # messages occupy bits 0..k-1
    deps: Tuple[Tuple[int, int], ...]  # (input mask, dependent bit)
    caps: Tuple[Tuple[int, ExtRational], ...]  # (bit, capacity) for edge variables

    @property
    def n(self) -> int:
        return len(self.names)

    @cached_property
    def closure(self) -> List[int]:
        """cl(A) for every mask A, by fixed-point iteration over the dependencies."""
        size = 1 << self.n
        out = [0] * size
        deps = self.deps
        for A in range(size):
            c = A
            changed = True
            while changed:
                changed = False
                for lhs, bit in deps:
                    if not (c >> bit) & 1 and lhs & c == lhs:
                        c |= 1 << bit
                        changed = True
            out[A] = c
        return out


def entropy_space(net: Network) -> EntropySpace:
    k = net.k
    names = [f"W{i + 1}" for i in range(k)] + [f"X[{e.id}]" for e in net.edges]
    if len(names) > MAX_ROSTER:
        raise NetworkError(f"roster of {len(names)} variables exceeds the limit of {MAX_ROSTER}")

    def inputs_at(v: str) -> int:
        mask = 0
        for i, s in enumerate(net.sessions):
            if s.src == v:
                mask |= 1 << i
        for j in net.in_edges[v]:
            mask |= 1 << (k + j)
        return mask

    deps = [(inputs_at(e.tail), k + j) for j, e in enumerate(net.edges)]
    deps += [(inputs_at(s.dst), i) for i, s in enumerate(net.sessions)]
    caps = tuple((k + j, e.cap) for j, e in enumerate(net.edges))
    return EntropySpace(tuple(names), k, tuple(deps), caps)


@dataclass
class EntropicLP:
    space: EntropySpace
    var_of: Dict[int, int]  # closed mask -> LP column
    masks: List[int]  # LP column -> closed mask
    rows: List[Dict[int, int]]
    rhs: List[Fraction]
    kinds: List[str]

    def column(self, A: int) -> Optional[int]:
        return self.var_of.get(self.space.closure[A])

    def objective(self, weights: Sequence) -> Dict[int, Fraction]:
        obj: Dict[int, Fraction] = {}
        for i, w in enumerate(weights):
            w = Fraction(w)
            col = self.column(1 << i)
            if w and col is not None:
                obj[col] = obj.get(col, 0) + w
        return obj


def build_lp(net: Network) -> EntropicLP:
    space = entropy_space(net)
    n = space.n
    cl = space.closure
    empty = cl[0]
    full = (1 << n) - 1
    var_of: Dict[int, int] = {}
    masks: List[int] = []

    def col(A: int) -> Optional[int]:
        c = cl[A]
        if c == empty:
            return None
        j = var_of.get(c)
        if j is None:
            j = var_of[c] = len(masks)
            masks.append(c)
        return j

    seen = set()
    rows: List[Dict[int, int]] = []
    rhs: List[Fraction] = []
    kinds: List[str] = []

    def add(terms, bound, kind):
        row: Dict[int, int] = {}
        for A, coef in terms:
            j = col(A)
            if j is not None:
                row[j] = row.get(j, 0) + coef
        row = {j: v for j, v in row.items() if v}
        if not row:
            return
        key = (tuple(sorted(row.items())), bound)
        if key in seen:
            return
        seen.add(key)
        rows.append(row)
        rhs.append(Fraction(bound))
        kinds.append(kind)

    # elemental inequalities, written as  -(...) <= 0
    for i in range(n):
        add([(full & ~(1 << i), 1), (full, -1)], 0, "shannon")
    for i in range(n):
        for j in range(i + 1, n):
            rest = full & ~(1 << i) & ~(1 << j)
            K = rest
            while True:
                add([(K | 1 << i, -1), (K | 1 << j, -1), (K | 1 << i | 1 << j, 1), (K, 1)], 0, "shannon")
                if K == 0:
                    break
                K = (K - 1) & rest
    messages = (1 << space.k) - 1
    if space.k > 1:
        add([(1 << i, 1) for i in range(space.k)] + [(messages, -1)], 0, "independence")
    for bit, cap in space.caps:
        if not is_inf(cap):
            add([(1 << bit, 1)], cap, "capacity")
    return EntropicLP(space, var_of, masks, rows, rhs, kinds)


def _solve(model: EntropicLP, weights: Sequence) -> lp.LPResult:
    obj = model.objective(weights)
    res = lp.maximize(obj, model.rows, model.rhs, n=len(model.masks))
    return res


def lp_outer_bound(net: Network, weights: Sequence, model: Optional[EntropicLP] = None) -> ExtRational:
    """max sum_i w_i H(W_i) over the Shannon outer region; exact."""
    weights = [Fraction(w) for w in weights]
    if len(weights) != net.k:
        raise NetworkError("weight vector length must equal the session count")
    if any(w < 0 for w in weights):
        raise NetworkError("weights must be nonnegative")
    model = model or build_lp(net)
    res = _solve(model, weights)
    if res.status == "unbounded":
        return INF
    return res.value


@dataclass(frozen=True)
class Separation:
    weights: Tuple[int, ...]
    bound: ExtRational
    value: Fraction  # weights . R, strictly above bound

    def to_json(self) -> dict:
        return {"weights": list(self.weights), "bound": format_ext(self.bound), "value": format_ext(self.value)}


def lp_excludes_point(net: Network, R: Sequence, model: Optional[EntropicLP] = None) -> Optional[Separation]:
    """A weight vector w with lp_outer_bound(w) < w.R, or None if R is inside.

    Solves  max t  s.t. the entropic constraints, t*R_i <= H(W_i), t <= 1.
    If the optimum is below 1 the duals of the rate rows give w.
    """
    R = [Fraction(r) for r in R]
    if len(R) != net.k:
        raise NetworkError("rate vector length must equal the session count")
    if any(r < 0 for r in R):
        raise NetworkError("rates must be nonnegative")
    if not any(R):
        return None
    model = model or build_lp(net)
    t = len(model.masks)
    rows = list(model.rows)
    rhs = list(model.rhs)
    first = len(rows)
    for i, r in enumerate(R):
        row = {t: r}
        c = model.column(1 << i)
        if c is not None:
            row[c] = -1
        rows.append(row)
        rhs.append(Fraction(0))
    rows.append({t: 1})
    rhs.append(Fraction(1))
    res = lp.maximize({t: 1}, rows, rhs, n=t + 1)
    if res.value >= 1:
        return None
    duals = res.duals[first : first + len(R)]
    den = 1
    for y in duals:
        den = den * y.denominator // gcd(den, y.denominator)
    ints = [int(y * den) for y in duals]
    g = 0
    for v in ints:
        g = gcd(g, v)
    w = tuple(v // g for v in ints)
    bound = lp_outer_bound(net, w, model)
    value = sum((wi * ri for wi, ri in zip(w, R)), Fraction(0))
    if not bound < value:
        raise AssertionError("dual weights do not separate the point")
    return Separation(w, bound, value)


def dump_lp(net: Network, weights: Sequence) -> str:
    """The LP in CPLEX LP text format, with exact coefficients as p/q."""
    model = build_lp(net)
    names = model.space.names

    def var(j: int) -> str:
        mask = model.masks[j]
        return "h_" + "_".join(names[b].replace("[", "").replace("]", "") for b in range(len(names)) if mask >> b & 1)

    def expr(terms: Dict[int, object]) -> str:
        parts = []
        for j, c in sorted(terms.items()):
            c = Fraction(c)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            parts.append(f"{sign} {format_ext(mag)} {var(j)}" if mag != 1 else f"{sign} {var(j)}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else text

    lines = ["\\ entropic outer bound", "Maximize", " obj: " + (expr(model.objective(weights)) or "0"), "Subject To"]
    for r, (row, b, kind) in enumerate(zip(model.rows, model.rhs, model.kinds)):
        lines.append(f" {kind}{r}: {expr(row)} <= {format_ext(b)}")
    lines.append("End")
    return "\n".join(lines) + "\n"
