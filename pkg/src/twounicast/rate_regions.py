"""Polyhedral rate regions and the GNS / two-multicast regions.

A region is a finite list of inequalities  a.R <= b  with nonnegative
rational coefficients over the nonnegative orthant. Such a region always
contains the origin and is downward closed, so membership, inclusion and
redundancy all reduce to exact LPs with a feasible origin.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple

from . import lp
from .netgraph import INF, ExtRational, Network, NetworkError, format_ext, is_inf, to_ext

Inequality = Tuple[Tuple[Fraction, ...], ExtRational]


class RegionError(ValueError):
    pass


@dataclass(frozen=True)
class Region:
    dim: int
    inequalities: Tuple[Inequality, ...]

    def contains(self, point: Sequence) -> bool:
        return region_contains(self, point)

    def bound_for(self, coeffs: Sequence) -> Optional[ExtRational]:
        """Bound of the inequality with exactly these coefficients, if present."""
        key = tuple(Fraction(c) for c in coeffs)
        for a, b in self.inequalities:
            if a == key:
                return b
        return None

    def to_json(self) -> list:
        return [{"coeffs": [format_ext(c) for c in a], "bound": format_ext(b)} for a, b in self.inequalities]

    def __str__(self) -> str:
        lines = []
        for a, b in self.inequalities:
            terms = []
            for i, c in enumerate(a):
                if c == 0:
                    continue
                terms.append(f"R{i + 1}" if c == 1 else f"{format_ext(c)}*R{i + 1}")
            lines.append(" + ".join(terms) + " <= " + format_ext(b))
        return "\n".join(lines)


def region_from_json(doc: list, dim: Optional[int] = None) -> Region:
    ineqs = [(tuple(Fraction(c) for c in row["coeffs"]), to_ext(row["bound"])) for row in doc]
    if dim is None:
        if not ineqs:
            raise RegionError("cannot infer dimension of an empty region")
        dim = len(ineqs[0][0])
    return make_region(dim, ineqs, prune=False)


def make_region(dim: int, inequalities: Iterable[Tuple[Sequence, object]], prune: bool = True) -> Region:
    """Normalize a list of inequalities into a Region.

    Infinite bounds and all-zero rows are dropped, duplicate coefficient
    vectors keep the tightest bound, and the rows are sorted. With
    ``prune`` every row implied by the others is removed as well.
    """
    best = {}
    for coeffs, bound in inequalities:
        a = tuple(Fraction(c) for c in coeffs)
        if len(a) != dim:
            raise RegionError(f"inequality has {len(a)} coefficients, expected {dim}")
        if any(c < 0 for c in a):
            raise RegionError("coefficients must be nonnegative")
        b = to_ext(bound)
        if is_inf(b) or not any(a):
            continue
        if a not in best or b < best[a]:
            best[a] = b
    rows = sorted(best.items(), key=lambda ab: (tuple(-c for c in ab[0]), ab[1]))
    if prune:
        kept = list(rows)
        for row in rows:
            others = [r for r in kept if r is not row]
            if len(others) < len(kept) and _support(dim, others, row[0]) <= row[1]:
                kept = others
        rows = kept
    return Region(dim, tuple(rows))


def _support(dim: int, rows: Sequence[Inequality], w: Sequence[Fraction]) -> ExtRational:
    """max w.R over the region given by ``rows`` (INF when unbounded)."""
    if not any(w):
        return Fraction(0)
    res = lp.maximize(list(w), [list(a) for a, _ in rows], [b for _, b in rows], n=dim)
    if res.status == "unbounded":
        return INF
    return res.value


def support(r: Region, w: Sequence) -> ExtRational:
    w = [Fraction(x) for x in w]
    if len(w) != r.dim:
        raise RegionError("dimension mismatch")
    return _support(r.dim, r.inequalities, w)


def region_contains(r: Region, point: Sequence) -> bool:
    p = [Fraction(x) for x in point]
    if len(p) != r.dim:
        raise RegionError(f"point has dimension {len(p)}, region has {r.dim}")
    if any(x < 0 for x in p):
        return False
    return all(sum(a_i * x for a_i, x in zip(a, p)) <= b for a, b in r.inequalities)


def region_subset(a: Region, b: Region) -> bool:
    if a.dim != b.dim:
        raise RegionError("dimension mismatch")
    return all(_support(a.dim, a.inequalities, w) <= bound for w, bound in b.inequalities)


def region_equal(a: Region, b: Region) -> bool:
    return region_subset(a, b) and region_subset(b, a)


def corners_2d(r: Region) -> List[Tuple[Fraction, Fraction]]:
    """Vertices of a bounded 2-D region: the origin, then the boundary by increasing R1."""
    if r.dim != 2:
        raise RegionError("corner enumeration needs a 2-D region")
    lines = [((Fraction(1), Fraction(0)), Fraction(0)), ((Fraction(0), Fraction(1)), Fraction(0))]
    lines += [(a, b) for a, b in r.inequalities]
    pts = set()
    for (a1, b1), (a2, b2) in combinations(lines, 2):
        det = a1[0] * a2[1] - a1[1] * a2[0]
        if det == 0:
            continue
        x = (b1 * a2[1] - a1[1] * b2) / det
        y = (a1[0] * b2 - b1 * a2[0]) / det
        if region_contains(r, (x, y)):
            pts.add((x, y))
    for direction in ((1, 0), (0, 1)):
        if is_inf(support(r, direction)):
            raise RegionError("region is unbounded")
    origin = (Fraction(0), Fraction(0))
    rest = sorted((p for p in pts if p != origin), key=lambda p: (p[0], -p[1]))
    return [origin] + rest


def corners_tsv(r: Region) -> str:
    lines = ["R1\tR2"]
    lines += [f"{format_ext(x)}\t{format_ext(y)}" for x, y in corners_2d(r)]
    return "\n".join(lines) + "\n"


def downward_hull_2d(points: Iterable[Sequence]) -> Region:
    """Region of all nonnegative pairs dominated by a convex combination of ``points``."""
    pts = sorted({(Fraction(p[0]), Fraction(p[1])) for p in points})
    if not pts:
        return make_region(2, [((1, 0), 0), ((0, 1), 0)])
    xmax = max(p[0] for p in pts)
    ymax = max(p[1] for p in pts)
    # upper-right chain from (0, ymax) to (xmax, 0), a concave decreasing hull
    cand = sorted(set(pts) | {(Fraction(0), ymax), (xmax, Fraction(0))}, key=lambda p: (p[0], -p[1]))
    hull: List[Tuple[Fraction, Fraction]] = []
    for p in cand:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    ineqs = [((1, 0), xmax), ((0, 1), ymax)]
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        a, b = y1 - y2, x2 - x1
        if a > 0 and b > 0:
            ineqs.append(((a, b), a * x1 + b * y1))
    return make_region(2, ineqs)


# -- regions of a network --


def _two_unicast(net: Network) -> None:
    if net.k != 2:
        raise NetworkError(f"expected a two-unicast network, got {net.k} sessions")


def gns_region(net: Network) -> Region:
    """{R1 <= c(s1;t1), R2 <= c(s2;t2), R1+R2 <= min GNS cut}, unpruned."""
    from .edgecut_bounds import min_gns_cut
    from .flows import cut_value

    _two_unicast(net)
    s1, s2 = net.sessions
    value, _ = min_gns_cut(net, (0, 1))
    return make_region(
        2,
        [
            ((1, 0), cut_value(net, [s1.src], [s1.dst])),
            ((0, 1), cut_value(net, [s2.src], [s2.dst])),
            ((1, 1), value),
        ],
        prune=False,
    )


def gns_region_multi(net: Network, limit: int = 6, jobs: int = 1) -> Region:
    """Sum-rate GNS bound for every nonempty session subset, pruned."""
    from .edgecut_bounds import min_gns_cut

    k = net.k
    if k > limit:
        raise RegionError(f"{k} sessions exceeds the limit of {limit}")
    ineqs = []
    for size in range(1, k + 1):
        for I in combinations(range(k), size):
            value, _ = min_gns_cut(net, I, jobs=jobs)
            ineqs.append((tuple(1 if i in I else 0 for i in range(k)), value))
    return make_region(k, ineqs)


def two_multicast_region(net: Network) -> Region:
    """Capacity region when both destinations demand both messages."""
    from .flows import cut_value

    _two_unicast(net)
    (s1, t1), (s2, t2) = [(s.src, s.dst) for s in net.sessions]
    return make_region(
        2,
        [
            ((1, 0), min(cut_value(net, [s1], [t1]), cut_value(net, [s1], [t2]))),
            ((0, 1), min(cut_value(net, [s2], [t1]), cut_value(net, [s2], [t2]))),
            ((1, 1), min(cut_value(net, [s1, s2], [t1]), cut_value(net, [s1, s2], [t2]))),
        ],
        prune=False,
    )
