import json
import random
from fractions import Fraction

import pytest
from helpers import random_dag, st_dag
from hypothesis import given, settings
from hypothesis import strategies as st

from twounicast import corpus
from twounicast.coding import search_linear
from twounicast.edgecut_bounds import cutset_bound, min_gns_cut, network_sharing_bound
from twounicast.entropic_lp import lp_outer_bound
from twounicast.flows import cut_value
from twounicast.netgraph import INF, NetworkError, make_network
from twounicast.rate_regions import (
    RegionError,
    corners_2d,
    corners_tsv,
    downward_hull_2d,
    gns_region,
    gns_region_multi,
    make_region,
    region_equal,
    region_from_json,
    region_subset,
    support,
    two_multicast_region,
)

F = Fraction


def box(a, b, s=None):
    rows = [((1, 0), a), ((0, 1), b)]
    if s is not None:
        rows.append(((1, 1), s))
    return make_region(2, rows)


# -- region algebra --


def test_contains_and_boundary():
    r = box(1, 1, F(3, 2))
    assert r.contains((1, F(1, 2))) and r.contains((0, 0))
    assert not r.contains((1, 1)) and not r.contains((-1, 0))
    with pytest.raises(RegionError):
        r.contains((1, 1, 1))


def test_pruning_drops_implied_rows():
    r = box(1, 1, 5)
    assert r.bound_for((1, 1)) is None and len(r.inequalities) == 2
    kept = make_region(2, [((1, 0), 1), ((0, 1), 1), ((1, 1), 5)], prune=False)
    assert kept.bound_for((1, 1)) == 5 and region_equal(r, kept)


def test_duplicates_keep_the_tightest_bound():
    r = make_region(2, [((1, 0), 3), ((1, 0), 2), ((0, 1), INF), ((0, 0), 1)], prune=False)
    assert r.inequalities == (((F(1), F(0)), F(2)),)


def test_bad_inequalities():
    with pytest.raises(RegionError):
        make_region(2, [((1, -1), 1)])
    with pytest.raises(RegionError):
        make_region(2, [((1, 0, 0), 1)])


def test_subset_and_equality():
    assert region_subset(box(1, 1, 1), box(1, 1))
    assert not region_subset(box(1, 1), box(1, 1, 1))
    assert region_equal(box(1, 1, 2), box(1, 1))
    assert support(box(1, 2, 2), (1, 1)) == 2
    assert support(make_region(2, [((1, 0), 1)]), (0, 1)) == INF


def test_corners():
    assert corners_2d(box(1, 1, F(3, 2))) == [(0, 0), (0, 1), (F(1, 2), 1), (1, F(1, 2)), (1, 0)]
    assert corners_2d(box(0, 0)) == [(0, 0)]
    with pytest.raises(RegionError):
        corners_2d(make_region(2, [((1, 0), 1)]))
    assert corners_tsv(box(1, 2, 2)) == "R1\tR2\n0\t0\n0\t2\n1\t1\n1\t0\n"


def test_downward_hull():
    assert region_equal(downward_hull_2d([(1, 1)]), box(1, 1))
    assert region_equal(downward_hull_2d([(0, 2), (1, 1), (2, 0)]), box(2, 2, 2))
    # (1/2, 1/2) lies under the segment and adds nothing
    assert region_equal(downward_hull_2d([(0, 1), (1, 0), (F(1, 2), F(1, 2))]), box(1, 1, 1))
    assert corners_2d(downward_hull_2d([])) == [(0, 0)]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=6))
def test_downward_hull_corners_are_input_points(pts):
    hull = downward_hull_2d(pts)
    for p in pts:
        assert hull.contains(p)
    for c in corners_2d(hull)[1:]:
        # every corner other than the origin is dominated by an input point
        assert any(c[0] <= p[0] and c[1] <= p[1] for p in pts)


def test_json_round_trip():
    r = box(1, F(3, 2), 2)
    doc = json.loads(json.dumps(r.to_json()))
    assert doc[0] == {"coeffs": ["1", "1"], "bound": "2"}
    assert region_from_json(doc) == r
    with pytest.raises(RegionError):
        region_from_json([])
    assert region_from_json([], dim=2).inequalities == ()


def test_str():
    assert str(make_region(2, [((1, 1), 2), ((2, 0), 3)])) == "2*R1 <= 3\nR1 + R2 <= 2"


# -- network regions --


def test_gns_region_butterfly():
    r = gns_region(corpus.butterfly())
    assert r.inequalities == (((1, 1), 2), ((1, 0), 1), ((0, 1), 1))
    assert r.contains((1, 1))


def test_gns_region_grail():
    r = gns_region(corpus.grail_preset())
    assert r.bound_for((1, 1)) == 2
    assert corners_2d(r) == [(0, 0), (0, 2), (1, 1), (1, 0)]


def test_gns_region_needs_two_sessions():
    with pytest.raises(NetworkError):
        gns_region(corpus.disjoint_block(3))


def test_gns_region_multi():
    bf = corpus.butterfly()
    assert region_equal(gns_region_multi(bf), gns_region(bf))
    single = make_network(["s", "t"], [("e1", "s", "t", 2)], [("s", "t")])
    assert gns_region_multi(single).inequalities == (((1,), 2),)
    block = corpus.disjoint_block(3)
    assert region_equal(gns_region_multi(block), make_region(3, [((1, 0, 0), 1), ((0, 1, 0), 1), ((0, 0, 1), 1)]))
    with pytest.raises(RegionError):
        gns_region_multi(block, limit=2)


def test_gns_region_multi_is_an_outer_bound():
    # rates found by the exhaustive search never violate any subset bound
    rng = random.Random(3)
    checked = 0
    for _ in range(25):
        net = random_dag(rng, n_nodes=(4, 6), n_edges=(4, 8), caps=(1,), k=3)
        region = gns_region_multi(net)
        for R in [(1, 1, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1)]:
            if search_linear(net, R) is not None:
                assert region.contains(R)
                checked += 1
    assert checked > 0


def test_two_multicast_examples():
    bf = corpus.butterfly()
    assert region_equal(two_multicast_region(bf), box(1, 1, 2))
    bottleneck = bf.with_capacities({e.id: (1 if e.id == "e3" else INF) for e in bf.edges})
    assert region_equal(two_multicast_region(bottleneck), box(1, 1, INF))
    assert two_multicast_region(corpus.grail_preset()).contains((0, 0))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_region_hierarchy(seed):
    rng = random.Random(seed)
    net = random_dag(rng, n_nodes=(4, 7), n_edges=(4, 10), caps=(1, 2, INF), k=2)
    gns, ns, cs = gns_region(net), network_sharing_bound(net), cutset_bound(net)
    assert region_subset(gns, ns) and region_subset(ns, cs)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_two_multicast_inside_gns(seed):
    net = st_dag(random.Random(seed))
    assert region_subset(two_multicast_region(net), gns_region(net))


def test_gns_sum_bound_below_joint_cut():
    # separating both sources from both destinations is always a GNS cut
    rng = random.Random(11)
    for _ in range(30):
        net = random_dag(rng, n_nodes=(4, 7), n_edges=(4, 10), caps=(1, 2), k=2, distinct=True)
        s1, s2 = net.sessions
        value, _ = min_gns_cut(net)
        assert value <= cut_value(net, [s1.src, s2.src], [s1.dst, s2.dst])


def test_crossfire_lp_region_strictly_inside_gns():
    net = corpus.crossfire()
    gns = gns_region(net)
    lp_side = make_region(2, [((1, 0), lp_outer_bound(net, (1, 0))), ((0, 1), lp_outer_bound(net, (0, 1))), ((1, 2), lp_outer_bound(net, (1, 2)))])
    assert region_subset(lp_side, gns) and not region_subset(gns, lp_side)
