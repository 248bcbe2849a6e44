import json
import random
from fractions import Fraction

import pytest
from helpers import gns_cut_instance, random_dag, st_dag

from twounicast import corpus
from twounicast.achievability import (
    corner_point,
    gns_corner_scheme,
    reduction_forward_scheme,
    two_multicast_scheme,
)
from twounicast.coding import SchemeError, empty_scheme, search_linear, verify
from twounicast.netgraph import NetworkError, make_network
from twounicast.rate_regions import corners_2d, downward_hull_2d, gns_region, region_equal, two_multicast_region
from twounicast.transforms import build_theorem5_extension


# -- GNS corners --


def test_corner_point():
    assert corner_point((1, 2), 2, 1) == (1, 1)
    assert corner_point((1, 2), 2, 2) == (0, 2)
    assert corner_point((2, 2), 3, 1) == (2, 1)
    with pytest.raises(ValueError):
        corner_point((1, 1), 1, 3)


def test_case_one_toy():
    # two parallel unicasts: cutting both edges disconnects all four pairs
    net = make_network(
        ["s1", "s2", "t1", "t2"], [("e1", "s1", "t1", 1), ("e2", "s2", "t2", 1)], [("s1", "t1"), ("s2", "t2")]
    )
    cs = gns_corner_scheme(net, ["e1", "e2"], corner=1)
    assert cs.case == "I" and cs.rates == (1, 1) and cs.method == "construction"
    assert verify(cs.network, cs.scheme).zero_error


def test_grail_corners():
    net = corpus.grail_preset()
    got = {}
    for corner in (1, 2):
        cs = gns_corner_scheme(net, ["e2", "e7"], corner=corner)
        assert cs.case == "II" and cs.method == "construction" and cs.cut == ("e2", "e7")
        assert verify(cs.network, cs.scheme).zero_error
        got[corner] = cs.rates
    assert got == {1: (1, 1), 2: (0, 2)}
    assert region_equal(downward_hull_2d(got.values()), gns_region(net))


def test_corner_scheme_json():
    cs = gns_corner_scheme(corpus.grail_preset(), ["e2", "e7"], corner=2)
    doc = json.loads(json.dumps(cs.to_json()))
    assert doc["rates"] == [0, 2] and doc["case"] == "II" and doc["method"] == "construction"
    assert doc["scheme"]["field"] == 2 and doc["trace"]


def test_construction_alone_reaches_random_corners():
    rng = random.Random(21)
    for _ in range(15):
        net, S = gns_cut_instance(rng)
        rates = []
        for corner in (1, 2):
            cs = gns_corner_scheme(net, S, corner=corner, fallback=False)
            assert cs.method == "construction" and verify(cs.network, cs.scheme).zero_error
            rates.append(cs.rates)
        assert region_equal(downward_hull_2d(rates), gns_region(net))


def test_corner_preconditions():
    grail = corpus.grail_preset()
    with pytest.raises(NetworkError, match="minimal"):
        gns_corner_scheme(grail, ["e2", "e7", "e1"])
    # minimal, but the unit edges outside it fall below C(S) = 2
    with pytest.raises(NetworkError, match="below"):
        gns_corner_scheme(corpus.butterfly(), ["e3", "e6"])
    low = make_network(
        ["s1", "s2", "m", "t1", "t2"],
        [("e1", "s1", "m", 1), ("e2", "m", "t1", 2), ("e3", "s2", "t2", 2)],
        [("s1", "t1"), ("s2", "t2")],
    )
    with pytest.raises(NetworkError, match="below"):
        gns_corner_scheme(low, ["e2", "e3"])
    frac = make_network(
        ["s1", "s2", "t1", "t2"], [("e1", "s1", "t1", "1/2"), ("e2", "s2", "t2", 1)], [("s1", "t1"), ("s2", "t2")]
    )
    with pytest.raises(NetworkError, match="integer"):
        gns_corner_scheme(frac, ["e1", "e2"])
    with pytest.raises(NetworkError):
        gns_corner_scheme(corpus.disjoint_block(3), ["d1"])


# -- two-multicast --


def test_two_multicast_butterfly():
    bf = corpus.butterfly()
    sch = two_multicast_scheme(bf, (1, 1))
    assert sch.q == 2 and sch.demands == [(0, "t1"), (1, "t1"), (0, "t2"), (1, "t2")]
    assert verify(bf, sch).zero_error
    assert two_multicast_scheme(bf, (0, 0)).messages == (0, 0)
    with pytest.raises(SchemeError, match="outside"):
        two_multicast_scheme(bf, (2, 0))
    with pytest.raises(SchemeError):
        two_multicast_scheme(bf, (1, -1))


def test_two_multicast_fractional_rates():
    net = make_network(["s1", "s2", "t1", "t2"], [("e1", "s1", "t1", 1)], [("s1", "t1"), ("s2", "t2")])
    assert two_multicast_region(net).bound_for((0, 1)) == 0
    bf = corpus.butterfly()
    sch = two_multicast_scheme(bf, (Fraction(1, 2), 1))
    assert sch.rates == (Fraction(1, 2), 1) and sch.N == 2 and verify(bf, sch).zero_error


def test_two_multicast_random_corners():
    rng = random.Random(31)
    for _ in range(10):
        net = st_dag(rng)
        for c in corners_2d(two_multicast_region(net)):
            sch = two_multicast_scheme(net, c)
            assert sch.rates == tuple(c) and verify(net, sch).zero_error


# -- forward direction of the extension --


def test_reduction_forward_on_block():
    block = corpus.disjoint_block(3)
    ext = build_theorem5_extension(block, (1, 1, 1), (2,))
    sch = reduction_forward_scheme(ext, search_linear(block, (1, 1, 1)))
    assert sch.rates == (2, 3) and verify(ext[0], sch).zero_error


def test_reduction_forward_zero_rates():
    block = corpus.disjoint_block(3)
    ext = build_theorem5_extension(block, (0, 0, 0), (0,))
    sch = reduction_forward_scheme(ext, empty_scheme(block))
    assert sch.rates == (0, 0) and verify(ext[0], sch).zero_error


def test_reduction_forward_rate_mismatch():
    block = corpus.disjoint_block(3)
    ext = build_theorem5_extension(block, (1, 1, 1), (2,))
    with pytest.raises(SchemeError):
        reduction_forward_scheme(ext, empty_scheme(block))


def test_reduction_forward_random_blocks():
    rng = random.Random(41)
    done = 0
    while done < 8:
        block = random_dag(rng, n_nodes=(4, 6), n_edges=(4, 8), caps=(1, 2), k=3)
        R = (rng.randint(0, 1), rng.randint(0, 1), rng.randint(0, 1))
        r = (R[0] + R[1],)
        sch = search_linear(block, R)
        if sch is None:
            continue
        ext = build_theorem5_extension(block, R, r)
        fwd = reduction_forward_scheme(ext, sch)
        assert fwd.rates == ext[1].target and verify(ext[0], fwd).zero_error
        done += 1


def test_reduction_with_two_side_sessions():
    block = corpus.disjoint_block(4)
    block = block.with_capacities({e.id: 2 for e in block.edges})
    ext = build_theorem5_extension(block, (1, 2, 1, 1), (2, 1))
    assert ext[1].k == 2 and ext[1].m == 2 and ext[1].target == (3, 3, 2)
    sch = reduction_forward_scheme(ext, search_linear(block, (1, 2, 1, 1)))
    assert sch.rates == (3, 3, 2) and verify(ext[0], sch).zero_error
