from fractions import Fraction

import pytest

from twounicast import corpus
from twounicast.coding import search_linear
from twounicast.edgecut_bounds import min_gns_cut
from twounicast.flows import cut_value
from twounicast.netgraph import emit_network, parse_network

# name -> (sessions, edges, min GNS cut over all sessions, per-session cut values)
EXPECTED = {
    "block3": (3, 3, 3, (1, 1, 1)),
    "block3-broken": (3, 2, 2, (1, 1, 0)),
    "butterfly": (2, 7, 2, (1, 1)),
    "crossfire": (2, 11, 3, (1, 2)),
    "extension": (2, 32, 5, (2, 3)),
    "extension-broken": (2, 31, 4, (2, 2)),
    "grail": (2, 9, 2, (1, 2)),
    "grail-preset": (2, 9, 2, (1, 2)),
    "np-edge": (2, 5, 1, None),
    "np-path": (2, 10, 2, None),
    "np-triangle": (2, 15, 3, None),
}


def test_every_entry_is_covered():
    assert sorted(EXPECTED) == corpus.names()


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_entry(name):
    k, m, gns, cuts = EXPECTED[name]
    net = corpus.load(name)
    assert parse_network(emit_network(net)) == net
    assert net.k == k and len(net.edges) == m
    assert min_gns_cut(net)[0] == gns
    if cuts is not None:
        assert tuple(cut_value(net, [s.src], [s.dst]) for s in net.sessions) == cuts


def test_grail_preset_capacities():
    net = corpus.grail_preset()
    assert {e.id for e in net.edges if e.cap == 1} == {"e2", "e7"}
    assert all(e.cap == 2 for e in net.edges if e.id not in ("e2", "e7"))


def test_crossfire_rates():
    net = corpus.crossfire()
    assert search_linear(net, (1, 1)) is not None
    assert search_linear(net, (1, 2)) is None


def test_unknown_name():
    with pytest.raises(KeyError):
        corpus.load("nope")
    with pytest.raises(KeyError):
        corpus.np_demo("nope")


def test_block_missing_session_has_no_edge():
    net = corpus.disjoint_block(3, missing=(2,))
    assert [e.id for e in net.edges] == ["d1", "d2"]
    assert Fraction(cut_value(net, ["a3"], ["b3"])) == 0
