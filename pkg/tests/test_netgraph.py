import json
import random
from fractions import Fraction

import pytest
from helpers import random_dag
from hypothesis import given, settings
from hypothesis import strategies as st

from twounicast import corpus
from twounicast.flows import cut_value
from twounicast.netgraph import (
    INF,
    CycleError,
    NetworkError,
    edge_indices,
    emit_network,
    expand_unit_edges,
    ext_sum,
    format_ext,
    make_network,
    parse_network,
    reachable,
    remove_edges,
    to_ext,
)


def doc(edges, sessions=(), nodes=None):
    nodes = nodes or sorted({v for _, a, b, _ in edges for v in (a, b)} | {v for s in sessions for v in s})
    return json.dumps(
        {
            "nodes": nodes,
            "edges": [{"id": i, "tail": a, "head": b, "cap": c} for i, a, b, c in edges],
            "sessions": [{"src": a, "dst": b} for a, b in sessions],
        }
    )


# -- ExtRational --


def test_ext_values():
    assert to_ext("3/2") == Fraction(3, 2)
    assert to_ext("0.25") == Fraction(1, 4)
    assert to_ext("inf") == INF
    assert to_ext(2) == 2
    assert format_ext(Fraction(3, 2)) == "3/2"
    assert format_ext(INF) == "inf"
    assert ext_sum([Fraction(1), INF]) == INF
    assert INF > Fraction(10**30)


@pytest.mark.parametrize("bad", ["-1", "abc", "1/0", 0.5, True])
def test_ext_rejects(bad):
    with pytest.raises(NetworkError):
        to_ext(bad)


# -- parsing --


def test_parse_butterfly_file():
    net = parse_network(emit_network(corpus.butterfly()))
    assert len(net.edges) == 7 and net.k == 2


def test_parse_rejects_two_cycle():
    with pytest.raises(CycleError) as err:
        parse_network(doc([("e1", "a", "b", "1"), ("e2", "b", "a", "1")]))
    assert err.value.node in ("a", "b")


def test_parse_empty_sessions():
    net = parse_network(doc([("e1", "a", "b", "1")]))
    assert net.k == 0


def test_parse_syntax_error_reports_position():
    with pytest.raises(NetworkError, match="line 1 column"):
        parse_network('{"nodes": [')


def test_parse_unknown_node():
    with pytest.raises(NetworkError, match="unknown node"):
        parse_network(doc([("e1", "a", "zz", "1")], nodes=["a"]))


def test_parse_parallel_edges_and_shared_terminals():
    net = parse_network(doc([("e1", "a", "b", "1"), ("e2", "a", "b", "inf")], [("a", "b"), ("a", "b")]))
    assert net.capacity(["e1", "e2"]) == INF and net.k == 2


def test_round_trip_is_byte_exact():
    for name in corpus.names():
        text = emit_network(corpus.load(name))
        assert emit_network(parse_network(text)) == text


def test_cyclic_network_needs_opt_in():
    edges = [("e1", "a", "b", 1), ("e2", "b", "a", 1)]
    with pytest.raises(CycleError):
        make_network(["a", "b"], edges)
    net = make_network(["a", "b"], edges, allow_cycles=True)
    assert parse_network(emit_network(net)) == net
    assert reachable(net, ["a"]) == {"a", "b"}


# -- reachability and surgery --


def test_reachable_basics():
    net = make_network(["a", "b", "c"], [("e1", "a", "b", 1)])
    assert reachable(net, ["c"]) == {"c"}
    assert reachable(net, []) == frozenset()
    with pytest.raises(NetworkError):
        reachable(net, ["nope"])


def test_reachable_butterfly_matches_bfs():
    net = corpus.butterfly()
    assert reachable(net, ["s1"]) == {"s1", "u", "v", "t1", "t2"}


def test_remove_edges():
    grail = corpus.grail()
    assert remove_edges(grail, []) == grail
    bare = remove_edges(grail, [e.id for e in grail.edges])
    assert all(reachable(bare, [v]) == {v} for v in grail.nodes)
    cut = remove_edges(grail, ["e2", "e7"])
    assert "t1" not in reachable(cut, ["s1"]) and cut.sessions == grail.sessions
    with pytest.raises(NetworkError):
        remove_edges(grail, ["e99"])


def test_expand_unit_edges():
    net = make_network(["a", "b"], [("e1", "a", "b", 3), ("e2", "a", "b", 0), ("e3", "a", "b", INF)])
    ex, origin = expand_unit_edges(net)
    assert [e.id for e in ex.edges] == ["e1#1", "e1#2", "e1#3", "e3"]
    assert origin["e1#2"] == "e1" and ex.cap("e3") == INF
    assert len(expand_unit_edges(corpus.grail_preset())[0].edges) == 16
    with pytest.raises(NetworkError):
        expand_unit_edges(make_network(["a", "b"], [("e1", "a", "b", "3/2")]))


def test_expand_only_some_edges():
    ex, origin = expand_unit_edges(corpus.grail_preset(), only=["e1"])
    assert len(ex.edges) == 10 and origin["e1#2"] == "e1" and ex.cap("e4") == 2


# -- properties --


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_remove_edges_composes(seed):
    rng = random.Random(seed)
    net = random_dag(rng)
    ids = [e.id for e in net.edges]
    rng.shuffle(ids)
    cut = rng.randint(0, len(ids))
    S1, S2 = ids[:cut], ids[cut : cut + rng.randint(0, len(ids) - cut)]
    assert remove_edges(remove_edges(net, S1), S2) == remove_edges(net, S1 + S2)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_reachable_is_monotone(seed):
    rng = random.Random(seed)
    net = random_dag(rng)
    S = [e.id for e in net.edges if rng.random() < 0.4]
    for v in net.nodes:
        assert reachable(net, [v], edge_indices(net, S)) <= reachable(net, [v])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_expand_preserves_mincuts(seed):
    rng = random.Random(seed)
    net = random_dag(rng, n_edges=(3, 8), caps=(0, 1, 2, 3, INF))
    ex, _ = expand_unit_edges(net)
    a, b = rng.sample(list(net.nodes), 2)
    assert cut_value(ex, [a], [b]) == cut_value(net, [a], [b])
