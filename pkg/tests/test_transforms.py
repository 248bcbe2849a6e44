import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twounicast import corpus
from twounicast.coding import search_linear
from twounicast.edgecut_bounds import min_gns_cut
from twounicast.flows import cut_value
from twounicast.netgraph import INF, CycleError, emit_network, make_network, parse_network
from twounicast.transforms import (
    PartitionTerm,
    TransformError,
    build_theorem5_extension,
    coarsest_common_partition,
    fusion_gadget,
    monotonicity_gadget,
    multiterminal_cut,
    np_gadget,
    supersource_transform,
)

T = PartitionTerm


def one_edge(cap=1):
    return make_network(["a", "b"], [("p", "a", "b", cap)], [("a", "b")])


def two_edges():
    return make_network(["a", "b"], [("p", "a", "b", 1), ("q", "a", "b", 1)], [("a", "b")])


# -- coarsest common partition --


def test_partition_examples():
    assert coarsest_common_partition((2, 1), (1, 2)) == [T(1, 1, 1), T(1, 1, 2), T(1, 2, 2)]
    assert coarsest_common_partition((0, 3), (3,)) == [T(3, 2, 1)]
    assert coarsest_common_partition((), ()) == []
    assert T(2, 1, 3).to_json() == {"c": 2, "i": 1, "j": 3}
    with pytest.raises(TransformError):
        coarsest_common_partition((1, 2), (2,))
    with pytest.raises(TransformError):
        coarsest_common_partition((-1, 2), (1,))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=1, max_size=5), st.lists(st.integers(0, 5), min_size=1, max_size=5))
def test_partition_properties(R, r):
    total = sum(R)
    if sum(r) < total:
        r = r + [total - sum(r)]
    elif sum(r) > total:
        R = R + [sum(r) - total]
    terms = coarsest_common_partition(R, r)
    # pieces refine both sequences, in order, with at most len(R)+len(r)-1 terms
    assert all(t.c > 0 for t in terms)
    assert len(terms) <= max(1, len([x for x in R if x]) + len([x for x in r if x]) - 1)
    for seq, key in ((R, "i"), (r, "j")):
        for n, x in enumerate(seq):
            assert sum(t.c for t in terms if getattr(t, key) == n + 1) == x
        idx = [getattr(t, key) for t in terms]
        assert idx == sorted(idx)


# -- the extension --


def test_extension_structure():
    block = corpus.disjoint_block(3)
    net, meta = build_theorem5_extension(block, (1, 1, 1), (2,))
    # 3 block edges, 3 side-session edges and 13 per butterfly term
    assert len(meta.terms) == 2 and len(net.edges) == 3 + 3 + 2 * 13 == 32
    assert meta.target == (2, 3) and net.k == 2
    assert (net.sessions[0].src, net.sessions[0].dst) == (meta.s, meta.t)
    assert meta.block(net) == block
    doc = json.loads(json.dumps(meta.to_json()))
    assert doc["target"] == [2, 3] and doc["terms"] == [{"c": 1, "i": 1, "j": 1}, {"c": 1, "i": 2, "j": 1}]
    assert parse_network(emit_network(net)) == net


def test_extension_errors():
    block = corpus.disjoint_block(3)
    with pytest.raises(TransformError):
        build_theorem5_extension(block, (1, 1), (2,))
    with pytest.raises(TransformError):
        build_theorem5_extension(block, (1, 1, 1), (3,))
    with pytest.raises(TransformError):
        build_theorem5_extension(block, (1, 1, 1), ())
    with pytest.raises(TransformError):
        build_theorem5_extension(block, (1, 1, 1), (1, 1, 0))
    clash = make_network(["ext:s", "b"], [("p", "ext:s", "b", 1)], [("ext:s", "b"), ("ext:s", "b")])
    with pytest.raises(TransformError, match="already"):
        build_theorem5_extension(clash, (1, 1), (1,))


def test_degenerate_extension():
    block = corpus.disjoint_block(3)
    net, meta = build_theorem5_extension(block, (0, 0, 1), (0,))
    assert meta.terms == () and meta.target == (0, 1)
    assert min_gns_cut(net)[0] == 1


def test_extension_gns_cut_tracks_the_block():
    good = corpus.extension_demo()
    broken = corpus.extension_broken_demo()
    assert search_linear(good, (2, 3)) is not None
    assert min_gns_cut(good)[0] >= 5
    assert min_gns_cut(broken)[0] < 5


# -- fusion and monotonicity --


def test_fusion_iff():
    # a single-session block achieves rate 2 exactly when its fused version achieves (1, 1)
    for block, ok in ((two_edges(), True), (one_edge(), False)):
        fused = fusion_gadget(block, (1, 1))
        assert fused.k == 2
        assert (search_linear(block, (2,)) is not None) == ok
        assert (search_linear(fused, (1, 1)) is not None) == ok


def test_fusion_keeps_other_sessions():
    block = corpus.disjoint_block(3)
    fused = fusion_gadget(block, (1, 0), session=1)
    assert [(s.src, s.dst) for s in fused.sessions] == [
        ("a1", "b1"),
        ("fuse:s_a", "fuse:t_a"),
        ("fuse:s_b", "fuse:t_b"),
        ("a3", "b3"),
    ]
    # zero-capacity feeders are omitted
    assert not any("s_b" in e.id for e in fused.edges)
    with pytest.raises(TransformError):
        fusion_gadget(block, (1, 1), session=3)
    with pytest.raises(TransformError):
        fusion_gadget(block, (1, 1, 1))


def test_monotonicity_gadget():
    g = monotonicity_gadget(one_edge(), (0,))
    assert [e.id for e in g.edges] == ["p", "mono:s1>a", "b>mono:t1"]
    assert g.cap("mono:s1>a") == INF and cut_value(g, ["mono:s1"], ["mono:t1"]) == 1
    # R = 0 cuts the block off; only the bypass remains
    g = monotonicity_gadget(one_edge(), (1,), (0,))
    assert [e.id for e in g.edges] == ["p", "mono:s1>mono:t1"]
    empty = make_network(["a", "b"], [], [("a", "b")])
    g = monotonicity_gadget(empty, (2,), (1,))
    assert cut_value(g, ["mono:s1"], ["mono:t1"]) == 2
    with pytest.raises(TransformError):
        monotonicity_gadget(one_edge(), (1, 1))


def test_monotonicity_adds_the_bypass():
    block = two_edges()
    g = monotonicity_gadget(block, (1,))
    assert search_linear(g, (3,)) is not None and search_linear(g, (4,)) is None


# -- super source --


def test_supersource():
    bf = corpus.butterfly()
    sup = supersource_transform(bf, (1, 0))
    assert [(s.src, s.dst) for s in sup.sessions] == [("super", "t1"), ("super", "t2")]
    assert sup.edges[-1].id == "super>s1" and len(sup.edges) == 8
    both = supersource_transform(bf, (1, 1))
    assert cut_value(both, ["super"], ["t1"]) == 2 == cut_value(both, ["super"], ["t2"])
    with pytest.raises(TransformError):
        supersource_transform(bf, (1, 1), name="u")
    with pytest.raises(TransformError):
        supersource_transform(corpus.disjoint_block(3), (1, 1))


# -- multiterminal cut gadget --


@pytest.mark.parametrize("name,value", [("triangle", 3), ("edge", 1), ("path", 2)])
def test_np_demos(name, value):
    H = corpus.NP_DEMOS[name]
    assert multiterminal_cut(H, "xyz") == value
    net = corpus.np_demo(name)
    assert net.allow_cycles and [(s.src, s.dst) for s in net.sessions] == [("x", "z"), ("z", "y")]
    assert min_gns_cut(net)[0] == value


def test_np_gadget_shape():
    net = np_gadget([("e", "x", "y")], "x", "y", "z", nodes=["z"])
    assert len(net.edges) == 5 and net.cap("gadget:e:center") == 1 and net.cap("gadget:e:x>w") == 2
    assert parse_network(emit_network(net)) == net


def test_np_gadget_errors():
    with pytest.raises(TransformError, match="not a vertex"):
        np_gadget([("x", "y")], "x", "y", "z")
    with pytest.raises(TransformError, match="distinct"):
        np_gadget([("x", "y")], "x", "y", "x")
    with pytest.raises(TransformError, match="self-loop"):
        np_gadget([("x", "x")], "x", "y", "z", nodes="yz")
    with pytest.raises(TransformError, match="duplicate"):
        np_gadget([("a", "x", "y"), ("a", "y", "z")], "x", "y", "z")
    with pytest.raises(TransformError):
        np_gadget([("x",)], "x", "y", "z")


def test_coding_refuses_cyclic_gadget():
    with pytest.raises(CycleError):
        search_linear(corpus.np_demo("edge"), (1, 0))


def test_multiterminal_cut_random_against_gns():
    rng = random.Random(17)
    verts = ["x", "y", "z", "a", "b"]
    for _ in range(10):
        H = []
        for _ in range(rng.randint(1, 5)):
            u, v = rng.sample(verts, 2)
            H.append((u, v))
        net = np_gadget(H, "x", "y", "z", nodes=verts)
        assert min_gns_cut(net)[0] == multiterminal_cut(H, "xyz")
