"""Built-in example networks."""

from __future__ import annotations

from typing import Callable, Dict, List

from .netgraph import Network, make_network


def butterfly(cap=1) -> Network:
    """Butterfly: both sources share the bottleneck u->v, each has a side
    edge to the other session's destination."""
    return make_network(
        ["s1", "s2", "u", "v", "t1", "t2"],
        [
            ("e1", "s1", "u", cap),
            ("e2", "s2", "u", cap),
            ("e3", "u", "v", cap),
            ("e4", "v", "t1", cap),
            ("e5", "v", "t2", cap),
            ("e6", "s1", "t2", cap),
            ("e7", "s2", "t1", cap),
        ],
        [("s1", "t1"), ("s2", "t2")],
    )


GRAIL_EDGES = [
    ("e1", "s1", "a"),
    ("e2", "s2", "a"),
    ("e3", "s2", "c"),
    ("e4", "a", "b"),
    ("e5", "b", "t2"),
    ("e6", "b", "c"),
    ("e7", "c", "d"),
    ("e8", "d", "t2"),
    ("e9", "d", "t1"),
]


def grail(caps=None) -> Network:
    """Grail topology; ``caps`` maps edge ids to capacities (default 1)."""
    caps = caps or {}
    return make_network(
        ["s1", "s2", "a", "b", "c", "d", "t1", "t2"],
        [(eid, u, v, caps.get(eid, 1)) for eid, u, v in GRAIL_EDGES],
        [("s1", "t1"), ("s2", "t2")],
    )


def grail_preset() -> Network:
    """Grail with e2, e7 at capacity 1 and every other edge at 2."""
    return grail({eid: (1 if eid in ("e2", "e7") else 2) for eid, _, _ in GRAIL_EDGES})


def crossfire() -> Network:
    """Unit-capacity two-unicast network whose GNS region is loose.

    u mixes both sources; v and p each feed both destinations. The
    Shannon LP gives R1 + 2 R2 <= 4 and a corner at (1, 3/2), while every
    GNS cut has value at least 3.
    """
    return make_network(
        ["s1", "s2", "p", "u", "v", "w", "t1", "t2"],
        [
            ("e1", "s2", "p", 1),
            ("e2", "s2", "u", 1),
            ("e3", "u", "v", 1),
            ("e4", "v", "t1", 1),
            ("e5", "w", "t2", 1),
            ("e6", "u", "w", 1),
            ("e7", "p", "w", 1),
            ("e8", "p", "t1", 1),
            ("e9", "s1", "u", 1),
            ("e10", "s1", "t2", 1),
            ("e11", "v", "t2", 1),
        ],
        [("s1", "t1"), ("s2", "t2")],
    )


def disjoint_block(k: int = 3, missing=()) -> Network:
    """k sessions, each a single unit edge a_i -> b_i; sessions listed in
    ``missing`` (0-based) get no edge at all."""
    nodes = [v for i in range(k) for v in (f"a{i + 1}", f"b{i + 1}")]
    edges = [(f"d{i + 1}", f"a{i + 1}", f"b{i + 1}", 1) for i in range(k) if i not in missing]
    return make_network(nodes, edges, [(f"a{i + 1}", f"b{i + 1}") for i in range(k)])


def extension_demo() -> Network:
    """Two-unicast extension of the three-edge block with R = (1,1,1), r = (2)."""
    from .transforms import build_theorem5_extension

    return build_theorem5_extension(disjoint_block(3), (1, 1, 1), (2,))[0]


def extension_broken_demo() -> Network:
    """Same extension around a block whose third session has no edge."""
    from .transforms import build_theorem5_extension

    return build_theorem5_extension(disjoint_block(3, missing=(2,)), (1, 1, 1), (2,))[0]


NP_DEMOS = {
    "triangle": [("x", "y"), ("y", "z"), ("z", "x")],
    "edge": [("x", "y")],
    "path": [("x", "z"), ("z", "y")],
}


def np_demo(name: str) -> Network:
    from .transforms import np_gadget

    return np_gadget(NP_DEMOS[name], "x", "y", "z", nodes=("x", "y", "z"))


CORPUS: Dict[str, Callable[[], Network]] = {
    "butterfly": butterfly,
    "grail": grail,
    "grail-preset": grail_preset,
    "crossfire": crossfire,
    "block3": disjoint_block,
    "block3-broken": lambda: disjoint_block(3, missing=(2,)),
    "extension": extension_demo,
    "extension-broken": extension_broken_demo,
    "np-triangle": lambda: np_demo("triangle"),
    "np-edge": lambda: np_demo("edge"),
    "np-path": lambda: np_demo("path"),
}


def names() -> List[str]:
    return sorted(CORPUS)


def load(name: str) -> Network:
    try:
        return CORPUS[name]()
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(names())}") from None
