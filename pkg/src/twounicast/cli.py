"""Command-line front end.

Every subcommand wraps one library call and prints a JSON document on
stdout. Exit status: 0 success, 2 when the requested object does not
exist (no scheme found, no finite GNS cut, a scheme with errors), 1 for
errors. FILE arguments accept a path, ``-`` for stdin, or the name of a
built-in example.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import corpus
from .netgraph import (
    Network,
    emit_network,
    format_ext,
    network_to_json,
    parse_network,
)

OK, ERROR, ABSENT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ERROR, f"{self.prog}: error: {message}\n")


# -- argument helpers --


def _load(source: str) -> Network:
    if source == "-":
        return parse_network(sys.stdin.buffer.read())
    if os.path.exists(source):
        with open(source, "rb") as fh:
            return parse_network(fh.read())
    if source in corpus.CORPUS:
        return corpus.load(source)
    raise UsageError(f"{source!r} is neither a file nor a built-in example ({', '.join(corpus.names())})")


def _read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, "rb") as fh:
        try:
            return json.loads(fh.read().decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise UsageError(f"{path}: {exc}") from None


def _words(text: Optional[str]) -> List[str]:
    return [w.strip() for w in (text or "").split(",") if w.strip()]


def _fractions(text: Optional[str]) -> List[Fraction]:
    try:
        return [Fraction(w) for w in _words(text)]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected comma-separated rationals, got {text!r}") from None


def _ints(text: Optional[str]) -> List[int]:
    out = []
    for v in _fractions(text):
        if v.denominator != 1:
            raise UsageError(f"expected integers, got {text!r}")
        out.append(int(v))
    return out


def _fmt(values: Sequence) -> List[str]:
    return [format_ext(v) for v in values]


# -- subcommands; each returns (exit code, document) --


def cmd_info(args):
    from .flows import cut_value

    net = _load(args.file)
    doc = {
        "nodes": len(net.nodes),
        "edges": len(net.edges),
        "sessions": [{"src": s.src, "dst": s.dst} for s in net.sessions],
        "allow_cycles": net.allow_cycles,
        "total_capacity": format_ext(net.capacity(e.id for e in net.edges)),
        "cutset": [format_ext(cut_value(net, [s.src], [s.dst])) for s in net.sessions],
    }
    return OK, doc


def cmd_mincut(args):
    from .flows import mincut

    net = _load(args.file)
    return OK, mincut(net, _words(args.source), _words(args.sink), _words(args.removed)).to_json()


def cmd_bounds(args):
    from .edgecut_bounds import cutset_bound, network_sharing_bound
    from .rate_regions import corners_2d, gns_region, gns_region_multi

    net = _load(args.file)
    if args.kind == "lp":
        from .entropic_lp import lp_outer_bound

        w = _ints(args.weights) if args.weights else [1] * net.k
        if len(w) != net.k:
            raise UsageError(f"need {net.k} weights")
        return OK, {"kind": "lp", "weights": w, "bound": format_ext(lp_outer_bound(net, w))}
    if args.weights:
        raise UsageError("--weights applies to --kind lp only")
    if args.kind == "cutset":
        region = cutset_bound(net)
    elif args.kind == "ns":
        region = network_sharing_bound(net)
    elif args.kind == "gns":
        region = gns_region(net)
    else:
        region = gns_region_multi(net, jobs=args.jobs)
    doc = {"kind": args.kind, "region": region.to_json(), "inequalities": str(region).splitlines()}
    if region.dim == 2:
        doc["sum_bound"] = format_ext(region.bound_for((1, 1))) if region.bound_for((1, 1)) is not None else None
        doc["corners"] = [_fmt(p) for p in corners_2d(region)]
    return OK, doc


def cmd_gns_min(args):
    from .edgecut_bounds import min_gns_cut

    net = _load(args.file)
    I = _ints(args.sessions) if args.sessions else None
    value, cert = min_gns_cut(net, I, jobs=args.jobs, method=args.method)
    if value == float("inf"):
        return ABSENT, {"value": "inf", "certificate": None}
    return OK, {"value": format_ext(value), "certificate": cert.to_json()}


def cmd_classify_cut(args):
    from .edgecut_bounds import classify_cut_edges, classify_edge_cut_bound

    net = _load(args.file)
    S = _words(args.edges)
    doc = classify_edge_cut_bound(net, S).to_json()
    if args.labels and doc["verdict"] == "GnsCut":
        doc["labels"] = classify_cut_edges(net, S).to_json()
    return OK, doc


def cmd_search(args):
    from .coding import search_linear

    net = _load(args.file)
    sch = search_linear(net, _fractions(args.rates), q=args.field, N=args.blocklen, budget=args.budget)
    if sch is None:
        return ABSENT, {"found": False}
    return OK, sch.to_json()


def cmd_verify(args):
    from .coding import scheme_from_json, verify

    doc = _read_json(args.scheme)
    if isinstance(doc, dict) and "scheme" in doc and "network" in doc:
        from .netgraph import network_from_json

        net, doc = network_from_json(doc["network"]), doc["scheme"]
    elif args.file is None:
        raise UsageError("a network FILE is required unless the scheme document embeds one")
    else:
        net = _load(args.file)
    report = verify(net, scheme_from_json(doc))
    return (OK if report.zero_error else ABSENT), report.to_json()


def cmd_corner_scheme(args):
    from .achievability import gns_corner_scheme

    net = _load(args.file)
    cs = gns_corner_scheme(net, _words(args.cut), corner=args.corner, fallback=not args.no_fallback, budget=args.budget)
    return OK, cs.to_json()


def _np_gadget_input(path: str):
    doc = _read_json(path)
    if not isinstance(doc, dict) or "edges" not in doc:
        raise UsageError("np-gadget input must be a JSON object with an 'edges' list")
    return [tuple(e) for e in doc["edges"]], doc.get("nodes", []), doc.get("terminals")


def cmd_reduce(args):
    from . import transforms as T

    if args.kind == "np-gadget":
        H, nodes, terms = _np_gadget_input(args.file)
        terms = _words(args.terminals) or terms
        if not terms or len(terms) != 3:
            raise UsageError("np-gadget needs three terminals x,y,z")
        return OK, network_to_json(T.np_gadget(H, *terms, nodes=nodes))
    net = _load(args.file)
    if args.kind == "theorem5":
        ext, meta = T.build_theorem5_extension(net, _ints(args.rates), _ints(args.split))
        doc = network_to_json(ext)
        if args.metadata:
            with open(args.metadata, "w", encoding="utf-8") as fh:
                fh.write(json.dumps(meta.to_json(), indent=2) + "\n")
        else:
            doc["metadata"] = meta.to_json()
        return OK, doc
    if args.kind == "fusion":
        return OK, network_to_json(T.fusion_gadget(net, _fractions(args.rates), session=args.session))
    if args.kind == "monotonicity":
        R = _fractions(args.rates) if args.rates else None
        return OK, network_to_json(T.monotonicity_gadget(net, _fractions(args.split), R))
    return OK, network_to_json(T.supersource_transform(net, _fractions(args.rates)))


def cmd_example(args):
    if args.name is None:
        return OK, {"examples": corpus.names()}
    if args.name not in corpus.CORPUS:
        raise UsageError(f"unknown example {args.name!r}; choose from {', '.join(corpus.names())}")
    net = corpus.load(args.name)
    if args.emit:
        return OK, network_to_json(net)
    args.file = args.name
    code, doc = cmd_info(args)
    return code, {"name": args.name, **doc}


# -- output --


def _render(doc, indent: int = 0) -> List[str]:
    pad = "  " * indent
    if isinstance(doc, dict):
        lines = []
        for k, v in doc.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines += _render(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return lines
    if isinstance(doc, list):
        lines = []
        for v in doc:
            if isinstance(v, (dict, list)) and v and not _flat(v):
                sub = _render(v, indent + 1)
                lines.append(f"{pad}- " + sub[0].lstrip())
                lines += sub[1:]
            else:
                lines.append(f"{pad}- {_scalar(v)}")
        return lines
    return [pad + _scalar(doc)]


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="twounicast", description="Capacity bounds and linear codes for multi-unicast networks.")
    p.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the GNS branch and bound")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("info", help="network summary")
    s.add_argument("file")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("mincut", help="minimum cut between node sets")
    s.add_argument("file")
    s.add_argument("--from", dest="source", required=True, help="comma-separated source nodes")
    s.add_argument("--to", dest="sink", required=True, help="comma-separated sink nodes")
    s.add_argument("--removed", help="comma-separated edges deleted first")
    s.set_defaults(func=cmd_mincut)

    s = sub.add_parser("bounds", help="outer bounds on the rate region")
    s.add_argument("file")
    s.add_argument("--kind", required=True, choices=["cutset", "ns", "gns", "gns-multi", "lp"])
    s.add_argument("--weights", help="weights for --kind lp, e.g. 1,2")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("gns-min", help="minimum GNS cut with certificate")
    s.add_argument("file")
    s.add_argument("--sessions", help="0-based session indices (default: all)")
    s.add_argument("--method", choices=["bnb", "exhaustive"], default="bnb")
    s.set_defaults(func=cmd_gns_min)

    s = sub.add_parser("classify-cut", help="decide whether an edge set gives a sum-rate bound")
    s.add_argument("file")
    s.add_argument("--edges", required=True)
    s.add_argument("--labels", action="store_true", help="for a GNS cut, also report the per-edge session labels")
    s.set_defaults(func=cmd_classify_cut)

    s = sub.add_parser("search", help="search for a zero-error linear scheme")
    s.add_argument("file")
    s.add_argument("--rates", required=True, help="one rate per session, e.g. 1,3/2")
    s.add_argument("--field", type=int, default=2)
    s.add_argument("--blocklen", type=int, default=1)
    s.add_argument("--budget", type=int, default=2_000_000)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("verify", help="check a scheme over every message tuple")
    s.add_argument("file", nargs="?")
    s.add_argument("--scheme", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("corner-scheme", help="build a scheme at a corner of the GNS region")
    s.add_argument("file")
    s.add_argument("--cut", required=True, help="a minimal GNS cut, comma-separated")
    s.add_argument("--corner", type=int, choices=[1, 2], default=1)
    s.add_argument("--no-fallback", action="store_true", help="fail instead of searching when the construction fails")
    s.add_argument("--budget", type=int, default=2_000_000)
    s.set_defaults(func=cmd_corner_scheme)

    s = sub.add_parser("reduce", help="build a transformed network")
    s.add_argument("file", help="network, or an undirected graph JSON for np-gadget")
    s.add_argument("--kind", required=True, choices=["theorem5", "fusion", "monotonicity", "np-gadget", "supersource"])
    s.add_argument("--rates", help="theorem5: block rates R; fusion: the two fused rates; supersource/monotonicity: R")
    s.add_argument("--split", help="theorem5 and monotonicity: the list r")
    s.add_argument("--session", type=int, default=0, help="fusion: 0-based session to fuse")
    s.add_argument("--terminals", help="np-gadget: x,y,z")
    s.add_argument("--metadata", help="theorem5: write the extension metadata here instead of embedding it")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("example", help="list, describe or emit built-in networks")
    s.add_argument("name", nargs="?")
    s.add_argument("--emit", action="store_true", help="print the network document")
    s.set_defaults(func=cmd_example)
    return p


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("twounicast: error: --jobs must be positive", file=sys.stderr)
        return ERROR
    try:
        code, doc = args.func(args)
    except (UsageError, ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        print(f"twounicast: error: {exc}", file=sys.stderr)
        return ERROR
    if args.pretty:
        out.write("\n".join(_render(doc)) + "\n")
    elif args.command == "example" and args.emit:
        out.write(emit_network(_load(args.name)).decode("utf-8"))
    else:
        out.write(json.dumps(doc, indent=2) + "\n")
    return code


def main() -> None:
    sys.exit(run())
