"""Outer bounds, linear codes and reductions for multi-unicast networks."""

from .achievability import CornerScheme, gns_corner_scheme, reduction_forward_scheme, two_multicast_scheme
from .coding import Scheme, scheme_from_json, search_linear, simulate, verify
from .edgecut_bounds import (
    classify_cut_edges,
    classify_edge_cut_bound,
    cutset_bound,
    is_gns_cut,
    is_minimal_gns_cut,
    min_gns_cut,
    network_sharing_bound,
)
from .entropic_lp import lp_excludes_point, lp_outer_bound
from .flows import cut_value, edge_disjoint_paths, mincut
from .netgraph import INF, Network, NetworkError, emit_network, make_network, parse_network
from .rate_regions import Region, gns_region, gns_region_multi, make_region, region_equal, two_multicast_region
from .transforms import (
    build_theorem5_extension,
    fusion_gadget,
    monotonicity_gadget,
    np_gadget,
    supersource_transform,
)

__all__ = [name for name in dir() if not name.startswith("_")]
