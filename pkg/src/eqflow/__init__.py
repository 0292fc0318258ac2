"""Balanced flows in equality networks via a parametric min-cut sweep."""

from .balanced import (
    BalancedFlowResult,
    BalancednessCertificate,
    Blocks,
    balanced_flow,
    blocks_from_surpluses,
    reduced_network,
    squared_norm_oracle,
    verify_balanced,
)
from .core import (
    INF,
    Cut,
    EqualityNetwork,
    Flow,
    FlowNetwork,
    squared_surplus_norm,
    surpluses,
    to_flow_network,
)
from .io import parse_eqnet, parse_flow, serialize_eqnet, serialize_flow
from .maxflow import check_flow, enumerate_min_cuts, max_flow, min_sink_side_cut
from .parametric import (
    breakpoints_oracle,
    cut_capacity_function,
    instantiate,
    intersect,
    kappa,
    make_parametric,
    min_sink_cut_at,
    vertex_move_breakpoints,
)

__version__ = "0.1.0"
