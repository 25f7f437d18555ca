"""congestlab: a round-synchronous CONGEST simulation lab.

Expander decomposition, truncated-walk sparse cuts, and distributed triangle
enumeration, each paired with sequential brute-force oracles so structural
guarantees are testable at desk scale.
"""

from .graphcore import (
    Cut,
    Graph,
    GraphError,
    Orientation,
    boundary,
    conductance,
    generate,
    load_edge_list,
    mixing_time_exact,
    parse_edge_list,
    sparsest_cut_bruteforce,
    verify_orientation,
    volume,
)
from .runtime import (
    BandwidthError,
    BfsTree,
    CongestError,
    Ctx,
    Message,
    StallError,
    Transcript,
    VertexProgram,
    bfs_build,
    broadcast,
    pipelined_convergecast,
    run,
)
from .routing import (
    IdAssignment,
    RoutingRequest,
    assign_degree_class_ids,
    kappa_default,
    mixing_estimate,
    route,
)
from .nibble import (
    NibbleResult,
    WalkParams,
    distributed_nibble,
    make_walk_params,
    sample_by_degree,
    sweep_cut,
    truncated_walk,
)
from .decomposition import (
    Decomposition,
    DecompositionReport,
    balanced_index,
    black_box_partition,
    decompose,
    decomposition_from_json,
    high_diameter_cut,
    low_degree_peel,
    verify_decomposition,
)
from .triangle import (
    ProbeResult,
    SubgraphSet,
    TriadAllocation,
    TriangleSet,
    allocate_triads,
    brute_force_triangles,
    case1_report_owner,
    count_triangles,
    detect_triangle,
    edge_concentration_probe,
    enumerate_expander,
    enumerate_general,
    enumerate_subgraphs,
)
from .cli import run_cli

__all__ = [
    "BandwidthError",
    "BfsTree",
    "CongestError",
    "Ctx",
    "Cut",
    "Decomposition",
    "DecompositionReport",
    "Graph",
    "GraphError",
    "IdAssignment",
    "Message",
    "NibbleResult",
    "Orientation",
    "ProbeResult",
    "RoutingRequest",
    "StallError",
    "SubgraphSet",
    "Transcript",
    "TriadAllocation",
    "TriangleSet",
    "VertexProgram",
    "WalkParams",
    "allocate_triads",
    "assign_degree_class_ids",
    "balanced_index",
    "bfs_build",
    "black_box_partition",
    "boundary",
    "broadcast",
    "brute_force_triangles",
    "case1_report_owner",
    "conductance",
    "count_triangles",
    "decompose",
    "decomposition_from_json",
    "detect_triangle",
    "distributed_nibble",
    "edge_concentration_probe",
    "enumerate_expander",
    "enumerate_general",
    "enumerate_subgraphs",
    "generate",
    "high_diameter_cut",
    "kappa_default",
    "load_edge_list",
    "low_degree_peel",
    "make_walk_params",
    "mixing_estimate",
    "mixing_time_exact",
    "parse_edge_list",
    "pipelined_convergecast",
    "route",
    "run",
    "run_cli",
    "sample_by_degree",
    "sparsest_cut_bruteforce",
    "sweep_cut",
    "truncated_walk",
    "verify_decomposition",
    "verify_orientation",
    "volume",
]

__version__ = "0.1.0"
