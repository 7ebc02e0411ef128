"""Chain-based aggregative routing simulator for underwater sensor networks.

Nodes drift, localize only through periodic base-station updates, and
relay fused data along a single chain whose next hop is chosen by a
tiered energy/distance/congestion rule. A greedy nearest-neighbor chain
is included as the baseline for lifetime comparisons.
"""

from .chain import (
    CandidateScore,
    Chain,
    LongLinkEvent,
    build_chain,
    build_greedy_baseline,
    eligible_neighbors,
    reconstruct_chain,
    select_next,
)
from .energy import (
    EnergyParams,
    default_threshold,
    hop_cost,
    passes_threshold,
    residual_after_hop,
    rx_energy,
    tx_energy,
)
from .engine import (
    Packet,
    RoundReport,
    SimResult,
    SimState,
    TraceEntry,
    aggregate_fuse,
    leader_for_round,
    run_round,
    run_simulation,
    sample_transient_failures,
    update_congestion,
)
from .errors import (
    ComparisonError,
    ConfigurationError,
    EmptyNetworkError,
    ProtocolError,
    SimulationComplete,
)
from .metrics import (
    ComparisonReport,
    LifetimeMetrics,
    bits_per_joule,
    compare,
    comparison_dict,
    compute_lifetime,
    export_rounds,
    export_summary,
    export_trace,
    summary_dict,
)
from .model import (
    Box,
    LocalizationTable,
    NetworkConfig,
    NetworkState,
    NodeState,
    Position,
    RngStream,
    apply_drift,
    distance,
    drain_energy,
    farthest_node,
    spawn_network,
    update_localization,
)
from .scenario import OutputPaths, Scenario, load_scenario, scenario_from_dict

__version__ = "0.1.0"

__all__ = [
    "Box",
    "CandidateScore",
    "Chain",
    "ComparisonError",
    "ComparisonReport",
    "ConfigurationError",
    "EmptyNetworkError",
    "EnergyParams",
    "LifetimeMetrics",
    "LocalizationTable",
    "LongLinkEvent",
    "NetworkConfig",
    "NetworkState",
    "NodeState",
    "OutputPaths",
    "Packet",
    "Position",
    "ProtocolError",
    "RngStream",
    "RoundReport",
    "Scenario",
    "SimResult",
    "SimState",
    "SimulationComplete",
    "TraceEntry",
    "aggregate_fuse",
    "apply_drift",
    "bits_per_joule",
    "build_chain",
    "build_greedy_baseline",
    "compare",
    "comparison_dict",
    "compute_lifetime",
    "default_threshold",
    "distance",
    "drain_energy",
    "eligible_neighbors",
    "export_rounds",
    "export_summary",
    "export_trace",
    "farthest_node",
    "hop_cost",
    "leader_for_round",
    "load_scenario",
    "passes_threshold",
    "reconstruct_chain",
    "residual_after_hop",
    "run_round",
    "run_simulation",
    "rx_energy",
    "sample_transient_failures",
    "scenario_from_dict",
    "select_next",
    "spawn_network",
    "summary_dict",
    "tx_energy",
    "update_congestion",
    "update_localization",
]
