"""spanlab: a desk-scale laboratory for graph spanners and message-passing cost.

The package builds a two-sided region graph family with deterministic "blue"
and randomly sampled "red" edges, detects critical edges via depth-limited
search and a traversal-sequence oracle, runs spanner algorithms on a
deterministic round-based simulator with bit-exact ledgers, and provides a
discrete entropy/mutual-information toolkit for measuring what the nodes
learn while they compute.
"""

from spanlab.graph_model import (
    ColoredGraph,
    DegreeReport,
    LowerBoundParams,
    degree_report,
    derive_params,
    load_instance,
    red_degree_band,
    sample_instance,
    save_instance,
    sparse_output_threshold,
)
from spanlab.infocost import (
    DiscreteDistribution,
    LicEstimate,
    bound_curves,
    check_data_processing,
    check_event_conditioning_bound,
    conditional_entropy,
    entropy,
    estimate_lic,
    mutual_information,
)
from spanlab.simulator import (
    InitialKnowledge,
    Message,
    Mode,
    ModelConfig,
    NodeProgram,
    ProtocolViolation,
    RunResult,
    collect_transcript_key,
    kt1_init,
    run,
)
from spanlab.spanners import (
    SpannerOutput,
    cluster_3spanner_centralized,
    cluster_3spanner_program,
    cluster_3spanner_two_party,
    greedy_spanner,
    random_gnp,
)
from spanlab.time_encoding import (
    LabeledGraph,
    convergecast_demo,
    decode_graph,
    encode_graph,
    enumeration_size,
)
from spanlab.traversal import (
    CriticalityReport,
    ReachableLevels,
    blue_steps_paired,
    check_bmaximal_reach_bound,
    critical_edges,
    criticality_via_traversal,
    eliminate_long_b_runs,
    enumerate_b_maximal,
    idealized_reach_exponent,
    is_b_maximal,
    is_critical,
    reachable_levels,
)
from spanlab.verify import (
    VerificationReport,
    critical_inclusion_check,
    size_check,
    sparse_set,
    stretch_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
