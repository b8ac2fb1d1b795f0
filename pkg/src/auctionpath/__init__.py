"""Auction-style path construction, epsilon-scaling and flow solvers."""

from .apc import apc_run, apc_step, satisfies_downhill_path, succ_node
from .awpc import (
    awpc_run,
    awpc_step,
    awpc_step_cs,
    check_epsilon_cs,
    discrepancies,
    succ_arc,
    suboptimality_bound,
)
from .engine import PathResult, PathState, SolverConfig, TraceRecord
from .errors import (
    AuctionError,
    GraphError,
    DuplicateArc,
    SelfArc,
    NodeOutOfRange,
    CapacityViolated,
    CyclicGraph,
    NegativeCycle,
    SolverError,
    DeadendNode,
    AlreadyTerminated,
    CycleCreated,
    Unreachable,
    IterationLimitExceeded,
    ECSViolatedOnEntry,
    NotEntryFeasible,
    UphillArcOnPath,
    AmountExceedsResidual,
    Infeasible,
    TooLarge,
    ParseError,
)
from .graph import (
    INF,
    Arc,
    Graph,
    Slope,
    build_graph,
    check_nonnegative_cycles,
    classify_arc,
    reachable,
    residual_graph,
)
from .multipath import PathTree, run_multi_destination, run_multi_origin_tree
from .scaling import (
    ScalingSchedule,
    default_schedule,
    repair_prices_acyclic,
    scale_run_guaranteed,
    scale_run_naive,
)
from .transport import (
    FlowProblem,
    FlowState,
    augment,
    matching_to_flow,
    solve_assignment,
    solve_feasible_flow,
    solve_max_flow,
    solve_min_cost_flow,
)

__version__ = "0.1.0"

__all__ = [
    "AlreadyTerminated",
    "AmountExceedsResidual",
    "Arc",
    "AuctionError",
    "CapacityViolated",
    "CycleCreated",
    "CyclicGraph",
    "DeadendNode",
    "DuplicateArc",
    "ECSViolatedOnEntry",
    "FlowProblem",
    "FlowState",
    "Graph",
    "GraphError",
    "INF",
    "Infeasible",
    "IterationLimitExceeded",
    "NegativeCycle",
    "NodeOutOfRange",
    "NotEntryFeasible",
    "ParseError",
    "PathResult",
    "PathState",
    "PathTree",
    "ScalingSchedule",
    "SelfArc",
    "Slope",
    "SolverConfig",
    "SolverError",
    "TooLarge",
    "TraceRecord",
    "Unreachable",
    "UphillArcOnPath",
    "apc_run",
    "apc_step",
    "augment",
    "awpc_run",
    "awpc_step",
    "awpc_step_cs",
    "build_graph",
    "check_epsilon_cs",
    "check_nonnegative_cycles",
    "classify_arc",
    "default_schedule",
    "discrepancies",
    "matching_to_flow",
    "reachable",
    "repair_prices_acyclic",
    "residual_graph",
    "run_multi_destination",
    "run_multi_origin_tree",
    "satisfies_downhill_path",
    "scale_run_guaranteed",
    "scale_run_naive",
    "solve_assignment",
    "solve_feasible_flow",
    "solve_max_flow",
    "solve_min_cost_flow",
    "suboptimality_bound",
    "succ_arc",
    "succ_node",
]
