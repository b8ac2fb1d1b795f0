"""State, configuration and the iteration driver shared by both engines."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Sequence

from .errors import GraphError, IterationLimitExceeded, NodeOutOfRange
from .graph import INF, Arc, Graph, as_number

TIE_BREAKS = ("min-id", "max-id")

# Price vectors in trace records are kept by default up to this many nodes.
TRACE_PRICE_NODE_LIMIT = 64


class Action(str, enum.Enum):
    INIT = "init"
    EXTENSION = "extension"
    CONTRACTION = "contraction"
    TERMINATE = "terminate"


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float = 1.0
    tie_break: str = "min-id"
    iteration_limit: int | None = None
    tolerance: float = 0.0
    trace: bool = False
    trace_prices: bool | None = None

    def __post_init__(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ValueError(f"epsilon must be positive, got {self.epsilon!r}")
        if self.tie_break not in TIE_BREAKS:
            raise ValueError(f"unknown tie-break rule {self.tie_break!r}")
        if self.iteration_limit is not None and self.iteration_limit < 1:
            raise ValueError("iteration_limit must be a positive integer")
        if not self.tolerance >= 0:
            raise ValueError("tolerance must be non-negative")

    def limit_for(self, graph: Graph) -> int:
        if self.iteration_limit is not None:
            return self.iteration_limit
        n = graph.node_count
        return 50 * n * (n + len(graph.arcs))

    def with_epsilon(self, epsilon: float) -> SolverConfig:
        return replace(self, epsilon=epsilon)

    def keeps_trace_prices(self, graph: Graph) -> bool:
        if self.trace_prices is not None:
            return self.trace_prices
        return graph.node_count <= TRACE_PRICE_NODE_LIMIT


@dataclass(frozen=True)
class TraceRecord:
    """One iteration: the path and prices it started from and what it did.

    ``node`` is the extension target, or the new terminal node after a
    contraction.  The final record of a run has action ``terminate``.
    """

    iteration: int
    case: str | None
    action: str
    node: int | None
    path: tuple[int, ...]
    prices: tuple[float, ...] | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["path"] = list(self.path)
        if self.prices is not None:
            d["prices"] = list(self.prices)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> TraceRecord:
        prices = d.get("prices")
        return cls(
            iteration=int(d["iteration"]),
            case=d.get("case"),
            action=str(d["action"]),
            node=d.get("node"),
            path=tuple(int(i) for i in d["path"]),
            prices=None if prices is None else tuple(float(p) for p in prices),
        )


@dataclass
class PathState:
    """The maintained path P, the prices, and counters."""

    path: list[int]
    prices: list[float]
    destination: int
    last_action: Action = Action.INIT
    iteration: int = 0
    extensions: int = 0
    contractions: int = 0

    @classmethod
    def start(cls, origin: int, destination: int,
              prices: Sequence[float]) -> PathState:
        return cls([origin], list(prices), destination)

    @property
    def terminal(self) -> int:
        return self.path[-1]

    @property
    def origin(self) -> int:
        return self.path[0]

    @property
    def done(self) -> bool:
        return self.path[-1] == self.destination

    def copy(self) -> PathState:
        return replace(self, path=list(self.path), prices=list(self.prices))


@dataclass
class PathResult:
    path: list[int]
    prices: list[float]
    iterations: int
    extensions: int
    contractions: int
    epsilon: float
    trace: list[TraceRecord] | None = None
    report: object | None = None
    extras: dict = field(default_factory=dict)


# advance(graph, path, prices, epsilon, tolerance, tie_break) -> (case, action, node)
Advance = Callable[[Graph, list, list, float, float, str], tuple]


def pick_successor(arcs: Sequence[Arc], prices: Sequence[float],
                   weighted: bool, tolerance: float, tie_break: str) -> Arc:
    """Arc minimizing ``p_j`` (or ``a_ij + p_j`` when weighted)."""
    best = arcs[0]
    best_val = best.length + prices[best.end] if weighted else prices[best.end]
    prefer_low = tie_break == "min-id"
    for a in arcs[1:]:
        val = a.length + prices[a.end] if weighted else prices[a.end]
        if val < best_val - tolerance:
            best, best_val = a, val
        elif val <= best_val + tolerance:
            if (a.end < best.end) == prefer_low:
                best, best_val = a, val
    return best


def validate_prices(graph: Graph, prices: Sequence[float] | None) -> list[float]:
    if prices is None:
        return [0.0] * graph.node_count
    prices = [as_number(p) for p in prices]
    if len(prices) != graph.node_count:
        raise GraphError(
            f"price vector has {len(prices)} entries, graph has "
            f"{graph.node_count} nodes")
    for i, p in enumerate(prices):
        if math.isnan(p) or p == -INF:
            raise GraphError(f"price of node {i} is {p!r}")
    return prices


def validate_endpoints(graph: Graph, *nodes: int) -> None:
    for node in nodes:
        if not 0 <= node < graph.node_count:
            raise NodeOutOfRange(node, graph.node_count)


def drive(graph: Graph, state: PathState, config: SolverConfig,
          advance: Advance, stop: Callable[[PathState], bool],
          trace: list[TraceRecord] | None = None,
          limit: int | None = None) -> None:
    """Step ``state`` in place until ``stop(state)`` holds."""
    if limit is None:
        limit = config.limit_for(graph)
    keep_prices = config.keeps_trace_prices(graph)
    eps, tol, tie = config.epsilon, config.tolerance, config.tie_break
    while not stop(state):
        if state.iteration >= limit:
            raise IterationLimitExceeded(limit)
        if trace is not None:
            prior_path = tuple(state.path)
            prior_prices = tuple(state.prices) if keep_prices else None
        case, action, node = advance(graph, state.path, state.prices,
                                     eps, tol, tie)
        state.iteration += 1
        state.last_action = action
        if action is Action.EXTENSION:
            state.extensions += 1
        else:
            state.contractions += 1
        if trace is not None:
            trace.append(TraceRecord(state.iteration, case, action.value, node,
                                     prior_path, prior_prices))


def terminate_record(graph: Graph, state: PathState,
                     config: SolverConfig) -> TraceRecord:
    prices = tuple(state.prices) if config.keeps_trace_prices(graph) else None
    return TraceRecord(state.iteration + 1, None, Action.TERMINATE.value, None,
                       tuple(state.path), prices)
