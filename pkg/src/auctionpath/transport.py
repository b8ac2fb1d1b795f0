"""Flow problems solved by successive augmentations along constructed paths.

Every augmentation builds the residual graph of the current flow, finds an
origin-to-sink path in it with one of the path engines, and pushes as much
flow as the path and the remaining supply allow.  Prices carry over from
one augmentation to the next.

Nodes priced at infinity stay unable to reach the sink for the rest of the
solve (no augmenting path can enter them), so the sentinel is carried over
unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .apc import apc_run
from .awpc import awpc_run, check_epsilon_cs
from .engine import SolverConfig, validate_prices
from .errors import (
    AmountExceedsResidual,
    GraphError,
    Infeasible,
    Unreachable,
)
from .graph import (
    INF,
    Graph,
    ResidualGraph,
    build_graph,
    is_acyclic,
    reachable,
    residual_graph,
)
from .scaling import ScalingSchedule, scale_run_guaranteed


@dataclass(frozen=True)
class FlowProblem:
    """Route ``supply`` units from ``source`` to ``sink`` within capacities."""

    graph: Graph
    source: int
    sink: int
    supply: float = INF

    def __post_init__(self):
        g = self.graph
        for node in (self.source, self.sink):
            if not 0 <= node < g.node_count:
                raise GraphError(f"node {node} outside 0..{g.node_count - 1}")
        if self.source == self.sink:
            raise GraphError("source and sink must differ")
        if g.in_arcs(self.source):
            raise GraphError("the source may not have incoming arcs")
        if g.out_arcs(self.sink):
            raise GraphError("the sink may not have outgoing arcs")
        if not self.supply > 0:
            raise GraphError(f"supply must be positive, got {self.supply!r}")

    def with_supply(self, supply: float) -> FlowProblem:
        return FlowProblem(self.graph, self.source, self.sink, supply)


@dataclass
class FlowState:
    flow: dict[tuple[int, int], float]
    routed: float
    prices: list[float]
    augmentations: int = 0
    iterations: int = 0
    stats: dict = field(default_factory=dict)

    def cost(self, graph: Graph) -> float:
        return sum(graph.length(i, j) * x for (i, j), x in self.flow.items())

    def violations(self, problem: FlowProblem, tolerance: float = 0.0) -> list[str]:
        """Broken capacity or conservation conditions, as readable strings."""
        g = problem.graph
        out = []
        net = [0] * g.node_count
        for a in g.arcs:
            x = self.flow.get((a.start, a.end), 0)
            if x < -tolerance or x > a.capacity + tolerance:
                out.append(f"arc {(a.start, a.end)} carries {x} outside [0, {a.capacity}]")
            net[a.start] += x
            net[a.end] -= x
        for i, d in enumerate(net):
            want = (self.routed if i == problem.source
                    else -self.routed if i == problem.sink else 0)
            if abs(d - want) > tolerance:
                out.append(f"node {i} has net outflow {d}, expected {want}")
        return out

    def is_feasible(self, problem: FlowProblem, tolerance: float = 0.0) -> bool:
        return (not self.violations(problem, tolerance)
                and abs(self.routed - problem.supply) <= tolerance)


def augment(graph: Graph, flow: Mapping[tuple[int, int], float],
            path: Sequence[int], amount: float,
            residual: ResidualGraph | None = None) -> dict[tuple[int, int], float]:
    """Push ``amount`` along a residual path; return the new flow.

    Raises:
        AmountExceedsResidual: if some residual arc of ``path`` has less
            capacity than ``amount`` (or ``amount`` is not positive).
        GraphError: if ``path`` is not a path of the residual graph.
    """
    residual = residual or residual_graph(graph, flow)
    available = path_capacity(residual, path)
    if not 0 < amount <= available:
        raise AmountExceedsResidual(amount, available)
    new = dict(flow)
    for u, v in zip(path, path[1:]):
        i, j, forward = residual.origin[(u, v)]
        x = new.get((i, j), 0)
        new[(i, j)] = x + amount if forward else x - amount
    return {k: x for k, x in new.items() if x != 0}


def path_capacity(residual: Graph, path: Sequence[int]) -> float:
    try:
        return min(residual.arc(u, v).capacity for u, v in zip(path, path[1:]))
    except KeyError as exc:
        raise GraphError(f"arc {exc.args[0]} is not in the residual graph") from None


AugmentHook = Callable[[FlowState], None]


def _augment_loop(problem: FlowProblem, prices, find_path,
                  on_augment: AugmentHook | None, stop_when_blocked: bool) -> FlowState:
    g, s, t = problem.graph, problem.source, problem.sink
    state = FlowState({}, 0, validate_prices(g, prices))
    while state.routed < problem.supply:
        residual = residual_graph(g, state.flow)
        if not reachable(residual, s, t):
            if stop_when_blocked:
                break
            raise Infeasible(state.routed, problem.supply)
        path, new_prices, iters = find_path(residual, state.prices)
        amount = min(path_capacity(residual, path), problem.supply - state.routed)
        state.flow = augment(g, state.flow, path, amount, residual)
        state.routed += amount
        state.prices = new_prices
        state.augmentations += 1
        state.iterations += iters
        state.stats.setdefault("paths", []).append(list(path))
        if on_augment is not None:
            on_augment(state)
    return state


def solve_feasible_flow(problem: FlowProblem, config: SolverConfig | None = None,
                        prices: Sequence[float] | None = None,
                        reuse_prices: bool = True,
                        on_augment: AugmentHook | None = None) -> FlowState:
    """Route exactly ``problem.supply`` units using unweighted path searches.

    With ``reuse_prices=False`` every search restarts from zero prices,
    which is only useful for measuring what reuse saves.

    Raises:
        Infeasible: when the sink becomes unreachable before the supply is
            routed.
    """
    config = config or SolverConfig()

    def find(residual, p):
        run = apc_run(residual, problem.source, problem.sink,
                      p if reuse_prices else None, config)
        return run.path, run.prices, run.iterations

    return _augment_loop(problem, prices, find, on_augment, False)


def solve_max_flow(problem: FlowProblem, config: SolverConfig | None = None,
                   prices: Sequence[float] | None = None,
                   on_augment: AugmentHook | None = None) -> FlowState:
    """Augment until the sink is unreachable; ``routed`` is the max-flow value."""
    config = config or SolverConfig()
    unbounded = problem.with_supply(INF)

    def find(residual, p):
        run = apc_run(residual, problem.source, problem.sink, p, config)
        return run.path, run.prices, run.iterations

    return _augment_loop(unbounded, prices, find, on_augment, True)


def solve_min_cost_flow(problem: FlowProblem,
                        schedule: ScalingSchedule | None = None,
                        config: SolverConfig | None = None,
                        prices: Sequence[float] | None = None,
                        rescale: str = "first",
                        on_augment: AugmentHook | None = None) -> FlowState:
    """Route the supply along near-shortest residual paths.

    Each path is built with the CS-preserving rule, so every path is within
    ``(n + 1) * eps_min`` of the shortest residual path.  Residual graphs
    that are acyclic run the whole schedule with price repair between
    phases: only for the first augmentation with ``rescale="first"`` (later
    ones start from prices already tight at ``eps_min``), for all of them
    with ``rescale="each"``.  Otherwise a single run at ``eps_min`` is made.
    Should the carried prices ever violate the CS condition the standard
    rule is used instead and ``stats["guaranteed"]`` becomes False.

    Costs must be non-negative.  ``stats`` records the rule used and the
    epsilon of every augmentation.

    Raises:
        Infeasible: if the supply cannot be routed.
        CycleCreated: if an approximate residual cycle traps a search.
    """
    if rescale not in ("first", "each"):
        raise ValueError(f"unknown rescale mode {rescale!r}")
    g, s, t = problem.graph, problem.source, problem.sink
    for a in g.arcs:
        if a.length < 0:
            raise GraphError(f"arc {(a.start, a.end)} has negative cost {a.length}")
    config = config or SolverConfig()
    if schedule is None:
        schedule = ScalingSchedule(config.epsilon)
    eps_min = schedule.eps_min
    log = {"guaranteed": True, "rules": [], "epsilons": [], "phases": []}

    def find(residual, p):
        first = not log["rules"]
        multi = len(schedule.epsilons()) > 1
        if multi and (first or rescale == "each") and is_acyclic(residual):
            check = check_epsilon_cs(residual, p, [s], schedule.eps0, config.tolerance)
            if check.ok:
                run = scale_run_guaranteed(residual, s, t, p, schedule, config)
                log["rules"].append("cs-scaled")
                log["epsilons"].append(eps_min)
                log["phases"].append([ph.to_dict() for ph in run.phases])
                return run.path, run.prices, run.iterations
        eps = eps_min
        cfg = config.with_epsilon(eps)
        check = check_epsilon_cs(residual, p, [s], eps, config.tolerance)
        rule = "cs" if check.ok else "standard"
        if rule == "standard":
            log["guaranteed"] = False
        run = awpc_run(residual, s, t, p, cfg, rule=rule, check_cycles=False)
        log["rules"].append(rule)
        log["epsilons"].append(eps)
        return run.path, run.prices, run.iterations

    state = _augment_loop(problem, prices, find, on_augment, False)
    state.stats.update(log)
    state.stats["cost"] = state.cost(g)
    state.stats["bound"] = (state.augmentations * (g.node_count - 1) * eps_min
                            if log["guaranteed"] else None)
    return state


def matching_to_flow(left: int, right: int,
                     pairs: Sequence[tuple[int, int]],
                     costs: Sequence[float] | Mapping[tuple[int, int], float] | None = None
                     ) -> FlowProblem:
    """Bipartite matching as a unit-capacity flow problem.

    Persons ``1..left`` and objects ``1..right`` (pairs use these ids) map to
    nodes ``1..left`` and ``left+1..left+right``; the source is node 0 and
    the sink node ``left+right+1``.  The supply is ``min(left, right)``.
    """
    if left < 1 or right < 1:
        raise GraphError("both sides need at least one node")
    if costs is None:
        weight = {}
    elif isinstance(costs, Mapping):
        weight = dict(costs)
    else:
        costs = list(costs)
        if len(costs) != len(pairs):
            raise GraphError("costs must align with pairs")
        weight = dict(zip(map(tuple, pairs), costs))
    t = left + right + 1
    arcs = [(0, i, 0, 1) for i in range(1, left + 1)]
    for p, q in pairs:
        if not (1 <= p <= left and 1 <= q <= right):
            raise GraphError(f"pair {(p, q)} outside {left}x{right}")
        arcs.append((p, left + q, weight.get((p, q), 0), 1))
    arcs += [(left + q, t, 0, 1) for q in range(1, right + 1)]
    return FlowProblem(build_graph(t + 1, arcs), 0, t, min(left, right))


@dataclass
class AssignmentResult:
    matching: list[tuple[int, int]]
    cost: float
    state: FlowState


def flow_to_matching(problem: FlowProblem, left: int,
                     flow: Mapping[tuple[int, int], float]) -> list[tuple[int, int]]:
    return sorted((i, j - left) for (i, j), x in flow.items()
                  if x > 0 and 1 <= i <= left and left < j < problem.sink)


def solve_assignment(costs: Sequence[Sequence[float | None]],
                     schedule: ScalingSchedule | None = None,
                     config: SolverConfig | None = None) -> AssignmentResult:
    """Minimum-cost perfect matching for a square cost matrix.

    ``costs[i][j]`` is the cost of person ``i+1`` taking object ``j+1``;
    ``None`` forbids the pair.  Returned pairs use 1-based ids.

    Raises:
        Infeasible: if no perfect matching exists.
    """
    n = len(costs)
    if n < 1 or any(len(row) != n for row in costs):
        raise GraphError("assignment needs a non-empty square cost matrix")
    pairs, weights = [], []
    for i, row in enumerate(costs, start=1):
        for j, c in enumerate(row, start=1):
            if c is not None:
                pairs.append((i, j))
                weights.append(c)
    problem = matching_to_flow(n, n, pairs, weights)
    try:
        state = solve_min_cost_flow(problem, schedule, config)
    except Unreachable:
        raise Infeasible(0, n) from None
    matching = flow_to_matching(problem, n, state.flow)
    return AssignmentResult(matching, state.cost(problem.graph), state)
