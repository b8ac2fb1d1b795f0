"""Epsilon-scaling drivers and price repair for acyclic graphs.

A run at a large epsilon is cheap and yields rough prices; reruns at
smaller epsilon refine them.  The naive driver simply reuses the final
prices.  The guaranteed driver keeps every arc downhill by at most epsilon
(the ``cs`` rule) and, between phases, raises prices just enough for that
property to hold at the next, smaller epsilon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .awpc import awpc_run, check_epsilon_cs
from .engine import SolverConfig, validate_prices
from .errors import ECSViolatedOnEntry, NotEntryFeasible
from .graph import INF, Graph, path_length, topological_order


@dataclass(frozen=True)
class ScalingSchedule:
    """Geometric epsilon schedule ``eps0, theta*eps0, ...`` ending at ``eps_min``."""

    eps0: float
    theta: float = 0.25
    eps_min: float | None = None
    phase_limits: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.eps_min is None:
            object.__setattr__(self, "eps_min", self.eps0)
        if not 0 < self.eps_min <= self.eps0:
            raise ValueError("schedule needs eps0 >= eps_min > 0")
        if not 0 < self.theta < 1:
            raise ValueError("theta must lie in (0, 1)")

    def epsilons(self) -> list[float]:
        out = [self.eps0]
        eps = self.eps0
        while eps > self.eps_min:
            eps = max(eps * self.theta, self.eps_min)
            out.append(eps)
        return out

    def limit(self, phase: int) -> int | None:
        if not self.phase_limits:
            return None
        return self.phase_limits[min(phase, len(self.phase_limits) - 1)]


def default_schedule(graph: Graph, eps_min: float,
                     theta: float = 0.25) -> ScalingSchedule:
    """Start at the largest arc length (1 if all are zero)."""
    top = max((abs(a.length) for a in graph.arcs), default=0)
    eps0 = top if top > 0 else 1
    return ScalingSchedule(max(eps0, eps_min), theta, eps_min)


@dataclass
class PhaseStats:
    epsilon: float
    iterations: int
    contractions: int
    path: list[int]
    path_length: float
    raised: int = 0

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "iterations": self.iterations,
                "contractions": self.contractions, "path": self.path,
                "path_length": self.path_length, "repaired_prices": self.raised}


@dataclass
class ScalingResult:
    path: list[int]
    prices: list[float]
    phases: list[PhaseStats] = field(default_factory=list)
    report: object | None = None
    bound: float | None = None

    @property
    def iterations(self) -> int:
        return sum(p.iterations for p in self.phases)


def _phase_config(config: SolverConfig, schedule: ScalingSchedule,
                  k: int, eps: float) -> SolverConfig:
    cfg = config.with_epsilon(eps)
    limit = schedule.limit(k)
    if limit is not None:
        from dataclasses import replace
        cfg = replace(cfg, iteration_limit=limit)
    return cfg


def scale_run_naive(graph: Graph, s: int, t: int,
                    prices: Sequence[float] | None,
                    schedule: ScalingSchedule, rule: str = "standard",
                    config: SolverConfig | None = None) -> ScalingResult:
    """Rerun the weighted engine down the schedule, reusing final prices.

    No optimality guarantee: prices from one phase may be far from the
    shortest distances.
    """
    config = config or SolverConfig()
    prices = validate_prices(graph, prices)
    result = ScalingResult([], prices)
    for k, eps in enumerate(schedule.epsilons()):
        run = awpc_run(graph, s, t, prices, _phase_config(config, schedule, k, eps),
                       rule=rule, check_cycles=(k == 0))
        prices = run.prices
        result.phases.append(PhaseStats(eps, run.iterations, run.contractions,
                                        run.path, path_length(graph, run.path)))
        result.path, result.prices, result.report = run.path, prices, run.report
    return result


def repair_prices_acyclic(graph: Graph, prices: Sequence[float],
                          epsilon: float,
                          entry_epsilon: float | None = None) -> list[float]:
    """Raise prices of an acyclic graph until ``p_i <= a_ij + p_j + epsilon``.

    Violating arcs are handled in reverse topological order of their end
    nodes.  A violated arc (i, j) lifts ``p_j`` to ``p_i - a_ij - epsilon``
    (to within an ulp for floats), and the arcs leaving ``j`` are examined
    before moving on, so every raise is the smallest that clears the
    violations present when it is made.  Prices never decrease.

    Raises:
        CyclicGraph: if the graph has a directed cycle.
        NotEntryFeasible: if some arc leaves an infinitely priced node for a
            finite one, or the prices violate the condition at
            ``entry_epsilon`` when that is given.
    """
    order = topological_order(graph)
    prices = validate_prices(graph, prices)
    if entry_epsilon is not None:
        if entry_epsilon < epsilon:
            raise NotEntryFeasible(
                f"entry epsilon {entry_epsilon!r} is below target {epsilon!r}")
        check = check_epsilon_cs(graph, prices, [], entry_epsilon)
        if not check.ok:
            raise NotEntryFeasible(
                f"prices violate {entry_epsilon!r}-CS on {sorted(check.arcs)}")
    for a in graph.arcs:
        if prices[a.start] == INF and prices[a.end] != INF:
            raise NotEntryFeasible(
                f"arc {(a.start, a.end)} leaves an infinitely priced node")

    rank = {node: pos for pos, node in enumerate(order)}

    def violated(a) -> bool:
        p_j = prices[a.end]
        return p_j != INF and prices[a.start] - (a.length + p_j + epsilon) > 0

    seeds = [a for a in graph.arcs if violated(a)]
    seeds.sort(key=lambda a: (-rank[a.end], -rank[a.start]))
    for seed in seeds:
        stack = [seed]
        while stack:
            a = stack.pop()
            if violated(a):
                raised = prices[a.start] - a.length - epsilon
                # float rounding can leave a residual excess of an ulp or so
                while isinstance(raised, float) and \
                        prices[a.start] - (a.length + raised + epsilon) > 0:
                    raised = math.nextafter(raised, INF)
                prices[a.end] = raised
                stack.extend(reversed(graph.out_arcs(a.end)))
    return prices


def scale_run_guaranteed(graph: Graph, s: int, t: int,
                         prices: Sequence[float] | None,
                         schedule: ScalingSchedule,
                         config: SolverConfig | None = None) -> ScalingResult:
    """Epsilon-scaling with the CS-preserving rule and price repair.

    Restricted to acyclic graphs.  The returned path is within
    ``(n + 1) * eps_min`` of shortest (``n`` = nodes other than ``s``, ``t``),
    hence exactly shortest once that is below the gap to the second-best
    path length.

    Raises:
        CyclicGraph: for graphs with a directed cycle.
        ECSViolatedOnEntry: if ``prices`` violate ``eps0``-CS.
    """
    config = config or SolverConfig()
    topological_order(graph)
    prices = validate_prices(graph, prices)
    epsilons = schedule.epsilons()
    check = check_epsilon_cs(graph, prices, [s], epsilons[0], config.tolerance)
    if not check.ok:
        raise ECSViolatedOnEntry(check.violations)
    result = ScalingResult([], prices)
    previous = None
    for k, eps in enumerate(epsilons):
        raised = 0
        if previous is not None:
            before = prices
            prices = repair_prices_acyclic(graph, prices, eps, previous)
            raised = sum(1 for x, y in zip(before, prices) if x != y)
        run = awpc_run(graph, s, t, prices,
                       _phase_config(config, schedule, k, eps), rule="cs",
                       check_cycles=False)
        prices = run.prices
        result.phases.append(PhaseStats(eps, run.iterations, run.contractions,
                                        run.path, path_length(graph, run.path),
                                        raised))
        result.path, result.prices, result.report = run.path, prices, run.report
        previous = eps
    result.bound = (graph.node_count - 1) * schedule.eps_min
    return result
