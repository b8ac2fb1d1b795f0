"""Auction path construction with arc lengths.

The weighted engine compares ``p_i`` against ``a_ij + p_j``.  Two price
rules are provided for extensions out of a non-origin node:

``standard``
    the terminal node takes ``p_pred - a_pred``, making the incoming arc
    level;
``cs``
    the terminal node takes the smaller of that value and
    ``a_succ + p_succ + eps``, which keeps every arc downhill by at most
    ``eps`` when the run starts from prices with that property.  Paths
    produced this way are within ``(n + 1) * eps`` of shortest, where ``n``
    counts nodes other than origin and destination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .engine import (
    Action,
    PathResult,
    PathState,
    SolverConfig,
    TraceRecord,
    drive,
    pick_successor,
    terminate_record,
    validate_endpoints,
    validate_prices,
)
from .errors import (
    AlreadyTerminated,
    CycleCreated,
    DeadendNode,
    ECSViolatedOnEntry,
    NegativeCycle,
    Unreachable,
    UphillArcOnPath,
)
from .graph import INF, Graph, check_nonnegative_cycles, path_length, reachable

RULES = ("standard", "cs")


def succ_arc(graph: Graph, prices: Sequence[float], node: int,
             tie_break: str = "min-id", tolerance: float = 0.0) -> int:
    """Downstream neighbor ``j`` of ``node`` minimizing ``a_ij + p_j``."""
    arcs = graph.out_arcs(node)
    if not arcs:
        raise DeadendNode(node)
    return pick_successor(arcs, prices, True, tolerance, tie_break).end


def _make_advance(cs: bool):
    def advance(graph, path, prices, eps, tol, tie):
        k = path[-1]
        arcs = graph.out_arcs(k)
        if len(path) == 1:
            if not arcs:
                raise DeadendNode(k)
            arc = pick_successor(arcs, prices, True, tol, tie)
            prices[k] = max(prices[k], arc.length + prices[arc.end] + eps)
            path.append(arc.end)
            return "a", Action.EXTENSION, arc.end
        if not arcs:
            prices[k] = INF
            path.pop()
            return "b", Action.CONTRACTION, path[-1]
        arc = pick_successor(arcs, prices, True, tol, tie)
        j = arc.end
        pred = path[-2]
        a_pred = graph.length(pred, k)
        if prices[pred] - (a_pred + arc.length + prices[j]) > tol:
            if j in path:
                raise CycleCreated(j, list(path))
            level = prices[pred] - a_pred
            if cs:
                level = min(level, arc.length + prices[j] + eps)
            prices[k] = level
            path.append(j)
            return "c1", Action.EXTENSION, j
        prices[k] = arc.length + prices[j] + eps
        path.pop()
        return "c2", Action.CONTRACTION, pred

    return advance


_advance_standard = _make_advance(False)
_advance_cs = _make_advance(True)


def _step(graph, state, config, advance):
    if state.done:
        raise AlreadyTerminated(f"terminal node {state.terminal} is the destination")
    new = state.copy()
    prior = (tuple(state.path), tuple(state.prices))
    case, action, node = advance(graph, new.path, new.prices, config.epsilon,
                                 config.tolerance, config.tie_break)
    new.iteration += 1
    new.last_action = action
    if action is Action.EXTENSION:
        new.extensions += 1
    else:
        new.contractions += 1
    return new, TraceRecord(new.iteration, case, action.value, node, *prior)


def awpc_step(graph: Graph, state: PathState,
              config: SolverConfig | None = None):
    """One weighted iteration (standard rule) on a copy of ``state``."""
    return _step(graph, state, config or SolverConfig(), _advance_standard)


def awpc_step_cs(graph: Graph, state: PathState,
                 config: SolverConfig | None = None):
    """One weighted iteration with the eps-CS preserving price rise.

    Raises:
        ECSViolatedOnEntry: if ``state`` does not satisfy eps-CS.
    """
    config = config or SolverConfig()
    check = check_epsilon_cs(graph, state.prices, state.path, config.epsilon,
                             config.tolerance)
    if not check.ok:
        raise ECSViolatedOnEntry(check.violations)
    return _step(graph, state, config, _advance_cs)


def awpc_run(graph: Graph, s: int, t: int,
             prices: Sequence[float] | None = None,
             config: SolverConfig | None = None,
             rule: str = "standard",
             check_cycles: bool = True) -> PathResult:
    """Construct a near-shortest path from ``s`` to ``t``.

    The result carries a :class:`DiscrepancyReport` in ``report``.

    Raises:
        Unreachable, NegativeCycle, IterationLimitExceeded,
        ECSViolatedOnEntry: the last only for ``rule="cs"``.
    """
    config = config or SolverConfig()
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}")
    validate_endpoints(graph, s, t)
    if s == t:
        raise ValueError("origin and destination must differ")
    prices = validate_prices(graph, prices)
    if not reachable(graph, s, t):
        raise Unreachable(s, t)
    if check_cycles:
        cyc = check_nonnegative_cycles(graph)
        if not cyc.ok:
            raise NegativeCycle(cyc.cycle, cyc.length)
    if rule == "cs":
        check = check_epsilon_cs(graph, prices, [s], config.epsilon,
                                 config.tolerance)
        if not check.ok:
            raise ECSViolatedOnEntry(check.violations)
    advance = _advance_cs if rule == "cs" else _advance_standard
    state = PathState.start(s, t, prices)
    trace = [] if config.trace else None
    drive(graph, state, config, advance, lambda st: st.path[-1] == t, trace)
    if trace is not None:
        trace.append(terminate_record(graph, state, config))
    return PathResult(state.path, state.prices, state.iteration,
                      state.extensions, state.contractions, config.epsilon,
                      trace, discrepancies(graph, state.prices, state.path),
                      {"rule": rule})


@dataclass
class DiscrepancyReport:
    """Per-arc discrepancies ``max(0, p_i - a_ij - p_j)`` and path figures."""

    residuals: dict[tuple[int, int], float]
    max_discrepancy: float
    prices: tuple[float, ...]
    path: tuple[int, ...] | None = None
    path_length: float | None = None
    price_gap: float | None = None

    def to_dict(self) -> dict:
        return {
            "max_discrepancy": self.max_discrepancy,
            "path_length": self.path_length,
            "price_gap": self.price_gap,
            "residuals": [[i, j, r] for (i, j), r in self.residuals.items()],
        }


def _discrepancy(p_i: float, a: float, p_j: float) -> float:
    if p_j == INF:
        return 0.0
    if p_i == INF:
        return INF
    return max(0.0, p_i - a - p_j)


def discrepancies(graph: Graph, prices: Sequence[float],
                  path: Sequence[int] | None = None) -> DiscrepancyReport:
    residuals = {(a.start, a.end): _discrepancy(prices[a.start], a.length,
                                                prices[a.end])
                 for a in graph.arcs}
    b = max(residuals.values(), default=0.0)
    report = DiscrepancyReport(residuals, b, tuple(prices))
    if path is not None:
        report.path = tuple(path)
        report.path_length = path_length(graph, path)
        report.price_gap = prices[path[0]] - prices[path[-1]]
    return report


@dataclass(frozen=True)
class SuboptimalityBound:
    bound: float
    coarse_bound: float
    path_length: float
    reference_length: float


def suboptimality_bound(graph: Graph, report: DiscrepancyReport,
                        reference: Sequence[int]) -> SuboptimalityBound:
    """Bound the returned path's length by any reference path.

    ``bound`` is the reference length plus the discrepancies along the
    reference path; ``coarse_bound`` replaces the sum by ``(n + 1) * b``.

    Raises:
        UphillArcOnPath: if an arc of the reported path is uphill.
        AssertionError: if the returned path exceeds ``bound``.
    """
    if report.path is None:
        raise ValueError("report carries no path")
    p = report.prices
    for u, v in zip(report.path, report.path[1:]):
        if p[u] < graph.length(u, v) + p[v]:
            raise UphillArcOnPath(u, v)
    ref_len = path_length(graph, reference)
    bound = ref_len + sum(report.residuals[(u, v)]
                          for u, v in zip(reference, reference[1:]))
    n = graph.node_count - 2
    coarse = ref_len + (n + 1) * report.max_discrepancy
    slack = 1e-9 * max(1.0, abs(bound))
    assert report.path_length <= bound + slack, (report.path_length, bound)
    return SuboptimalityBound(bound, coarse, report.path_length, ref_len)


@dataclass(frozen=True)
class Violation:
    start: int
    end: int
    kind: str  # "arc": downhill by more than eps; "path": uphill path arc
    magnitude: float


@dataclass
class ECSCheck:
    ok: bool
    violations: list[Violation] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def arcs(self) -> set[tuple[int, int]]:
        return {(v.start, v.end) for v in self.violations}


def check_epsilon_cs(graph: Graph, prices: Sequence[float],
                     path: Sequence[int], epsilon: float,
                     tolerance: float = 0.0) -> ECSCheck:
    """Every arc downhill by at most ``epsilon``; path arcs not uphill."""
    violations = []
    for a in graph.arcs:
        p_i, p_j = prices[a.start], prices[a.end]
        if p_j == INF:
            continue
        excess = INF if p_i == INF else p_i - (a.length + p_j + epsilon)
        if excess > tolerance:
            violations.append(Violation(a.start, a.end, "arc", excess))
    for u, v in zip(path, path[1:]):
        p_i, p_j = prices[u], prices[v]
        if p_i == INF:
            continue
        short = INF if p_j == INF else graph.length(u, v) + p_j - p_i
        if short > tolerance:
            violations.append(Violation(u, v, "path", short))
    return ECSCheck(not violations, violations)
