"""Auction path construction on unweighted graphs.

Finds *some* path from an origin to a destination, guided by node prices.
Arc lengths are ignored: an arc (i, j) is downhill, level or uphill purely
by comparing ``p_i`` with ``p_j``.  Prices never decrease, so the final
prices of one run are valid starting prices for the next.
"""

from __future__ import annotations

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
from .errors import AlreadyTerminated, CycleCreated, DeadendNode, Unreachable
from .graph import INF, Graph, reachable


def succ_node(graph: Graph, prices: Sequence[float], node: int,
              tie_break: str = "min-id", tolerance: float = 0.0) -> int:
    """Downstream neighbor of ``node`` with minimal price."""
    arcs = graph.out_arcs(node)
    if not arcs:
        raise DeadendNode(node)
    return pick_successor(arcs, prices, False, tolerance, tie_break).end


def _advance(graph, path, prices, eps, tol, tie):
    k = path[-1]
    arcs = graph.out_arcs(k)
    if len(path) == 1:
        if not arcs:
            raise DeadendNode(k)
        j = pick_successor(arcs, prices, False, tol, tie).end
        prices[k] = max(prices[k], prices[j] + eps)
        path.append(j)
        return "a", Action.EXTENSION, j
    if not arcs:
        prices[k] = INF
        path.pop()
        return "b", Action.CONTRACTION, path[-1]
    j = pick_successor(arcs, prices, False, tol, tie).end
    pred = path[-2]
    if prices[pred] - prices[j] > tol:
        if j in path:
            raise CycleCreated(j, list(path))
        prices[k] = prices[pred]
        path.append(j)
        return "c1", Action.EXTENSION, j
    prices[k] = prices[j] + eps
    path.pop()
    return "c2", Action.CONTRACTION, pred


def apc_step(graph: Graph, state: PathState,
             config: SolverConfig | None = None):
    """Perform one iteration on a copy of ``state``.

    Returns ``(new_state, record)`` where ``record`` describes the iteration.
    """
    config = config or SolverConfig()
    if state.done:
        raise AlreadyTerminated(f"terminal node {state.terminal} is the destination")
    new = state.copy()
    prior = (tuple(state.path), tuple(state.prices))
    case, action, node = _advance(graph, new.path, new.prices, config.epsilon,
                                  config.tolerance, config.tie_break)
    new.iteration += 1
    new.last_action = action
    if action is Action.EXTENSION:
        new.extensions += 1
    else:
        new.contractions += 1
    return new, TraceRecord(new.iteration, case, action.value, node, *prior)


def apc_run(graph: Graph, s: int, t: int,
            prices: Sequence[float] | None = None,
            config: SolverConfig | None = None) -> PathResult:
    """Construct a path from ``s`` to ``t`` starting from ``prices``.

    Raises:
        Unreachable: if no path from ``s`` to ``t`` exists.
        IterationLimitExceeded: if the configured step budget runs out.
    """
    config = config or SolverConfig()
    validate_endpoints(graph, s, t)
    if s == t:
        raise ValueError("origin and destination must differ")
    prices = validate_prices(graph, prices)
    if not reachable(graph, s, t):
        raise Unreachable(s, t)
    state = PathState.start(s, t, prices)
    trace = [] if config.trace else None
    drive(graph, state, config, _advance, lambda st: st.path[-1] == t, trace)
    if trace is not None:
        trace.append(terminate_record(graph, state, config))
    return PathResult(state.path, state.prices, state.iteration,
                      state.extensions, state.contractions, config.epsilon,
                      trace)


def satisfies_downhill_path(graph: Graph, state: PathState,
                            weighted: bool = False,
                            relaxed: bool = False,
                            tolerance: float = 0.0) -> bool:
    """Check the structural invariant of the maintained path.

    Interior arcs must be level and the last arc level after a contraction
    and downhill after an extension.  With ``relaxed`` (the CS-preserving
    variant) every arc may be level or downhill, the last one downhill after
    an extension.  ``tolerance`` absorbs rounding for non-integer data.
    """
    path, p = state.path, state.prices
    if len(set(path)) != len(path):
        return False
    if len(path) == 1:
        return True
    gaps = []
    for u, v in zip(path, path[1:]):
        a = graph.length(u, v) if weighted else 0.0
        gaps.append(p[u] - (a + p[v]))
    *inner, last = gaps
    if relaxed:
        if any(g < -tolerance for g in gaps):
            return False
    elif any(abs(g) > tolerance for g in inner):
        return False
    if state.last_action is Action.EXTENSION:
        return last > 0 or (tolerance > 0 and last > -tolerance)
    if state.last_action is Action.CONTRACTION:
        return last >= -tolerance if relaxed else abs(last) <= tolerance
    return last >= -tolerance
