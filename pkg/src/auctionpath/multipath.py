"""Several destinations from one origin, or several origins into one destination.

Both drivers keep a single price vector across all the paths they build,
so later searches start from the prices earlier ones have learned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import apc, awpc
from .engine import (
    Action,
    PathState,
    SolverConfig,
    TraceRecord,
    drive,
    validate_endpoints,
    validate_prices,
)
from .errors import ECSViolatedOnEntry, NegativeCycle, Unreachable
from .graph import Graph, check_nonnegative_cycles, reachable_set

ENGINES = ("apc", "awpc", "awpc-cs")


def _prepare(graph: Graph, engine: str, prices, config: SolverConfig, origin: int):
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    prices = validate_prices(graph, prices)
    if engine == "apc":
        return apc._advance, prices
    cyc = check_nonnegative_cycles(graph)
    if not cyc.ok:
        raise NegativeCycle(cyc.cycle, cyc.length)
    if engine == "awpc-cs":
        check = awpc.check_epsilon_cs(graph, prices, [origin], config.epsilon,
                                      config.tolerance)
        if not check.ok:
            raise ECSViolatedOnEntry(check.violations)
        return awpc._advance_cs, prices
    return awpc._advance_standard, prices


@dataclass
class MultiDestinationResult:
    paths: dict[int, list[int]]
    prices: list[float]
    order: list[int]
    iterations: int
    trace: list[TraceRecord] | None = None


def run_multi_destination(graph: Graph, s: int, destinations: Iterable[int],
                          prices: Sequence[float] | None = None,
                          config: SolverConfig | None = None,
                          engine: str = "apc") -> MultiDestinationResult:
    """Build paths from ``s`` to every listed destination.

    The search stops as soon as the terminal node is any destination not yet
    reached; that path is recorded, the path restarts at ``s`` and the
    prices are kept.  ``order`` lists destinations in the order reached.

    Raises:
        Unreachable: naming the first destination ``s`` cannot reach.
    """
    config = config or SolverConfig()
    pending = list(dict.fromkeys(destinations))
    validate_endpoints(graph, s, *pending)
    if s in pending:
        raise ValueError("origin cannot be one of the destinations")
    if not pending:
        return MultiDestinationResult({}, validate_prices(graph, prices), [], 0)
    seen = reachable_set(graph, s)
    for d in pending:
        if d not in seen:
            raise Unreachable(s, d)
    advance, prices = _prepare(graph, engine, prices, config, s)
    remaining = set(pending)
    trace = [] if config.trace else None
    limit = config.limit_for(graph) * len(pending)
    paths: dict[int, list[int]] = {}
    order: list[int] = []
    total = 0
    while remaining:
        state = PathState([s], prices, -1, iteration=total)
        drive(graph, state, config, advance,
              lambda st: st.path[-1] in remaining, trace, limit)
        reached = state.path[-1]
        paths[reached] = list(state.path)
        order.append(reached)
        remaining.discard(reached)
        total = state.iteration
        prices = state.prices
    return MultiDestinationResult(paths, prices, order, total, trace)


@dataclass
class PathTree:
    """Paths from several origins to one destination.

    ``junctions[o] = (earlier, node)`` records that the path of origin ``o``
    joined the path of ``earlier`` at ``node`` and reuses its tail.
    """

    destination: int
    paths: dict[int, list[int]] = field(default_factory=dict)
    junctions: dict[int, tuple[int, int]] = field(default_factory=dict)
    iterations: dict[int, int] = field(default_factory=dict)
    prices: list[float] = field(default_factory=list)

    @property
    def total_iterations(self) -> int:
        return sum(self.iterations.values())

    def tail(self, origin: int, node: int) -> list[int]:
        path = self.paths[origin]
        return path[path.index(node):]


def run_multi_origin_tree(graph: Graph, origins: Sequence[int], t: int,
                          prices: Sequence[float] | None = None,
                          config: SolverConfig | None = None,
                          engine: str = "apc") -> PathTree:
    """Build paths from each origin to ``t``, reusing earlier paths.

    Origins are processed in the given order.  When an extension lands on a
    node of an already completed path, the current path is joined to that
    path's tail and the origin is done.  A join that would repeat a node is
    skipped and the search carries on.

    Raises:
        Unreachable: naming the first origin that cannot reach ``t``.
    """
    config = config or SolverConfig()
    origins = list(dict.fromkeys(origins))
    validate_endpoints(graph, t, *origins)
    if t in origins:
        raise ValueError("destination cannot be one of the origins")
    for o in origins:
        if t not in reachable_set(graph, o):
            raise Unreachable(o, t)
    advance, prices = _prepare(graph, engine, prices,
                               config, origins[0] if origins else t)
    tree = PathTree(t, prices=prices)
    owner: dict[int, int] = {}  # node -> origin of the first stored path through it

    def joinable(st: PathState) -> bool:
        node = st.path[-1]
        if node == t or node not in owner:
            return False
        if st.last_action is Action.CONTRACTION:
            return False
        tail = tree.tail(owner[node], node)
        return not set(st.path[:-1]) & set(tail)

    for o in origins:
        state = PathState([o], prices, t)
        drive(graph, state, config, advance,
              lambda st: st.path[-1] == t or joinable(st))
        node = state.path[-1]
        if node == t:
            path = list(state.path)
        else:
            first = owner[node]
            path = state.path[:-1] + tree.tail(first, node)
            tree.junctions[o] = (first, node)
        tree.paths[o] = path
        tree.iterations[o] = state.iteration
        for v in path:
            owner.setdefault(v, o)
        prices = state.prices
    tree.prices = prices
    return tree
