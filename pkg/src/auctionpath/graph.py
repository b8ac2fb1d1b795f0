"""Directed graph model, arc classification and residual graphs.

Nodes are dense integers ``0 .. N-1``.  Every arc carries a length (0 for
unweighted problems) and a capacity (``math.inf`` when unbounded).  Graphs
are immutable once built; all solvers share them freely.
"""

from __future__ import annotations

import enum
import math
import numbers
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    CapacityViolated,
    CyclicGraph,
    DuplicateArc,
    GraphError,
    NodeOutOfRange,
    SelfArc,
)

INF = math.inf


class Arc(NamedTuple):
    start: int
    end: int
    length: float = 0.0
    capacity: float = INF


class Slope(enum.Enum):
    DOWNHILL = "downhill"
    LEVEL = "level"
    UPHILL = "uphill"


class Graph:
    """Immutable directed graph with forward and reverse adjacency."""

    __slots__ = ("node_count", "arcs", "_out", "_in", "_index")

    def __init__(self, node_count: int, arcs: Iterable[Arc]):
        arcs = tuple(arcs)
        out: list[list[Arc]] = [[] for _ in range(node_count)]
        inc: list[list[Arc]] = [[] for _ in range(node_count)]
        index: dict[tuple[int, int], Arc] = {}
        for arc in arcs:
            for node in (arc.start, arc.end):
                if not 0 <= node < node_count:
                    raise NodeOutOfRange(node, node_count)
            if arc.start == arc.end:
                raise SelfArc(arc.start)
            key = (arc.start, arc.end)
            if key in index:
                raise DuplicateArc(*key)
            if math.isnan(arc.length) or arc.length == -INF:
                raise GraphError(f"arc {key} has invalid length {arc.length!r}")
            if not arc.capacity > 0:
                raise GraphError(
                    f"arc {key} has non-positive capacity {arc.capacity!r}")
            index[key] = arc
            out[arc.start].append(arc)
            inc[arc.end].append(arc)
        object.__setattr__(self, "node_count", node_count)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "_out", tuple(tuple(a) for a in out))
        object.__setattr__(self, "_in", tuple(tuple(a) for a in inc))
        object.__setattr__(self, "_index", index)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def out_arcs(self, node: int) -> tuple[Arc, ...]:
        return self._out[node]

    def in_arcs(self, node: int) -> tuple[Arc, ...]:
        return self._in[node]

    def arc(self, start: int, end: int) -> Arc:
        return self._index[(start, end)]

    def has_arc(self, start: int, end: int) -> bool:
        return (start, end) in self._index

    def length(self, start: int, end: int) -> float:
        return self._index[(start, end)].length

    def is_deadend(self, node: int) -> bool:
        return not self._out[node]

    def deadends(self) -> list[int]:
        return [i for i in range(self.node_count) if not self._out[i]]

    def successors(self, node: int) -> list[int]:
        return [a.end for a in self._out[node]]

    def arc_map(self) -> dict[tuple[int, int], Arc]:
        return dict(self._index)

    def without(self, *pairs: tuple[int, int]) -> Graph:
        """Copy of the graph with the listed arcs removed."""
        drop = set(pairs)
        return Graph(self.node_count,
                     [a for a in self.arcs if (a.start, a.end) not in drop])

    def __len__(self) -> int:
        return len(self.arcs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.node_count == other.node_count
                and self._index == other._index)

    def __hash__(self) -> int:
        return hash((self.node_count, frozenset(self._index.values())))

    def __repr__(self) -> str:
        return f"Graph(node_count={self.node_count}, arcs={len(self.arcs)})"


class ResidualGraph(Graph):
    """Residual graph that remembers which original arc each arc came from.

    ``origin[(u, v)]`` is ``(i, j, True)`` for a surviving forward arc of
    ``(i, j)`` and ``(i, j, False)`` for the reversal of ``(i, j)``.
    """

    __slots__ = ("origin",)

    def __init__(self, node_count: int, arcs: Iterable[Arc],
                 origin: Mapping[tuple[int, int], tuple[int, int, bool]]):
        super().__init__(node_count, arcs)
        object.__setattr__(self, "origin", dict(origin))


def as_number(value):
    """Keep real numbers as given (ints, floats, Fractions); parse the rest."""
    if isinstance(value, numbers.Real) and not isinstance(value, bool):
        return value
    return float(value)


def _coerce_arc(item) -> Arc:
    if isinstance(item, Arc):
        return item
    item = tuple(item)
    if not 2 <= len(item) <= 4:
        raise GraphError(f"cannot interpret {item!r} as an arc")
    start, end, *rest = item
    return Arc(int(start), int(end), *(as_number(v) for v in rest))


def build_graph(node_count: int, arcs: Iterable) -> Graph:
    """Build a validated graph.

    ``arcs`` holds :class:`Arc` values or tuples ``(i, j)``,
    ``(i, j, length)`` or ``(i, j, length, capacity)``.

    Raises:
        DuplicateArc, SelfArc, NodeOutOfRange: on malformed arc lists.
        GraphError: if the arc list is empty or ``node_count < 2``.
    """
    arcs = [_coerce_arc(a) for a in arcs]
    if node_count < 2:
        raise GraphError("a graph needs at least two nodes")
    if not arcs:
        raise GraphError("arc list is empty")
    return Graph(node_count, arcs)


def _slope(p_i: float, length: float, p_j: float, tolerance: float) -> Slope:
    if p_j == INF:
        return Slope.UPHILL
    if p_i == INF:
        return Slope.DOWNHILL
    gap = p_i - (length + p_j)
    if gap > tolerance:
        return Slope.DOWNHILL
    if gap < -tolerance:
        return Slope.UPHILL
    return Slope.LEVEL


def classify_arc(arc: Arc, prices: Sequence[float],
                 tolerance: float = 0.0) -> Slope:
    """Downhill iff ``p_i > a_ij + p_j``, level iff equal, uphill otherwise.

    An arc into an infinitely priced node is always uphill.
    """
    return _slope(prices[arc.start], arc.length, prices[arc.end], tolerance)


@dataclass(frozen=True)
class CycleCheck:
    ok: bool
    cycle: list[int] | None = None
    length: float | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_nonnegative_cycles(graph: Graph) -> CycleCheck:
    """Detect a directed cycle of negative total length.

    Bellman-Ford from a virtual root joined to every node.  On failure the
    witness cycle is returned closed, e.g. ``[1, 2, 1]``.
    """
    n = graph.node_count
    dist = [0.0] * n
    pred: list[int | None] = [None] * n
    changed = None
    for _ in range(n):
        changed = None
        for a in graph.arcs:
            cand = dist[a.start] + a.length
            if cand < dist[a.end]:
                dist[a.end] = cand
                pred[a.end] = a.start
                changed = a.end
        if changed is None:
            return CycleCheck(True)
    node = changed
    for _ in range(n):
        node = pred[node]
    cycle = [node]
    walker = pred[node]
    while walker != node:
        cycle.append(walker)
        walker = pred[walker]
    cycle.append(node)
    cycle.reverse()
    total = sum(graph.length(u, v) for u, v in zip(cycle, cycle[1:]))
    return CycleCheck(False, cycle, total)


def reachable(graph: Graph, s: int, t: int) -> bool:
    """True iff a directed path from ``s`` to ``t`` exists."""
    return t in reachable_set(graph, s)


def reachable_set(graph: Graph, s: int) -> set[int]:
    seen = {s}
    queue = deque([s])
    while queue:
        i = queue.popleft()
        for a in graph.out_arcs(i):
            if a.end not in seen:
                seen.add(a.end)
                queue.append(a.end)
    return seen


def topological_order(graph: Graph) -> list[int]:
    """Kahn's algorithm; raises :class:`CyclicGraph` if a cycle exists."""
    indeg = [len(graph.in_arcs(i)) for i in range(graph.node_count)]
    queue = deque(i for i in range(graph.node_count) if indeg[i] == 0)
    order = []
    while queue:
        i = queue.popleft()
        order.append(i)
        for a in graph.out_arcs(i):
            indeg[a.end] -= 1
            if indeg[a.end] == 0:
                queue.append(a.end)
    if len(order) != graph.node_count:
        raise CyclicGraph("graph contains a directed cycle")
    return order


def is_acyclic(graph: Graph) -> bool:
    try:
        topological_order(graph)
    except CyclicGraph:
        return False
    return True


def path_length(graph: Graph, path: Sequence[int]) -> float:
    """Total length of ``path``; raises ``KeyError`` for a missing arc."""
    return sum(graph.length(u, v) for u, v in zip(path, path[1:]))


def is_path(graph: Graph, path: Sequence[int]) -> bool:
    return all(graph.has_arc(u, v) for u, v in zip(path, path[1:]))


def residual_graph(graph: Graph,
                   flow: Mapping[tuple[int, int], float]) -> ResidualGraph:
    """Reduced graph of ``flow``.

    Forward arc (i, j) survives with capacity ``c - x`` while ``x < c``; a
    reversed arc (j, i) of length ``-a_ij`` and capacity ``x`` appears while
    ``x > 0``.  When both a forward and a reversed arc land on the same
    ordered pair the shorter one is kept (forward on ties).
    """
    chosen: dict[tuple[int, int], tuple[Arc, tuple[int, int, bool]]] = {}

    def offer(arc: Arc, source: tuple[int, int, bool]) -> None:
        key = (arc.start, arc.end)
        held = chosen.get(key)
        if (held is None or arc.length < held[0].length
                or (arc.length == held[0].length and source[2])):
            chosen[key] = (arc, source)

    for key in flow:
        if key not in graph._index:
            raise GraphError(f"flow given on unknown arc {key}")
    for a in graph.arcs:
        x = flow.get((a.start, a.end), 0)
        if not 0 <= x <= a.capacity:
            raise CapacityViolated(a.start, a.end, x, a.capacity)
        if x < a.capacity:
            offer(Arc(a.start, a.end, a.length, a.capacity - x),
                  (a.start, a.end, True))
        if x > 0:
            offer(Arc(a.end, a.start, -a.length, x), (a.start, a.end, False))
    arcs = [arc for arc, _ in chosen.values()]
    origin = {key: src for key, (_, src) in chosen.items()}
    return ResidualGraph(graph.node_count, arcs, origin)
