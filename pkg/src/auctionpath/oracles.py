"""Reference solvers used to check the engines.

These are deliberately plain textbook methods that read nothing but
``graph.node_count`` and ``graph.arcs`` and never call into the engine
modules.  They favour obviousness over speed.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from typing import Sequence

from .errors import Infeasible, NegativeCycle, TooLarge

INF = math.inf


def _arc_list(graph) -> list[tuple[int, int, float, float]]:
    return [(a[0], a[1], a[2], a[3]) for a in graph.arcs]


def bellman_ford_distances(graph, t: int) -> list[float] | NegativeCycle:
    """Shortest distance from every node to ``t`` (``inf`` if ``t`` is unreachable).

    A negative cycle that can reach ``t`` is returned (not raised) as a
    :class:`NegativeCycle` holding a closed witness cycle.
    """
    n = graph.node_count
    arcs = _arc_list(graph)
    dist = [INF] * n
    dist[t] = 0
    nxt: list[int | None] = [None] * n
    for _ in range(n - 1):
        changed = False
        for i, j, a, _cap in arcs:
            if dist[j] + a < dist[i]:
                dist[i] = dist[j] + a
                nxt[i] = j
                changed = True
        if not changed:
            return dist
    for i, j, a, _cap in arcs:
        if dist[j] + a < dist[i]:
            nxt[i] = j
            node = i
            for _ in range(n):
                node = nxt[node]
            cycle = [node]
            walker = nxt[node]
            while walker != node:
                cycle.append(walker)
                walker = nxt[walker]
            cycle.append(node)
            lookup = {(u, v): w for u, v, w, _c in arcs}
            length = sum(lookup[(u, v)] for u, v in zip(cycle, cycle[1:]))
            return NegativeCycle(cycle, length)
    return dist


def enumerate_paths(graph, s: int, t: int,
                    node_limit: int = 12) -> list[tuple[tuple[int, ...], float]]:
    """Every simple path from ``s`` to ``t`` with its length.

    Raises:
        TooLarge: if the graph has more than ``node_limit`` nodes.
    """
    if graph.node_count > node_limit:
        raise TooLarge(f"{graph.node_count} nodes exceeds the limit of {node_limit}")
    succ: dict[int, list[tuple[int, float]]] = {}
    for i, j, a, _cap in _arc_list(graph):
        succ.setdefault(i, []).append((j, a))
    found = []

    def walk(path: list[int], length: float) -> None:
        node = path[-1]
        if node == t:
            found.append((tuple(path), length))
            return
        for j, a in succ.get(node, ()):
            if j not in path:
                path.append(j)
                walk(path, length + a)
                path.pop()

    walk([s], 0)
    return found


def enumerate_cycles(graph, node_limit: int = 10) -> list[tuple[tuple[int, ...], float]]:
    """Every simple directed cycle, listed once from its smallest node."""
    if graph.node_count > node_limit:
        raise TooLarge(f"{graph.node_count} nodes exceeds the limit of {node_limit}")
    succ: dict[int, list[tuple[int, float]]] = {}
    for i, j, a, _cap in _arc_list(graph):
        succ.setdefault(i, []).append((j, a))
    cycles = []
    for root in range(graph.node_count):
        stack = [(root, [root], 0)]
        while stack:
            node, path, length = stack.pop()
            for j, a in succ.get(node, ()):
                if j == root:
                    cycles.append((tuple(path + [root]), length + a))
                elif j > root and j not in path:
                    stack.append((j, path + [j], length + a))
    return cycles


class _Residual:
    """Paired-edge residual network: edge ``k ^ 1`` is the reverse of ``k``."""

    def __init__(self, n: int, arcs):
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.head: list[int] = []
        self.cap: list[float] = []
        self.cost: list[float] = []
        for i, j, a, c in arcs:
            self._add(i, j, c, a)
            self._add(j, i, 0, -a)

    def _add(self, i, j, c, a):
        self.adj[i].append(len(self.head))
        self.head.append(j)
        self.cap.append(c)
        self.cost.append(a)

    def push(self, edges: list[int], amount: float) -> None:
        for k in edges:
            self.cap[k] -= amount
            self.cap[k ^ 1] += amount

    def flows(self, arcs) -> dict[tuple[int, int], float]:
        out = {}
        for idx, (i, j, _a, _c) in enumerate(arcs):
            x = self.cap[2 * idx + 1]
            if x:
                out[(i, j)] = x
        return out


def oracle_max_flow(problem) -> tuple[float, dict[tuple[int, int], float]]:
    """Edmonds-Karp: shortest augmenting paths found breadth first."""
    arcs = _arc_list(problem.graph)
    net = _Residual(problem.graph.node_count, arcs)
    s, t = problem.source, problem.sink
    value = 0
    while True:
        via: dict[int, int] = {s: -1}
        queue = deque([s])
        while queue and t not in via:
            i = queue.popleft()
            for k in net.adj[i]:
                j = net.head[k]
                if net.cap[k] > 0 and j not in via:
                    via[j] = k
                    queue.append(j)
        if t not in via:
            return value, net.flows(arcs)
        edges, node = [], t
        while node != s:
            k = via[node]
            edges.append(k)
            node = net.head[k ^ 1]
        amount = min(net.cap[k] for k in edges)
        if amount == INF:
            return INF, net.flows(arcs)
        net.push(edges, amount)
        value += amount


def oracle_min_cost_flow(problem) -> tuple[float, dict[tuple[int, int], float]]:
    """Successive shortest paths, each found with Bellman-Ford from the source.

    Raises:
        Infeasible: if the supply cannot be routed.
    """
    arcs = _arc_list(problem.graph)
    n = problem.graph.node_count
    net = _Residual(n, arcs)
    s, t, supply = problem.source, problem.sink, problem.supply
    routed = 0
    while routed < supply:
        dist = [INF] * n
        via = [-1] * n
        dist[s] = 0
        for _ in range(n - 1):
            changed = False
            for i in range(n):
                if dist[i] == INF:
                    continue
                for k in net.adj[i]:
                    j = net.head[k]
                    if net.cap[k] > 0 and dist[i] + net.cost[k] < dist[j]:
                        dist[j] = dist[i] + net.cost[k]
                        via[j] = k
                        changed = True
            if not changed:
                break
        if dist[t] == INF:
            raise Infeasible(routed, supply)
        edges, node = [], t
        while node != s:
            k = via[node]
            edges.append(k)
            node = net.head[k ^ 1]
        amount = min(min(net.cap[k] for k in edges), supply - routed)
        net.push(edges, amount)
        routed += amount
    flow = net.flows(arcs)
    cost = sum(a * flow.get((i, j), 0) for i, j, a, _c in arcs)
    return cost, flow


def brute_force_min_cost(problem, arc_limit: int = 6) -> float | None:
    """Cheapest integer flow of value ``supply`` by trying every flow vector.

    Returns ``None`` when no feasible flow exists.
    """
    arcs = _arc_list(problem.graph)
    if len(arcs) > arc_limit:
        raise TooLarge(f"{len(arcs)} arcs exceeds the limit of {arc_limit}")
    r = problem.supply
    ranges = [range(int(min(c, r)) + 1) for _i, _j, _a, c in arcs]
    best = None
    for xs in itertools.product(*ranges):
        net = [0] * problem.graph.node_count
        for (i, j, _a, _c), x in zip(arcs, xs):
            net[i] += x
            net[j] -= x
        ok = all(net[v] == (r if v == problem.source else -r if v == problem.sink else 0)
                 for v in range(len(net)))
        if ok:
            cost = sum(a * x for (_i, _j, a, _c), x in zip(arcs, xs))
            if best is None or cost < best:
                best = cost
    return best


def brute_force_assignment(costs: Sequence[Sequence[float | None]]
                           ) -> tuple[float, list[tuple[int, int]]] | None:
    """Cheapest perfect matching over all permutations (1-based pairs)."""
    n = len(costs)
    best = None
    for perm in itertools.permutations(range(n)):
        if any(costs[i][perm[i]] is None for i in range(n)):
            continue
        total = sum(costs[i][perm[i]] for i in range(n))
        if best is None or total < best[0]:
            best = (total, [(i + 1, perm[i] + 1) for i in range(n)])
    return best
