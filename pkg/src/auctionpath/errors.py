"""Exception hierarchy shared by every solver in the package."""

from __future__ import annotations


class AuctionError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(AuctionError, ValueError):
    """The graph violates a structural requirement."""


class DuplicateArc(GraphError):
    def __init__(self, start: int, end: int):
        super().__init__(f"duplicate arc ({start}, {end})")
        self.start = start
        self.end = end


class SelfArc(GraphError):
    def __init__(self, node: int):
        super().__init__(f"self arc ({node}, {node}) is not allowed")
        self.node = node


class NodeOutOfRange(GraphError):
    def __init__(self, node: int, node_count: int):
        super().__init__(f"node {node} outside [0, {node_count})")
        self.node = node
        self.node_count = node_count


class CapacityViolated(GraphError):
    def __init__(self, start: int, end: int, flow: float, capacity: float):
        super().__init__(
            f"flow {flow!r} on arc ({start}, {end}) outside [0, {capacity!r}]")
        self.arc = (start, end)
        self.flow = flow
        self.capacity = capacity


class CyclicGraph(GraphError):
    """An operation restricted to acyclic graphs received a cyclic one."""


class NegativeCycle(AuctionError):
    """A directed cycle of negative total length exists."""

    def __init__(self, cycle: list[int], length: float):
        super().__init__(f"negative cycle {cycle} of length {length!r}")
        self.cycle = cycle
        self.length = length


class SolverError(AuctionError):
    """A path construction could not proceed."""


class DeadendNode(SolverError):
    def __init__(self, node: int):
        super().__init__(f"node {node} has no downstream neighbors")
        self.node = node


class AlreadyTerminated(SolverError):
    """A step was requested on a path whose terminal node is the destination."""


class CycleCreated(SolverError):
    """An extension would revisit a node already on the path."""

    def __init__(self, node: int, path: list[int]):
        super().__init__(f"extension to {node} would close a cycle on {path}")
        self.node = node
        self.path = path


class Unreachable(SolverError):
    def __init__(self, origin: int, destination: int):
        super().__init__(f"node {destination} is not reachable from {origin}")
        self.origin = origin
        self.destination = destination


class IterationLimitExceeded(SolverError):
    def __init__(self, limit: int):
        super().__init__(f"iteration limit {limit} exceeded")
        self.limit = limit


class ECSViolatedOnEntry(SolverError):
    def __init__(self, violations: list):
        super().__init__(
            f"initial prices violate epsilon-CS on {len(violations)} arc(s)")
        self.violations = violations


class NotEntryFeasible(SolverError):
    """Prices handed to the repair procedure do not meet its entry condition."""


class UphillArcOnPath(SolverError):
    def __init__(self, start: int, end: int):
        super().__init__(f"path arc ({start}, {end}) is uphill")
        self.arc = (start, end)


class AmountExceedsResidual(SolverError):
    def __init__(self, amount: float, available: float):
        super().__init__(
            f"augmentation of {amount!r} exceeds residual capacity {available!r}")
        self.amount = amount
        self.available = available


class Infeasible(SolverError):
    def __init__(self, routed: float, supply: float):
        super().__init__(
            f"only {routed!r} of the required {supply!r} units can be routed")
        self.routed = routed
        self.supply = supply


class TooLarge(AuctionError, ValueError):
    """An exhaustive oracle refused an instance above its size limit."""


class ParseError(AuctionError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
