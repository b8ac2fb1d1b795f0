"""Text formats: problem files, price files, JSON-lines traces.

Problem files use 1-based node ids::

    c any comment
    p auct <nodes> <arcs>
    n <id> source
    n <id> sink
    a <i> <j> <length> [<capacity>]
    r <supply>

Internally nodes are 0-based; the conversion happens here and nowhere else.
Numbers accept integers, decimals, fractions such as ``16/5`` and ``inf``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

from .engine import TraceRecord
from .errors import DuplicateArc, GraphError, ParseError
from .graph import INF, Arc, Graph, build_graph


@dataclass(frozen=True)
class ProblemFile:
    graph: Graph
    source: int | None = None
    sink: int | None = None
    supply: float | None = None


def parse_number(token: str, line: int | None = None):
    low = token.lower()
    if low in ("inf", "+inf", "infinity"):
        return INF
    try:
        if "/" in token:
            return Fraction(token)
        if any(c in low for c in ".e") or low in ("nan", "-inf"):
            value = float(token)
        else:
            value = int(token)
    except ValueError:
        raise ParseError(f"not a number: {token!r}", line) from None
    if isinstance(value, float) and (math.isnan(value) or value == -INF):
        raise ParseError(f"not an admissible number: {token!r}", line)
    return value


def format_number(value) -> str:
    """Shortest text that parses back to the same value."""
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else str(value)
    if isinstance(value, float):
        if value == INF:
            return "inf"
        if value.is_integer() and abs(value) < 1e16:
            return str(int(value))
        return repr(value)
    return str(value)


def _node(token: str, count: int | None, line: int) -> int:
    try:
        node = int(token)
    except ValueError:
        raise ParseError(f"bad node id {token!r}", line) from None
    if count is not None and not 1 <= node <= count:
        raise ParseError(f"node {node} outside 1..{count}", line)
    return node - 1


def parse_graph_file(text: str) -> ProblemFile:
    """Parse a problem file.

    Raises:
        ParseError: on malformed lines, with ``line`` set to the offending
            line number; a malformed arc keeps the underlying graph error as
            ``__cause__``.
    """
    count = declared_arcs = None
    source = sink = supply = None
    arcs: list[Arc] = []
    arc_lines: dict[tuple[int, int], int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split()
        if not fields or fields[0] == "c":
            continue
        kind, rest = fields[0], fields[1:]
        if kind == "p":
            if count is not None:
                raise ParseError("second problem line", number)
            if len(rest) != 3 or rest[0] != "auct":
                raise ParseError("expected 'p auct <nodes> <arcs>'", number)
            try:
                count, declared_arcs = int(rest[1]), int(rest[2])
            except ValueError:
                raise ParseError("node and arc counts must be integers", number) from None
            if count < 2:
                raise ParseError("a problem needs at least two nodes", number)
            continue
        if count is None:
            raise ParseError("problem line must come first", number)
        if kind == "n":
            if len(rest) != 2 or rest[1] not in ("source", "sink"):
                raise ParseError("expected 'n <id> source|sink'", number)
            node = _node(rest[0], count, number)
            if rest[1] == "source":
                source = node
            else:
                sink = node
        elif kind == "a":
            if len(rest) not in (3, 4):
                raise ParseError("expected 'a <i> <j> <length> [<capacity>]'", number)
            i, j = _node(rest[0], count, number), _node(rest[1], count, number)
            values = [parse_number(tok, number) for tok in rest[2:]]
            try:
                arc = Arc(i, j, *values)
                Graph(count, [arc])
            except GraphError as exc:
                raise ParseError(
                    f"bad arc ({i + 1}, {j + 1}): {type(exc).__name__}", number) from exc
            if (i, j) in arc_lines:
                raise ParseError(
                    f"arc ({i + 1}, {j + 1}) repeats line {arc_lines[(i, j)]}",
                    number) from DuplicateArc(i, j)
            arc_lines[(i, j)] = number
            arcs.append(arc)
        elif kind == "r":
            if len(rest) != 1:
                raise ParseError("expected 'r <amount>'", number)
            supply = parse_number(rest[0], number)
        else:
            raise ParseError(f"unknown line type {kind!r}", number)
    if count is None:
        raise ParseError("missing problem line")
    if declared_arcs is not None and declared_arcs != len(arcs):
        raise ParseError(f"problem line declares {declared_arcs} arcs, found {len(arcs)}")
    try:
        graph = build_graph(count, arcs)
    except GraphError as exc:
        raise ParseError(str(exc)) from exc
    return ProblemFile(graph, source, sink, supply)


def format_graph(graph: Graph, source: int | None = None, sink: int | None = None,
                 supply: float | None = None) -> str:
    lines = [f"p auct {graph.node_count} {len(graph.arcs)}"]
    if source is not None:
        lines.append(f"n {source + 1} source")
    if sink is not None:
        lines.append(f"n {sink + 1} sink")
    for a in graph.arcs:
        line = f"a {a.start + 1} {a.end + 1} {format_number(a.length)}"
        if a.capacity != INF:
            line += f" {format_number(a.capacity)}"
        lines.append(line)
    if supply is not None:
        lines.append(f"r {format_number(supply)}")
    return "\n".join(lines) + "\n"


def load_prices(text: str, node_count: int) -> list:
    """Read ``n <id> <price>`` lines; unlisted nodes get price 0."""
    prices: list = [0] * node_count
    for number, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split()
        if not fields or fields[0] == "c":
            continue
        if fields[0] != "n" or len(fields) != 3:
            raise ParseError("expected 'n <id> <price>'", number)
        prices[_node(fields[1], node_count, number)] = parse_number(fields[2], number)
    return prices


def save_prices(prices: Sequence) -> str:
    return "".join(f"n {i + 1} {format_number(p)}\n" for i, p in enumerate(prices))


def jsonable(value):
    """Convert numbers and containers for JSON; infinity becomes ``"inf"``."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        value = float(value)
    if isinstance(value, float):
        if value == INF:
            return "inf"
        if value.is_integer() and abs(value) < 1e16:
            return int(value)
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), separators=(",", ":"))


def trace_to_dict(record: TraceRecord, offset: int = 1) -> dict:
    """Record as a JSON-ready dict with node ids shifted by ``offset``."""
    d = record.to_dict()
    d["path"] = [i + offset for i in record.path]
    if record.node is not None:
        d["node"] = record.node + offset
    if d.get("prices") is None:
        d.pop("prices", None)
    return jsonable(d)


def write_trace(records: Iterable[TraceRecord], stream: TextIO, offset: int = 1) -> None:
    for rec in records:
        stream.write(json.dumps(trace_to_dict(rec, offset), separators=(",", ":")))
        stream.write("\n")


def read_trace(text: str, offset: int = 1) -> list[TraceRecord]:
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            d = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad trace record: {exc.msg}", number) from None
        d["path"] = [i - offset for i in d["path"]]
        if d.get("node") is not None:
            d["node"] -= offset
        if d.get("prices") is not None:
            d["prices"] = [INF if p == "inf" else p for p in d["prices"]]
        out.append(TraceRecord.from_dict(d))
    return out
