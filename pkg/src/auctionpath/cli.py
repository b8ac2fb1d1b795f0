"""Command-line front end.

Exit codes: 0 success, 1 other solver or graph error, 2 usage or input
error, 3 infeasible or unreachable, 4 iteration limit exceeded.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence, TextIO

from . import io as fmt
from .apc import apc_run
from .awpc import RULES, awpc_run
from .engine import TIE_BREAKS, SolverConfig
from .errors import (
    AuctionError,
    Infeasible,
    IterationLimitExceeded,
    ParseError,
    Unreachable,
)
from .graph import INF, path_length
from .oracles import bellman_ford_distances, oracle_max_flow, oracle_min_cost_flow
from .scaling import ScalingSchedule, default_schedule, scale_run_guaranteed, scale_run_naive
from .transport import (
    FlowProblem,
    solve_assignment,
    solve_feasible_flow,
    solve_max_flow,
    solve_min_cost_flow,
)


class UsageError(Exception):
    pass


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("file", help="problem file")
    parser.add_argument("--epsilon", type=float, default=1.0)
    parser.add_argument("--eps0", type=float)
    parser.add_argument("--theta", type=float, default=0.25)
    parser.add_argument("--eps-min", type=float)
    parser.add_argument("--prices", help="starting prices file")
    parser.add_argument("--save-prices", help="write final prices here")
    parser.add_argument("--trace", help="write JSON-lines trace to a file, or - for stdout")
    parser.add_argument("--tie-break", choices=TIE_BREAKS, default="min-id")
    parser.add_argument("--iter-limit", type=int)
    parser.add_argument("--tolerance", type=float, default=0.0)
    parser.add_argument("--json", action="store_true", help="print one JSON object")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="auctionpath",
                                     description="Auction-style path and flow solvers.")
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("path", help="find a path, ignoring lengths"))
    p = sub.add_parser("wpath", help="find a near-shortest path")
    _common(p)
    p.add_argument("--rule", choices=RULES, default="standard")
    p = sub.add_parser("scale", help="near-shortest path with epsilon-scaling")
    _common(p)
    p.add_argument("--rule", choices=RULES, default="standard")
    p.add_argument("--guaranteed", action="store_true",
                   help="CS-preserving rule with price repair (acyclic graphs)")
    p = sub.add_parser("flow", help="flow problems")
    p.add_argument("kind", choices=("feasible", "max", "mincost"))
    _common(p)
    p.add_argument("--rescale", choices=("first", "each"), default="first")
    p = sub.add_parser("assign", help="min-cost assignment from a cost matrix file")
    _common(p)
    p = sub.add_parser("oracle", help="reference solvers")
    p.add_argument("kind", choices=("sp", "maxflow", "mincost"))
    _common(p)
    return parser


def _config(args, trace: bool = False) -> SolverConfig:
    try:
        return SolverConfig(epsilon=args.epsilon, tie_break=args.tie_break,
                            iteration_limit=args.iter_limit, tolerance=args.tolerance,
                            trace=trace)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _schedule(args, graph) -> ScalingSchedule:
    eps_min = args.eps_min if args.eps_min is not None else args.epsilon
    try:
        if args.eps0 is None:
            return default_schedule(graph, eps_min, args.theta)
        return ScalingSchedule(args.eps0, args.theta, eps_min)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _problem(args):
    problem = fmt.parse_graph_file(_read(args.file))
    if problem.source is None or problem.sink is None:
        raise UsageError("problem file must name a source and a sink")
    prices = None
    if args.prices:
        prices = fmt.load_prices(_read(args.prices), problem.graph.node_count)
    return problem, prices


def _ids(path) -> list[int]:
    return [i + 1 for i in path]


def _flows(flow) -> list[list]:
    return [[i + 1, j + 1, x] for (i, j), x in sorted(flow.items())]


def parse_cost_matrix(text: str) -> list[list]:
    """Whitespace-separated rows; ``-`` marks a forbidden pair."""
    rows = []
    for number, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split()
        if not fields or fields[0] == "c":
            continue
        rows.append([None if tok == "-" else fmt.parse_number(tok, number)
                     for tok in fields])
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ParseError("cost matrix must be square and non-empty")
    return rows


def _emit_trace(args, records, out: TextIO) -> None:
    if not args.trace or records is None:
        return
    if args.trace == "-":
        fmt.write_trace(records, out)
    else:
        try:
            with open(args.trace, "w", encoding="utf-8") as fh:
                fmt.write_trace(records, fh)
        except OSError as exc:
            raise UsageError(f"cannot write {args.trace}: {exc.strerror}") from None


def _path_result(run, graph) -> dict:
    out = {
        "path": _ids(run.path),
        "path_length": path_length(graph, run.path),
        "iterations": run.iterations,
        "extensions": run.extensions,
        "contractions": run.contractions,
        "epsilon": run.epsilon,
        "prices": run.prices,
    }
    if run.trace is not None:
        out["trace_records"] = len(run.trace)
    if run.report is not None:
        out["discrepancy"] = run.report.to_dict()
        out["discrepancy"]["residuals"] = [[i + 1, j + 1, r]
                                           for i, j, r in out["discrepancy"]["residuals"]]
    return out


def _cmd_path(args, out):
    problem, prices = _problem(args)
    cfg = _config(args, trace=bool(args.trace))
    g, s, t = problem.graph, problem.source, problem.sink
    if args.command == "path":
        run = apc_run(g, s, t, prices, cfg)
    else:
        run = awpc_run(g, s, t, prices, cfg, rule=args.rule)
    _emit_trace(args, run.trace, out)
    return _path_result(run, g), run.prices


def _cmd_scale(args, out):
    problem, prices = _problem(args)
    g, s, t = problem.graph, problem.source, problem.sink
    cfg = _config(args)
    schedule = _schedule(args, g)
    if args.guaranteed:
        res = scale_run_guaranteed(g, s, t, prices, schedule, cfg)
    else:
        res = scale_run_naive(g, s, t, prices, schedule, args.rule, cfg)
    result = {
        "path": _ids(res.path),
        "path_length": path_length(g, res.path),
        "iterations": res.iterations,
        "prices": res.prices,
        "phases": [dict(p.to_dict(), path=_ids(p.path)) for p in res.phases],
        "mode": "guaranteed" if args.guaranteed else "naive",
    }
    if res.bound is not None:
        result["suboptimality_bound"] = res.bound
    if res.report is not None:
        result["discrepancy"] = {"max_discrepancy": res.report.max_discrepancy,
                                 "price_gap": res.report.price_gap}
    return result, res.prices


def _flow_problem(problem, need_supply: bool) -> FlowProblem:
    if need_supply and problem.supply is None:
        raise UsageError("problem file needs an 'r <amount>' line")
    supply = problem.supply if problem.supply is not None else INF
    try:
        return FlowProblem(problem.graph, problem.source, problem.sink, supply)
    except AuctionError as exc:
        raise UsageError(str(exc)) from None


def _cmd_flow(args, out):
    problem, prices = _problem(args)
    fp = _flow_problem(problem, args.kind != "max")
    cfg = _config(args)
    if args.kind == "feasible":
        state = solve_feasible_flow(fp, cfg, prices)
    elif args.kind == "max":
        state = solve_max_flow(fp, cfg, prices)
    else:
        state = solve_min_cost_flow(fp, _schedule(args, fp.graph), cfg, prices,
                                    rescale=args.rescale)
    result = {
        "kind": args.kind,
        "routed": state.routed,
        "objective": state.cost(fp.graph),
        "augmentations": state.augmentations,
        "iterations": state.iterations,
        "flows": _flows(state.flow),
        "prices": state.prices,
    }
    if args.kind == "max":
        result["value"] = state.routed
    if args.kind == "mincost":
        result["guaranteed"] = state.stats["guaranteed"]
        result["bound"] = state.stats["bound"]
        result["rules"] = state.stats["rules"]
    return result, state.prices


def _cmd_assign(args, out):
    costs = parse_cost_matrix(_read(args.file))
    cfg = _config(args)
    eps_min = args.eps_min if args.eps_min is not None else args.epsilon
    top = max((abs(c) for row in costs for c in row if c is not None), default=0)
    eps0 = args.eps0 if args.eps0 is not None else max(top, eps_min)
    try:
        schedule = ScalingSchedule(eps0, args.theta, eps_min)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = solve_assignment(costs, schedule, cfg)
    result = {"matching": [list(p) for p in res.matching], "objective": res.cost,
              "iterations": res.state.iterations, "prices": res.state.prices}
    return result, res.state.prices


def _cmd_oracle(args, out):
    problem, _ = _problem(args)
    g = problem.graph
    if args.kind == "sp":
        dist = bellman_ford_distances(g, problem.sink)
        if not isinstance(dist, list):
            raise dist
        return {"distances": dist, "distance": dist[problem.source]}, None
    fp = _flow_problem(problem, args.kind == "mincost")
    if args.kind == "maxflow":
        value, flow = oracle_max_flow(fp)
        return {"value": value, "flows": _flows(flow)}, None
    cost, flow = oracle_min_cost_flow(fp)
    return {"objective": cost, "flows": _flows(flow)}, None


COMMANDS = {"path": _cmd_path, "wpath": _cmd_path, "scale": _cmd_scale,
            "flow": _cmd_flow, "assign": _cmd_assign, "oracle": _cmd_oracle}


def _human(result: dict, out: TextIO) -> None:
    for key, value in result.items():
        if key == "phases":
            out.write("phases:\n")
            out.write(f"  {'epsilon':>10} {'iterations':>10} {'length':>10}  path\n")
            for ph in value:
                out.write(f"  {fmt.format_number(ph['epsilon']):>10} "
                          f"{ph['iterations']:>10} "
                          f"{fmt.format_number(ph['path_length']):>10}  "
                          f"{' '.join(map(str, ph['path']))}\n")
        elif key == "flows":
            out.write("flows:\n")
            for i, j, x in value:
                out.write(f"  {i} -> {j}: {fmt.format_number(x)}\n")
        elif key == "discrepancy":
            out.write(f"max discrepancy: "
                      f"{fmt.format_number(value['max_discrepancy'])}\n")
        elif isinstance(value, list):
            shown = " ".join(fmt.format_number(v) if not isinstance(v, list)
                             else "(" + " ".join(map(str, v)) + ")" for v in value)
            out.write(f"{key}: {shown}\n")
        elif isinstance(value, (int, float)) and not isinstance(value, bool):
            out.write(f"{key}: {fmt.format_number(value)}\n")
        else:
            out.write(f"{key}: {value}\n")


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, (UsageError, ParseError)):
        return 2
    if isinstance(exc, (Infeasible, Unreachable)):
        return 3
    if isinstance(exc, IterationLimitExceeded):
        return 4
    return 1


def run_command(argv: Sequence[str] | None = None, out: TextIO | None = None,
                err: TextIO | None = None) -> int:
    """Run one command and return its exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result, prices = COMMANDS[args.command](args, out)
        if args.save_prices and prices is not None:
            _write(args.save_prices, fmt.save_prices(prices))
    except (AuctionError, UsageError, ValueError) as exc:
        code = _exit_code(exc)
        message = str(exc)
        if isinstance(exc, Unreachable):
            message = f"node {exc.destination + 1} is not reachable from node {exc.origin + 1}"
        if args.json:
            out.write(fmt.dumps({"error": {"type": type(exc).__name__,
                                           "message": message,
                                           "exit_code": code}}) + "\n")
        else:
            err.write(f"error: {message}\n")
        return code
    if args.json:
        out.write(fmt.dumps(dict(command=args.command, **result)) + "\n")
    else:
        _human(result, out)
    return 0


def main() -> None:
    sys.exit(run_command())
