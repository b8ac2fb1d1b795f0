"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import io
import json
import math
import pathlib
import random
import statistics
import sys
import time
from fractions import Fraction
from functools import lru_cache

import pytest

from auctionpath.apc import apc_run
from auctionpath.awpc import awpc_run, check_epsilon_cs
from auctionpath.cli import run_command
from auctionpath.engine import SolverConfig
from auctionpath.errors import Infeasible
from auctionpath.graph import INF, build_graph, path_length, residual_graph, topological_order
from auctionpath.oracles import (
    bellman_ford_distances,
    enumerate_paths,
    oracle_max_flow,
    oracle_min_cost_flow,
)
from auctionpath.scaling import (
    ScalingSchedule,
    repair_prices_acyclic,
    scale_run_guaranteed,
    scale_run_naive,
)
from auctionpath.transport import solve_max_flow, solve_min_cost_flow

sys.path.insert(0, str(pathlib.Path(__file__).parent))
from graphs import (  # noqa: E402
    DAG10_PRICES,
    MATCH3_COMPLETIONS,
    dag10,
    chain,
    match3,
    match3_partial_flow,
    g2,
    random_dag,
    random_flow_problem,
    random_graph,
)

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture
def report(capsys):
    def emit(label, ok, detail):
        line = f"{label} {'PASS' if ok else 'FAIL'}  {detail}"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return emit


def four_node_table(eps):
    """Prices prior to each row, then the action and target, as functions of eps."""
    return [
        ((0, 0, 0, 0), "extension", 1),
        ((1 + eps, 0, 0, 0), "contraction", 0),
        ((1 + eps, 3 + eps, 0, 0), "extension", 2),
        ((2 + eps, 3 + eps, 0, 0), "contraction", 0),
        ((2 + eps, 3 + eps, 2.5 + eps, 0), "extension", 1),
        ((4 + 2 * eps, 3 + eps, 2.5 + eps, 0), "extension", 3),
        ((4 + 2 * eps, 3 + 2 * eps, 2.5 + eps, 0), "terminate", None),
    ]


def cycle_table(eps):
    """First eight rows for the zero-length cycle example (exit arc long)."""
    e = eps
    return [
        ((0,), (0, 0, 0, 0, 0), "extension", 1),
        ((0, 1), (e, 0, 0, 0, 0), "extension", 2),
        ((0, 1, 2), (e, e, 0, 0, 0), "extension", 3),
        ((0, 1, 2, 3), (e, e, e, 0, 0), "contraction", 2),
        ((0, 1, 2), (e, e, e, 2 * e, 0), "contraction", 1),
        ((0, 1), (e, e, 3 * e, 2 * e, 0), "contraction", 0),
        ((0,), (e, 4 * e, 3 * e, 2 * e, 0), "extension", 1),
        ((0, 1), (5 * e, 4 * e, 3 * e, 2 * e, 0), "extension", 2),
    ]


def test_ac01_four_node_trace(report, tmp_path):
    trace_file = tmp_path / "trace.jsonl"
    argv = ["wpath", str(FIXTURES / "g1.txt"), "--epsilon", "1", "--json",
            "--trace", str(trace_file)]
    out = io.StringIO()
    start = time.perf_counter()
    code = run_command(argv, out, io.StringIO())
    elapsed = time.perf_counter() - start
    res = json.loads(out.getvalue())
    rows = [json.loads(line) for line in trace_file.read_text().splitlines()]
    want = four_node_table(1)
    got = [(tuple(r["prices"]), r["action"], None if r["node"] is None else r["node"] - 1)
           for r in rows]
    ok = (code == 0 and got == want and res["path"] == [1, 2, 4]
          and res["prices"] == [6, 5, 3.5, 0] and elapsed < 0.010)
    report("AC1", ok, f"rows={len(rows)} match={got == want} path={res['path']} "
                      f"prices={res['prices']} runtime={elapsed * 1e3:.2f}ms (<10ms)")


def test_ac02_four_node_large_epsilon(report):
    g = build_graph(4, [(0, 1, 1), (0, 2, 2), (1, 3, 3), (2, 3, 2.5)])
    run = awpc_run(g, 0, 3, config=SolverConfig(epsilon=4, trace=True))
    actions = [r.action for r in run.trace]
    ok_actions = actions == ["extension", "extension", "terminate"]
    ok_prices = run.prices == [5, 5, 0, 0]
    ok = ok_actions and ok_prices and run.path == [0, 1, 3]
    report("AC2", ok, f"actions={actions} path={run.path} prices={run.prices} "
                      f"expected prices (5, 5, 0, 0)")


def test_ac03_cycle_example(report):
    start = time.perf_counter()
    L = 100
    run = awpc_run(g2(L), 0, 4, config=SolverConfig(epsilon=1, trace=True))
    got = [(r.path, r.prices, r.action, r.node) for r in run.trace[:8]]
    table_ok = got == cycle_table(1)

    eps_list = [1, 5, 25]
    counts = [awpc_run(g2(L), 0, 4, config=SolverConfig(epsilon=e)).iterations
              for e in eps_list]
    decreasing = all(a > b for a, b in zip(counts, counts[1:]))
    ratios = [c * e / L for c, e in zip(counts, eps_list)]
    # c with every count within 20% of c*L/eps exists iff max/min <= 1.5
    lo, hi = max(ratios) / 1.2, min(ratios) / 0.8
    c_fit = (min(ratios) + max(ratios)) / 2
    within = lo <= hi

    totals = {}
    for big in (100, 1000, 10000):
        sched = ScalingSchedule(0.64 * big, 0.5, 1)
        totals[big] = scale_run_naive(g2(big), 0, 4, None, sched).iterations
    c_prime = totals[100] / math.log2(100)
    log_ok = all(n <= c_prime * math.log2(big) * (1 + 1e-9) for big, n in totals.items())
    elapsed = time.perf_counter() - start
    ok = table_ok and decreasing and within and log_ok and elapsed < 1
    report("AC3", ok,
           f"table={table_ok} counts(eps=1,5,25)={counts} decreasing={decreasing} "
           f"count*eps/L={[round(r, 3) for r in ratios]} c_fit={c_fit:.3f} "
           f"within20%={within} scaled_totals={totals} c'={c_prime:.3f} "
           f"log2L_bound={log_ok} runtime={elapsed:.3f}s")


def test_ac04_chain(report):
    start = time.perf_counter()
    details, ok = [], True
    totals = {}
    for n in (3, 8, 20):
        g, s, t, b = chain(n)
        run = awpc_run(g, s, t, config=SolverConfig(epsilon=n + 1))
        direct = run.path == [s, *range(1, n + 1), t] and run.iterations == n + 1
        res = scale_run_guaranteed(g, s, t, None, ScalingSchedule(2 * n, 0.5, 0.05))
        scaled = res.path == [s, b, t]
        totals[n] = res.iterations
        ok &= direct and scaled
        details.append(f"n={n}: direct={run.iterations} scaled_path={scaled} "
                       f"scaled_iters={res.iterations}")
    C = totals[3] / (3 * math.log2(3))
    bound_ok = all(k <= C * n * math.log2(n) * (1 + 1e-9) for n, k in totals.items())
    elapsed = time.perf_counter() - start
    ok = ok and bound_ok and elapsed < 1
    report("AC4", ok, "; ".join(details) + f"; C={C:.3f} nlogn_bound={bound_ok} "
                      f"runtime={elapsed:.3f}s")


@lru_cache(maxsize=None)
def path_suite():
    """500 random reachable graphs with oracle distances."""
    rng = random.Random(20240501)
    cases = []
    while len(cases) < 500:
        g = random_graph(rng, n_min=3, n_max=12, max_len=10, density=0.22)
        t = g.node_count - 1
        cases.append((g, t, bellman_ford_distances(g, t)))
    return cases


@lru_cache(maxsize=None)
def simple_path_lengths(index):
    g, t, _ = path_suite()[index]
    return sorted({length for _, length in enumerate_paths(g, 0, t)})


@lru_cache(maxsize=None)
def bound_suite():
    """Cs-rule runs from zero prices: two fixed epsilons and one below the gap.

    Returns (runs, bound_violations, inexact_runs, seconds).
    """
    start = time.perf_counter()
    runs, bad_bound, bad_exact = [], 0, 0
    for k, (g, t, d) in enumerate(path_suite()):
        n = g.node_count - 2
        for eps in (0.5, 2):
            run = awpc_run(g, 0, t, config=SolverConfig(epsilon=eps), rule="cs")
            runs.append((g, t, run))
            if path_length(g, run.path) > d[0] + (n + 1) * eps:
                bad_bound += 1
        lengths = simple_path_lengths(k)
        gap = lengths[1] - lengths[0] if len(lengths) > 1 else None
        eps = gap / (n + 2) if gap else 1.0
        run = awpc_run(g, 0, t, config=SolverConfig(epsilon=eps), rule="cs")
        runs.append((g, t, run))
        if path_length(g, run.path) != d[0]:
            bad_exact += 1
    return runs, bad_bound, bad_exact, time.perf_counter() - start


@lru_cache(maxsize=None)
def warm_suite():
    """Runs started from the exact distances, both rules.

    Returns (runs, graphs_with_contractions, not_shortest).
    """
    runs, contracted, not_shortest = [], set(), 0
    for k, (g, t, d) in enumerate(path_suite()):
        for rule in ("standard", "cs"):
            for eps in (0.5, 2):
                run = awpc_run(g, 0, t, list(d), SolverConfig(epsilon=eps), rule=rule)
                runs.append((g, t, d, run))
                if run.contractions:
                    contracted.add(k)
                not_shortest += path_length(g, run.path) != d[0]
    return runs, contracted, not_shortest


def test_ac05_suboptimality_bound(report):
    _, bad_bound, bad_exact, elapsed = bound_suite()
    ok = bad_bound == 0 and bad_exact == 0 and elapsed < 30
    report("AC5", ok, f"graphs=500 bound_violations={bad_bound} "
                      f"inexact_below_gap={bad_exact} runtime={elapsed:.2f}s (<30s)")


def test_ac06_warm_start(report):
    runs, contracted, not_shortest = warm_suite()
    gaps = [run.prices[0] - run.prices[t] - d[0] for _, t, d, run in runs]
    exact_gap = sum(x == 0 for x in gaps)
    plus_eps = sum(x == run.epsilon for x, (*_, run) in zip(gaps, runs))
    ok = not contracted and not_shortest == 0 and exact_gap == len(runs)
    report("AC6", ok, f"runs={len(runs)} graphs_with_contractions={sorted(contracted)} "
                      f"not_shortest={not_shortest} gap==d*_s: {exact_gap}/{len(runs)} "
                      f"gap==d*_s+eps: {plus_eps}/{len(runs)}")


def _discrepancy_sum(g, prices, path):
    total = 0
    for u, v in zip(path, path[1:]):
        p_u, p_v = prices[u], prices[v]
        if p_v == INF:
            continue
        if p_u == INF:
            return INF
        total += max(0, p_u - g.length(u, v) - p_v)
    return total


def test_ac07_universal_bounds(report):
    checked = gap_bad = bound_bad = 0
    for g, t, run in bound_suite()[0] + [(g, t, run) for g, t, _, run in warm_suite()[0]]:
        if g.node_count > 10:
            continue
        checked += 1
        length = path_length(g, run.path)
        if length > run.prices[0] - run.prices[t] + 1e-9:
            gap_bad += 1
        for other, other_len in enumerate_paths(g, 0, t):
            if length > other_len + _discrepancy_sum(g, run.prices, other) + 1e-9:
                bound_bad += 1
    ok = checked > 0 and gap_bad == 0 and bound_bad == 0
    report("AC7", ok, f"runs_checked={checked} gap_violations={gap_bad} "
                      f"path_bound_violations={bound_bad}")


def test_ac08_matching(report):
    start = time.perf_counter()
    value = solve_max_flow(match3()).routed
    r = residual_graph(match3().graph, match3_partial_flow())
    rng = random.Random(51)
    found = set()
    all_listed = True
    for _ in range(100):
        prices = [rng.uniform(-20, 20) if rng.random() < 0.5 else rng.randint(-5, 5)
                  for _ in range(r.node_count)]
        path = tuple(apc_run(r, 0, 7, prices).path)
        found.add(path)
        all_listed &= path in MATCH3_COMPLETIONS
    elapsed = time.perf_counter() - start
    ok = value == 3 and all_listed and elapsed < 1
    report("AC8", ok, f"max_flow={value} all_paths_listed={all_listed} "
                      f"distinct_paths_seen={len(found)} runtime={elapsed:.3f}s")


def test_ac09_max_flow(report):
    start = time.perf_counter()
    rng = random.Random(909)
    mismatches = 0
    for _ in range(500):
        problem = random_flow_problem(rng, n_max=10, cap_max=9)
        if solve_max_flow(problem).routed != oracle_max_flow(problem)[0]:
            mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 30
    report("AC9", ok, f"instances=500 mismatches={mismatches} runtime={elapsed:.2f}s")


def test_ac10_min_cost(report):
    rng = random.Random(1010)
    eps_min = 0.01
    excesses, bad, done = [], 0, 0
    while done < 300:
        supply = rng.randint(1, 3)
        problem = random_flow_problem(rng, n_max=8, cap_max=3, cost_max=9, supply=supply)
        try:
            best, _ = oracle_min_cost_flow(problem)
        except Infeasible:
            continue
        done += 1
        state = solve_min_cost_flow(problem, ScalingSchedule(9, 0.25, eps_min))
        cost = state.cost(problem.graph)
        tol = supply * (problem.graph.node_count - 1) * eps_min
        excess = cost - best
        excesses.append(excess)
        if not (state.is_feasible(problem) and excess <= tol + 1e-9):
            bad += 1
    dist = {"zero": sum(e == 0 for e in excesses),
            "max": max(excesses), "mean": statistics.mean(excesses)}
    report("AC10", bad == 0, f"instances=300 violations={bad} excess={dist}")


def forward_fixpoint(graph, prices, eps):
    out = list(prices)
    for j in topological_order(graph):
        for a in graph.in_arcs(j):
            out[j] = max(out[j], out[a.start] - a.length - eps)
    return out


def test_ac11_price_repair(report):
    rng = random.Random(1111)
    bad = 0
    half = Fraction(1, 2)
    for _ in range(200):
        g = random_dag(rng)
        entry = forward_fixpoint(g, [rng.randint(-10, 10) for _ in range(g.node_count)], 1)
        assert check_epsilon_cs(g, entry, [0], 1).ok
        out = repair_prices_acyclic(g, entry, half)
        good = (check_epsilon_cs(g, out, [0], half).ok
                and all(b >= a for a, b in zip(entry, out))
                and repair_prices_acyclic(g, out, half) == out)
        bad += not good
    one = repair_prices_acyclic(build_graph(2, [(0, 1, 1)]), [1.5, -0.5], 0.5)
    two = repair_prices_acyclic(build_graph(3, [(0, 1, 1), (1, 2, 1)]),
                                [Fraction("3.2"), Fraction("1.2"), 0], half)
    fixtures = one == [1.5, 0] and two[1:] == [Fraction("1.7"), Fraction("0.2")]
    ten = repair_prices_acyclic(dag10(), DAG10_PRICES, half, entry_epsilon=1)
    ten_ok = ten[6] == Fraction("1.7") and ten[9] == Fraction("0.2") and bool(
        check_epsilon_cs(dag10(), ten, [0], half))
    ok = bad == 0 and fixtures and ten_ok
    report("AC11", ok, f"dags=200 failures={bad} single_arc_fixtures={fixtures} "
                       f"ten_node_fixture={ten_ok} p_t={one[1]} p_6={two[1]} p_t'={two[2]}")


def test_ac12_epsilon_invariance(report):
    rng = random.Random(1212)
    mismatches = 0
    for _ in range(100):
        g = random_graph(rng, n_max=12, density=0.3)
        t = g.node_count - 1
        a = apc_run(g, 0, t, config=SolverConfig(epsilon=1, trace=True))
        b = apc_run(g, 0, t, config=SolverConfig(epsilon=7, trace=True))
        key = lambda run: [(r.case, r.action, r.node, r.path) for r in run.trace]
        mismatches += key(a) != key(b)
    report("AC12", mismatches == 0, f"instances=100 trace_mismatches={mismatches}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-p", "no:cacheprovider"]))
