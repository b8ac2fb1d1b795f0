import math

import pytest
from hypothesis import given, settings

from auctionpath.errors import (
    CapacityViolated,
    CyclicGraph,
    DuplicateArc,
    GraphError,
    NodeOutOfRange,
    SelfArc,
)
from auctionpath.graph import (
    INF,
    Arc,
    Slope,
    build_graph,
    check_nonnegative_cycles,
    classify_arc,
    is_acyclic,
    path_length,
    reachable,
    residual_graph,
    topological_order,
)
from auctionpath.oracles import enumerate_cycles

from graphs import g1, g2, graphs


def test_build_graph_defaults():
    g = build_graph(3, [(0, 1), (1, 2, 4), (0, 2, 1, 5)])
    assert g.arc(0, 1) == Arc(0, 1, 0.0, INF)
    assert g.arc(1, 2).length == 4
    assert g.arc(0, 2).capacity == 5
    assert [a.end for a in g.out_arcs(0)] == [1, 2]
    assert [a.start for a in g.in_arcs(2)] == [1, 0]


@pytest.mark.parametrize("arcs, error", [
    ([(0, 1), (0, 1)], DuplicateArc),
    ([(1, 1)], SelfArc),
    ([(0, 3)], NodeOutOfRange),
    ([(0, 1, float("nan"))], GraphError),
    ([(0, 1, 1, 0)], GraphError),
    ([], GraphError),
])
def test_build_graph_rejects(arcs, error):
    with pytest.raises(error):
        build_graph(3, arcs)


def test_graph_is_immutable():
    g = g1()
    with pytest.raises(AttributeError):
        g.node_count = 7


def test_deadends_and_reachability():
    g = build_graph(4, [(0, 1), (1, 2)])
    assert g.deadends() == [2, 3]
    assert reachable(g, 0, 2)
    assert not reachable(g, 0, 3)


def test_classify_arc():
    a = Arc(0, 1, 2.0)
    assert classify_arc(a, [3, 0]) is Slope.DOWNHILL
    assert classify_arc(a, [2, 0]) is Slope.LEVEL
    assert classify_arc(a, [1, 0]) is Slope.UPHILL
    assert classify_arc(a, [100, INF]) is Slope.UPHILL
    assert classify_arc(a, [2.0 + 1e-12, 0], tolerance=1e-9) is Slope.LEVEL


def test_negative_cycle_witness():
    g = build_graph(3, [(0, 1, 1), (1, 2, -3), (2, 1, 2)])
    check = check_nonnegative_cycles(g)
    assert not check.ok
    assert check.cycle[0] == check.cycle[-1]
    assert set(check.cycle) == {1, 2}
    assert check.length == -1


def test_zero_cycle_is_fine():
    assert check_nonnegative_cycles(g2()).ok


@settings(max_examples=150, deadline=None)
@given(graphs(max_nodes=6, min_len=-4, max_len=6, reachable=False))
def test_cycle_check_matches_enumeration(g):
    has_negative = any(length < 0 for _, length in enumerate_cycles(g))
    check = check_nonnegative_cycles(g)
    assert check.ok == (not has_negative)
    if not check.ok:
        assert check.length < 0
        assert path_length(g, check.cycle) == check.length


def test_topological_order():
    order = topological_order(g1())
    pos = {v: i for i, v in enumerate(order)}
    assert all(pos[a.start] < pos[a.end] for a in g1().arcs)
    with pytest.raises(CyclicGraph):
        topological_order(g2())
    assert not is_acyclic(g2())


def test_residual_graph_reverses_used_arcs():
    g = build_graph(3, [(0, 1, 2, 3), (1, 2, 5, 1)])
    r = residual_graph(g, {(0, 1): 1, (1, 2): 1})
    assert r.arc(0, 1).capacity == 2
    assert r.arc(1, 0) == Arc(1, 0, -2, 1)
    assert not r.has_arc(1, 2)
    assert r.arc(2, 1) == Arc(2, 1, -5, 1)
    assert r.origin[(2, 1)] == (1, 2, False)


def test_residual_graph_merges_opposite_arcs():
    g = build_graph(2, [(0, 1, 4, 1), (1, 0, 1, 1)])
    r = residual_graph(g, {(0, 1): 1})
    # reversed (0,1) has length -4, shorter than the forward (1,0) of length 1
    assert r.arc(1, 0).length == -4
    assert r.origin[(1, 0)] == (0, 1, False)


def test_residual_graph_validates_flow():
    g = build_graph(2, [(0, 1, 0, 1)])
    with pytest.raises(CapacityViolated):
        residual_graph(g, {(0, 1): 2})
    with pytest.raises(GraphError):
        residual_graph(g, {(1, 0): 1})


def test_graph_equality_and_without():
    assert g1() == g1()
    assert hash(g1()) == hash(g1())
    smaller = g1().without((0, 2))
    assert not smaller.has_arc(0, 2) and len(smaller) == 3
    assert math.isinf(g1().arc(0, 1).capacity)
