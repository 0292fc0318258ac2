import random
from fractions import Fraction as F

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqflow import INF, check_flow, enumerate_min_cuts, max_flow, min_sink_side_cut, to_flow_network
from eqflow.core import Arc, Flow, FlowNetwork, flow_from_edge_amounts
from eqflow.maxflow import SolveStats, TooLargeError, min_cut

from conftest import fix_a, fix_b, fix_c

S_ALL = frozenset({"s", "b1", "b2", "c1", "c2"})


@pytest.mark.parametrize("make,value", [(fix_a, 2), (fix_b, 4), (fix_c, 3)])
def test_fixture_values(make, value):
    fn = to_flow_network(make())
    res = max_flow(fn)
    assert res.value == value
    assert check_flow(fn, res.flow).optimal


def test_fix_a_tie_goes_to_larger_source_side():
    fn = to_flow_network(fix_a())
    cut = min_sink_side_cut(fn, max_flow(fn))
    assert cut.source_side == {"s", "b1", "c1"} and cut.capacity == 2
    assert {c.source_side for c in enumerate_min_cuts(fn)} == {frozenset({"s"}), frozenset({"s", "b1", "c1"})}


def test_enumerated_min_cuts_fix_b_c():
    assert [(c.source_side, c.capacity) for c in enumerate_min_cuts(to_flow_network(fix_c()))] == [
        (frozenset({"s", "b1", "c1"}), 3)
    ]
    assert [(c.source_side, c.capacity) for c in enumerate_min_cuts(to_flow_network(fix_b()))] == [(S_ALL, 4)]


def test_parametric_source_caps():
    fn = to_flow_network(fix_c(), [F(3), F(0)])
    cut = min_sink_side_cut(fn, max_flow(fn))
    assert cut.source_side == {"s", "b1", "c1"} and cut.capacity == 2
    fn = to_flow_network(fix_b(), [F(1), F(1)])
    cut = min_sink_side_cut(fn, max_flow(fn))
    assert cut.source_side == {"s"} and cut.capacity == 2


def test_check_flow_examples():
    net = fix_b()
    fn = to_flow_network(net)
    good = check_flow(fn, flow_from_edge_amounts(net, {(0, 0): 2, (1, 1): 2}))
    assert good.feasible and good.duality_gap == 0
    partial = check_flow(fn, flow_from_edge_amounts(net, {(0, 0): 2}))
    assert partial.feasible and partial.duality_gap == 2 and not partial.optimal

    fa = to_flow_network(fix_a())
    over = Flow((F(3), F(3), F(3)), F(3))
    report = check_flow(fa, over)
    assert not report.feasible
    assert ("s", "b1", 3, 2) in report.capacity_violations


def test_conservation_violation_reported():
    fa = to_flow_network(fix_a())
    report = check_flow(fa, Flow((F(1), F(0), F(0)), F(1)), with_gap=False)
    assert not report.feasible
    assert report.conservation_violations


def test_min_sink_side_cut_rejects_non_maximum_flow():
    net = fix_b()
    fn = to_flow_network(net)
    f = flow_from_edge_amounts(net, {(0, 0): 2})
    from eqflow.maxflow import FlowResult

    with pytest.raises(ValueError):
        min_sink_side_cut(fn, FlowResult(f, f.value))


def test_enumeration_size_limit():
    net = fix_b()
    with pytest.raises(TooLargeError):
        enumerate_min_cuts(to_flow_network(net), max_inner=3)


def test_stats_count_calls():
    stats = SolveStats()
    fn = to_flow_network(fix_b())
    max_flow(fn, stats)
    min_cut(fn, stats)
    assert stats.calls == 2 and stats.arcs == 14


def random_network(rng: random.Random, n: int, density: float, infinite_share: float) -> FlowNetwork:
    names = ["s", "t"] + [f"v{i}" for i in range(n)]
    arcs = []
    for u in range(len(names)):
        for v in range(len(names)):
            if u == v or v == 0 or u == 1 or rng.random() > density:
                continue
            cap = INF if rng.random() < infinite_share else F(rng.randint(0, 20), rng.randint(1, 4))
            arcs.append(Arc(u, v, cap))
    return FlowNetwork(tuple(names), tuple(arcs), 0, 1)


def to_networkx(fn: FlowNetwork) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(range(len(fn.vertices)))
    for a in fn.arcs:
        if a.capacity is INF:
            g.add_edge(a.tail, a.head)
        else:
            g.add_edge(a.tail, a.head, capacity=a.capacity)
    return g


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 7), st.floats(0.2, 0.8), st.sampled_from([0.0, 0.2]))
def test_duality_against_oracles(seed, n, density, inf_share):
    fn = random_network(random.Random(seed), n, density, inf_share)
    try:
        expected = nx.maximum_flow_value(to_networkx(fn), 0, 1)
    except nx.NetworkXUnbounded:
        return
    res = max_flow(fn)
    assert res.value == expected
    assert check_flow(fn, res.flow, with_gap=False).feasible
    cut = min_sink_side_cut(fn, res)
    assert cut.capacity == res.value
    assert min_cut(fn).source_side == cut.source_side
    # the returned cut has the unique largest source side among all minimum cuts
    cuts = enumerate_min_cuts(fn)
    assert cut.source_side in {c.source_side for c in cuts}
    assert all(c.source_side <= cut.source_side for c in cuts)
    for a in fn.arcs:
        if a.capacity is INF:
            tail_in = fn.vertices[a.tail] in cut.source_side
            head_in = fn.vertices[a.head] in cut.source_side
            assert not (tail_in and not head_in)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 7))
def test_relabelling_gives_same_value_and_cut(seed, n):
    rng = random.Random(seed)
    fn = random_network(rng, n, 0.5, 0.1)
    try:
        base = min_sink_side_cut(fn, max_flow(fn))
    except ValueError:
        return
    perm = list(range(len(fn.vertices)))
    rng.shuffle(perm)
    names = [""] * len(perm)
    for old, new in enumerate(perm):
        names[new] = fn.vertices[old]
    arcs = [Arc(perm[a.tail], perm[a.head], a.capacity) for a in fn.arcs]
    rng.shuffle(arcs)
    other = FlowNetwork(tuple(names), tuple(arcs), perm[0], perm[1])
    res = max_flow(other)
    cut = min_sink_side_cut(other, res)
    assert res.value == base.capacity
    assert cut.source_side == base.source_side
