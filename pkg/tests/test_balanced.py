import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqflow import (
    EqualityNetwork,
    balanced_flow,
    blocks_from_surpluses,
    breakpoints_oracle,
    make_parametric,
    max_flow,
    min_sink_cut_at,
    reduced_network,
    squared_norm_oracle,
    squared_surplus_norm,
    surpluses,
    to_flow_network,
    verify_balanced,
)
from eqflow.balanced import Block
from eqflow.core import flow_from_edge_amounts, edge_amounts
from eqflow.generators import gen_random
from eqflow.maxflow import SolveStats, check_flow

from conftest import fix_a, fix_b, fix_c, small_corpus


def source_caps(fn):
    return [a.capacity for a in fn.arcs if fn.vertices[a.tail] == "s"]


def unbalanced_fix_b():
    net = fix_b()
    return net, flow_from_edge_amounts(net, {(0, 0): 1, (1, 0): 1, (1, 1): 2})


# one buyer (b2) whose only good is bought out by a richer buyer
def starved_net():
    return EqualityNetwork([6, 3, 7, 11], [1, 2, 9, 2], [(0, 1), (0, 2), (1, 3), (2, 1), (3, 0), (3, 3)])


def test_reduced_network():
    assert source_caps(reduced_network(fix_b(), [1, 1])) == [2, 2]
    assert source_caps(reduced_network(fix_c(), [3, 0])) == [2, 1]
    assert reduced_network(fix_a(), [0]) == to_flow_network(fix_a())
    with pytest.raises(ValueError):
        reduced_network(fix_c(), [6, 0])
    with pytest.raises(ValueError):
        reduced_network(fix_c(), [1])


def test_balanced_fix_b():
    res = balanced_flow(fix_b())
    assert res.value == 4 and res.surpluses == [1, 1]
    assert [(b.buyers, b.goods, b.surplus) for b in res.blocks] == [((0, 1), (0, 1), 1), ((), (), 0)]
    assert res.reduced_caps == [2, 2]


def test_balanced_fix_c():
    res = balanced_flow(fix_c())
    assert res.value == 3 and res.surpluses == [3, 0]
    assert list(res.blocks) == [Block((0,), (0,), F(3)), Block((1,), (1,), F(0))]


def test_balanced_fix_a():
    res = balanced_flow(fix_a())
    assert res.value == 2 and res.surpluses == [0]
    assert list(res.blocks) == [Block((0,), (0,), F(0))]


def test_blocks_from_unbalanced_flow():
    net, f = unbalanced_fix_b()
    assert check_flow(to_flow_network(net), f).optimal
    blocks = blocks_from_surpluses(net, f)
    assert [b.surplus for b in blocks] == [2, 0]
    assert blocks.cross_flow == ((0, (0, 1)),)


def test_verify_examples():
    res = balanced_flow(fix_b())
    cert = verify_balanced(fix_b(), res.flow)
    assert cert.is_balanced and not cert.failures()

    net, f = unbalanced_fix_b()
    cert = verify_balanced(net, f)
    assert not cert.is_balanced
    assert not cert["flow_locality"].passed and "cross-block flow" in cert["flow_locality"].detail
    assert not cert["edge_locality"].passed
    assert cert["maximality"].passed

    net = fix_a()
    cert = verify_balanced(net, flow_from_edge_amounts(net, {}))
    assert not cert["maximality"].passed and not cert.is_balanced


def test_verify_rejects_infeasible_flow():
    net = fix_a()
    cert = verify_balanced(net, flow_from_edge_amounts(net, {(0, 0): 3}))
    assert [c.name for c in cert.checks] == ["maximality"] and not cert.is_balanced


@pytest.mark.parametrize("make,expected", [(fix_b, [1, 1]), (fix_c, [3, 0]), (fix_a, [0])])
def test_squared_norm_oracle_fixtures(make, expected):
    assert squared_norm_oracle(make()) == expected


def test_starved_buyer_keeps_its_budget():
    net = starved_net()
    res = balanced_flow(net)
    assert res.surpluses == [0, 3, 5, 8]
    assert squared_norm_oracle(net) == res.surpluses
    assert verify_balanced(net, res.flow).is_balanced
    # the raw move value of b2 follows b4, above its own budget
    assert res.profile.move_lambda["b2"] == 8
    assert breakpoints_oracle(make_parametric(net)).move_lambda["b2"] == 8


def predicted_cut(net, blocks, upto, lam):
    """Blocks 1..upto plus buyers whose arc is closed at lam and whose goods all lie inside."""
    side = {"s"}
    goods = set()
    for blk in list(blocks)[:upto]:
        side |= {net.buyer_name(i) for i in blk.buyers}
        goods |= set(blk.goods)
    side |= {net.good_name(j) for j in goods}
    nbrs = net.neighbours()
    side |= {net.buyer_name(i) for i in range(net.buyer_count) if net.budgets[i] <= lam and set(nbrs[i]) <= goods}
    return frozenset(side)


def test_cut_structure_between_surplus_levels():
    # blocks plus idle buyers whose goods are already inside give the cut exactly
    for _, net in small_corpus(200):
        res = balanced_flow(net)
        pn = make_parametric(net)
        levels = [b.surplus for b in res.blocks]
        for i in range(len(levels) - 1):
            lam = (levels[i] + levels[i + 1]) / 2
            assert min_sink_cut_at(pn, lam).source_side == predicted_cut(net, res.blocks, i + 1, lam)


def test_breakpoints_are_spending_block_surpluses():
    for _, net in small_corpus(200):
        res = balanced_flow(net)
        spenders = {
            b.surplus
            for b in res.blocks
            if b.surplus > 0 and any(net.budgets[i] > b.surplus for i in b.buyers)
        }
        assert set(res.profile.breakpoints) == spenders


@st.composite
def networks(draw):
    n = draw(st.integers(1, 6))
    k = draw(st.integers(1, 6))
    m = draw(st.integers(max(n, k), min(n * k, 14)))
    return gen_random(n, k, m, draw(st.integers(0, 10**9)), (1, draw(st.integers(1, 20))), (1, 12))


@settings(max_examples=80, deadline=None)
@given(networks())
def test_balanced_flow_properties(net):
    stats = SolveStats()
    res = balanced_flow(net, stats)
    assert res.value == max_flow(to_flow_network(net)).value
    assert surpluses(net, res.flow) == res.surpluses
    assert res.surpluses == [min(e, m) for e, m in zip(net.budgets, res.profile.buyer_moves())]
    assert verify_balanced(net, res.flow).is_balanced
    oracle = squared_norm_oracle(net)
    assert oracle == res.surpluses
    assert squared_surplus_norm(oracle) == squared_surplus_norm(res.surpluses)
    blocks = res.blocks
    assert sorted(i for b in blocks for i in b.buyers) == list(range(net.buyer_count))
    assert sorted(j for b in blocks for j in b.goods) == list(range(net.good_count))
    assert not blocks.cross_flow


@settings(max_examples=50, deadline=None)
@given(networks(), st.integers(0, 10**6))
def test_surplus_vector_is_permutation_invariant(net, seed):
    rng = random.Random(seed)
    bp = list(range(net.buyer_count))
    gp = list(range(net.good_count))
    rng.shuffle(bp)
    rng.shuffle(gp)
    budgets = [None] * len(bp)
    prices = [None] * len(gp)
    for old, new in enumerate(bp):
        budgets[new] = net.budgets[old]
    for old, new in enumerate(gp):
        prices[new] = net.prices[old]
    edges = [(bp[i], gp[j]) for i, j in net.edges]
    rng.shuffle(edges)
    other = EqualityNetwork(budgets, prices, edges)
    base = balanced_flow(net).surpluses
    mapped = balanced_flow(other).surpluses
    assert [mapped[bp[i]] for i in range(len(bp))] == base


def test_rational_inputs():
    net = EqualityNetwork([F(7, 3), F(1, 2)], [F(3, 4), F(5, 6)], [(0, 0), (0, 1), (1, 1)])
    res = balanced_flow(net)
    assert res.surpluses == squared_norm_oracle(net)
    assert verify_balanced(net, res.flow).is_balanced


def test_no_flow_leaves_blocks():
    res = balanced_flow(starved_net())
    bb, gb = res.blocks.block_of_buyer(), res.blocks.block_of_good()
    assert all(bb[i] == gb[j] for (i, j), x in edge_amounts(starved_net(), res.flow).items() if x > 0)
