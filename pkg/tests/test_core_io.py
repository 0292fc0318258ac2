from fractions import Fraction as F

import pytest

from eqflow import INF, EqualityNetwork, parse_eqnet, serialize_eqnet, squared_surplus_norm, surpluses, to_flow_network
from eqflow.core import (
    DuplicateEdgeError,
    IndexRangeError,
    InfeasibleFlowError,
    IsolatedVertexError,
    NonPositiveValueError,
    as_rational,
    flow_from_edge_amounts,
    format_rational,
)
from eqflow.io import EqnetSyntaxError, parse_flow, parse_rational, serialize_flow

from conftest import FIX_B_TEXT, fix_a, fix_b, fix_c


def test_infinite_ordering():
    assert INF > F(10**30)
    assert not INF < F(0)
    assert INF + F(3) is INF
    with pytest.raises(ArithmeticError):
        INF - F(1)


def test_as_rational_rejects_floats():
    assert as_rational("3/6") == F(1, 2)
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_format_rational():
    assert format_rational(F(4)) == "4"
    assert format_rational(F(-6, 4)) == "-3/2"


def test_parse_fix_b():
    net = parse_eqnet(FIX_B_TEXT)
    assert (net.buyer_count, net.good_count, len(net.edges)) == (2, 2, 3)
    assert net == fix_b()


def test_non_positive_price():
    with pytest.raises(NonPositiveValueError, match="price"):
        parse_eqnet(FIX_B_TEXT.replace("price 2 2", "price 2 0"))


def test_isolated_buyer():
    text = FIX_B_TEXT.replace("edge 2 1\n", "").replace("edge 2 2\n", "")
    with pytest.raises(IsolatedVertexError, match="buyer 2"):
        parse_eqnet(text)


def test_duplicate_and_range_errors():
    with pytest.raises(DuplicateEdgeError):
        parse_eqnet(FIX_B_TEXT + "edge 1 1\n")
    with pytest.raises(IndexRangeError):
        parse_eqnet(FIX_B_TEXT + "edge 3 1\n")
    with pytest.raises(DuplicateEdgeError):
        EqualityNetwork([1], [1], [(0, 0), (0, 0)])


def test_syntax_error_location():
    with pytest.raises(EqnetSyntaxError) as info:
        parse_eqnet(FIX_B_TEXT.replace("buyers 2", "buyers x"))
    assert info.value.line == 2
    assert info.value.column == 8


def test_parse_rational():
    assert parse_rational("7/14") == F(1, 2)
    for bad in ("1.5", "1/0", "", "a"):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_serialize_fix_a_is_six_lines():
    text = serialize_eqnet(fix_a())
    assert text.splitlines() == ["eqnet 1", "buyers 1", "goods 1", "budget 1 2", "price 1 2", "edge 1 1"]


@pytest.mark.parametrize("make", [fix_a, fix_b, fix_c])
def test_round_trip(make):
    net = make()
    assert parse_eqnet(serialize_eqnet(net)) == net


def test_round_trip_rational_inputs():
    net = EqualityNetwork([F(5, 3), 1], [F(2, 7), 2], [(0, 0), (1, 1)])
    assert parse_eqnet(serialize_eqnet(net)) == net


def named_caps(fn):
    return {(fn.vertices[a.tail], fn.vertices[a.head]): a.capacity for a in fn.arcs}


def test_flow_network_fix_a():
    fn = to_flow_network(fix_a())
    assert len(fn.vertices) == 4
    caps = named_caps(fn)
    assert caps == {("s", "b1"): 2, ("b1", "c1"): INF, ("c1", "t"): 2}


def test_flow_network_fix_b_and_c():
    fn = to_flow_network(fix_b())
    assert len(fn.vertices) == 6 and len(fn.arcs) == 7
    assert sum(a.capacity is INF for a in fn.arcs) == 3
    caps = named_caps(to_flow_network(fix_c()))
    assert caps[("s", "b1")] == 5 and caps[("s", "b2")] == 1
    assert caps[("c1", "t")] == 2 and caps[("c2", "t")] == 2
    assert sum(c is INF for c in caps.values()) == 2


def test_surpluses_examples():
    net = fix_b()
    f = flow_from_edge_amounts(net, {(0, 0): 2, (1, 1): 2, (1, 0): 0})
    assert surpluses(net, f) == [1, 1]
    net = fix_c()
    assert surpluses(net, flow_from_edge_amounts(net, {(0, 0): 2, (1, 1): 1})) == [3, 0]
    assert surpluses(net, flow_from_edge_amounts(net, {})) == [5, 1]


def test_surpluses_rejects_infeasible():
    net = fix_a()
    with pytest.raises(InfeasibleFlowError):
        surpluses(net, flow_from_edge_amounts(net, {(0, 0): 3}))


def test_squared_norm():
    assert squared_surplus_norm([F(1), F(1)]) == 2
    assert squared_surplus_norm([F(3), F(0)]) == 9
    assert squared_surplus_norm([2, 2]) < squared_surplus_norm([3, 1])


def test_flow_file_round_trip():
    net = fix_b()
    f = flow_from_edge_amounts(net, {(0, 0): F(3, 2), (1, 0): F(1, 2), (1, 1): 2})
    g = parse_flow(serialize_flow(net, f), net)
    assert g.amounts == f.amounts and g.value == f.value == 4


def test_flow_file_rejects_unknown_edge():
    with pytest.raises(ValueError):
        parse_flow("flow 1 2 1\n", fix_b())
