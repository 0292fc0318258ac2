"""Exact domain types: rationals, capacities, equality networks and s-t flow networks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction


class Infinite:
    """Symbolic infinite capacity. Compares above every finite value."""

    _instance: "Infinite | None" = None

    def __new__(cls) -> "Infinite":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __hash__(self) -> int:
        return hash("eqflow.INF")

    def __eq__(self, other: object) -> bool:
        return other is self

    def __lt__(self, other: object) -> bool:
        return False

    def __le__(self, other: object) -> bool:
        return other is self

    def __gt__(self, other: object) -> bool:
        return other is not self

    def __ge__(self, other: object) -> bool:
        return True

    def __add__(self, other: object) -> "Infinite":
        return self

    __radd__ = __add__

    def __sub__(self, other: object):
        raise ArithmeticError("subtraction involving an infinite capacity")

    __rsub__ = __sub__


INF = Infinite()
Capacity = Union[Fraction, Infinite]


def as_rational(value: Union[int, str, Fraction]) -> Fraction:
    """Coerce an int, Fraction, or "a"/"a/b" string. Floats are refused."""
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use Fraction or 'a/b'")
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class NetworkError(ValueError):
    """Base class for invalid equality-network data."""


class NonPositiveValueError(NetworkError):
    pass


class IsolatedVertexError(NetworkError):
    pass


class DuplicateEdgeError(NetworkError):
    pass


class IndexRangeError(NetworkError):
    pass


class InfeasibleFlowError(ValueError):
    pass


@dataclass(frozen=True)
class EqualityNetwork:
    """Bipartite market network: buyers with budgets, goods with prices.

    Indices are 0-based here; buyer ``i`` is reported as ``b{i+1}`` and good
    ``j`` as ``c{j+1}``.
    """

    budgets: tuple[Fraction, ...]
    prices: tuple[Fraction, ...]
    edges: tuple[tuple[int, int], ...]

    def __init__(
        self,
        budgets: Iterable,
        prices: Iterable,
        edges: Iterable[tuple[int, int]],
    ) -> None:
        budgets = tuple(as_rational(e) for e in budgets)
        prices = tuple(as_rational(p) for p in prices)
        edge_list = [(int(i), int(j)) for i, j in edges]
        n, k = len(budgets), len(prices)
        if n < 1 or k < 1:
            raise NetworkError("an equality network needs at least one buyer and one good")
        for i, e in enumerate(budgets):
            if e <= 0:
                raise NonPositiveValueError(f"non-positive budget for buyer {i + 1}: {format_rational(e)}")
        for j, p in enumerate(prices):
            if p <= 0:
                raise NonPositiveValueError(f"non-positive price for good {j + 1}: {format_rational(p)}")
        seen: set[tuple[int, int]] = set()
        for i, j in edge_list:
            if not (0 <= i < n and 0 <= j < k):
                raise IndexRangeError(f"edge ({i + 1}, {j + 1}) out of range")
            if (i, j) in seen:
                raise DuplicateEdgeError(f"duplicate edge ({i + 1}, {j + 1})")
            seen.add((i, j))
        buyer_deg = [0] * n
        good_deg = [0] * k
        for i, j in seen:
            buyer_deg[i] += 1
            good_deg[j] += 1
        for i, d in enumerate(buyer_deg):
            if d == 0:
                raise IsolatedVertexError(f"isolated buyer {i + 1}")
        for j, d in enumerate(good_deg):
            if d == 0:
                raise IsolatedVertexError(f"isolated good {j + 1}")
        object.__setattr__(self, "budgets", budgets)
        object.__setattr__(self, "prices", prices)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @property
    def buyer_count(self) -> int:
        return len(self.budgets)

    @property
    def good_count(self) -> int:
        return len(self.prices)

    def buyer_name(self, i: int) -> str:
        return f"b{i + 1}"

    def good_name(self, j: int) -> str:
        return f"c{j + 1}"

    def neighbours(self) -> list[list[int]]:
        """Goods adjacent to each buyer, in ascending order."""
        adj: list[list[int]] = [[] for _ in self.budgets]
        for i, j in self.edges:
            adj[i].append(j)
        return adj


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    capacity: Capacity


@dataclass(frozen=True)
class FlowNetwork:
    """Directed s-t network. Arcs are kept sorted by (tail, head)."""

    vertices: tuple[str, ...]
    arcs: tuple[Arc, ...]
    source: int
    sink: int
    roles: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        nv = len(self.vertices)
        if len(set(self.vertices)) != nv:
            raise ValueError("vertex names must be unique")
        if self.source == self.sink:
            raise ValueError("source and sink must differ")
        arcs = []
        for a in self.arcs:
            if not (0 <= a.tail < nv and 0 <= a.head < nv) or a.tail == a.head:
                raise ValueError(f"bad arc {a}")
            if a.head == self.source:
                raise ValueError("the source may not have incoming arcs")
            if a.tail == self.sink:
                raise ValueError("the sink may not have outgoing arcs")
            if a.capacity is not INF:
                if not isinstance(a.capacity, Fraction):
                    a = Arc(a.tail, a.head, as_rational(a.capacity))
                if a.capacity < 0:
                    raise ValueError(f"negative capacity on {a}")
            arcs.append(a)
        object.__setattr__(self, "arcs", tuple(sorted(arcs, key=lambda a: (a.tail, a.head))))
        if not self.roles:
            object.__setattr__(self, "roles", tuple("vertex" for _ in self.vertices))

    @property
    def source_name(self) -> str:
        return self.vertices[self.source]

    @property
    def sink_name(self) -> str:
        return self.vertices[self.sink]

    def index(self, name: str) -> int:
        return self.vertices.index(name)

    def cut_capacity(self, source_side: Iterable[str]) -> Capacity:
        side = {self.index(v) for v in source_side}
        total: Capacity = Fraction(0)
        for a in self.arcs:
            if a.tail in side and a.head not in side:
                total = total + a.capacity
        return total


@dataclass(frozen=True)
class Flow:
    """Per-arc amounts aligned with ``FlowNetwork.arcs``."""

    amounts: tuple[Fraction, ...]
    value: Fraction


@dataclass(frozen=True)
class Cut:
    source_side: frozenset[str]
    capacity: Capacity

    def sorted_source_side(self) -> list[str]:
        return sorted(self.source_side, key=vertex_sort_key)


def vertex_sort_key(name: str) -> tuple[int, int]:
    order = {"s": 0, "b": 1, "c": 2, "t": 3}
    kind = order.get(name[0], 4)
    return (kind, int(name[1:]) if name[1:].isdigit() else 0)


def to_flow_network(net: EqualityNetwork, source_caps: Sequence[Fraction] | None = None) -> FlowNetwork:
    """Build N: s -> b_i (budget), b_i -> c_j (infinite), c_j -> t (price).

    ``source_caps`` overrides the budgets on the source arcs.
    """
    n, k = net.buyer_count, net.good_count
    caps = net.budgets if source_caps is None else tuple(source_caps)
    if len(caps) != n:
        raise ValueError("one source capacity per buyer required")
    names = ["s"] + [net.buyer_name(i) for i in range(n)] + [net.good_name(j) for j in range(k)] + ["t"]
    roles = ["source"] + ["buyer"] * n + ["good"] * k + ["sink"]
    t = n + k + 1
    arcs = [Arc(0, 1 + i, Fraction(caps[i])) for i in range(n)]
    arcs += [Arc(1 + i, 1 + n + j, INF) for i, j in net.edges]
    arcs += [Arc(1 + n + j, t, net.prices[j]) for j in range(k)]
    return FlowNetwork(tuple(names), tuple(arcs), 0, t, tuple(roles))


def flow_from_edge_amounts(net: EqualityNetwork, amounts: Mapping[tuple[int, int], Fraction]) -> Flow:
    """Complete a buyer->good assignment into a flow on ``to_flow_network(net)``.

    Source and sink arcs carry the totals implied by conservation. Pairs that
    are not edges raise ``InfeasibleFlowError``; capacity checks are left to
    ``check_flow``.
    """
    edge_set = set(net.edges)
    spent = [Fraction(0)] * net.buyer_count
    sold = [Fraction(0)] * net.good_count
    for (i, j), x in amounts.items():
        if (i, j) not in edge_set:
            raise InfeasibleFlowError(f"flow on non-edge ({i + 1}, {j + 1})")
        x = as_rational(x)
        spent[i] += x
        sold[j] += x
    fn = to_flow_network(net)
    n = net.buyer_count
    out = []
    for a in fn.arcs:
        if a.tail == fn.source:
            out.append(spent[a.head - 1])
        elif a.head == fn.sink:
            out.append(sold[a.tail - 1 - n])
        else:
            out.append(as_rational(amounts.get((a.tail - 1, a.head - 1 - n), 0)))
    return Flow(tuple(out), sum(spent, Fraction(0)))


def edge_amounts(net: EqualityNetwork, flow: Flow) -> dict[tuple[int, int], Fraction]:
    """Buyer->good amounts of a flow on ``to_flow_network(net)``, zeros included."""
    fn = to_flow_network(net)
    n = net.buyer_count
    out = {}
    for a, x in zip(fn.arcs, flow.amounts):
        if a.tail != fn.source and a.head != fn.sink:
            out[(a.tail - 1, a.head - 1 - n)] = x
    return out


def surpluses(net: EqualityNetwork, f: Flow) -> list[Fraction]:
    """Unspent budget e_i - f(s, b_i) of every buyer."""
    from .maxflow import check_flow

    fn = to_flow_network(net)
    report = check_flow(fn, f, with_gap=False)
    if not report.feasible:
        raise InfeasibleFlowError(f"flow is infeasible: {report.summary()}")
    n = net.buyer_count
    return [net.budgets[i] - f.amounts[i] for i in range(n)]


def squared_surplus_norm(r: Iterable[Fraction]) -> Fraction:
    return sum((Fraction(x) * Fraction(x) for x in r), Fraction(0))
