"""Parametric equality network: source arcs carry max(0, e_i - lambda).

The main entry point is :func:`vertex_move_breakpoints`, which finds for every
vertex the largest lambda at which it still sits on the source side of the
minimum cut with the smallest sink side.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional

from .core import INF, Cut, EqualityNetwork, FlowNetwork, to_flow_network
from .maxflow import SolveStats, TooLargeError, max_flow, min_sink_side_cut, push_relabel


@dataclass(frozen=True)
class ParametricNetwork:
    base: EqualityNetwork
    lambda_max: Fraction


def make_parametric(net: EqualityNetwork) -> ParametricNetwork:
    return ParametricNetwork(net, max(net.budgets))


def _check_lambda(lam) -> Fraction:
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError(f"lambda must be non-negative, got {lam}")
    return lam


def instantiate(pn: ParametricNetwork, lam) -> FlowNetwork:
    lam = _check_lambda(lam)
    caps = [max(Fraction(0), e - lam) for e in pn.base.budgets]
    return to_flow_network(pn.base, caps)


def kappa(pn: ParametricNetwork, lam, stats: Optional[SolveStats] = None) -> Fraction:
    return max_flow(instantiate(pn, lam), stats).value


def min_sink_cut_at(pn: ParametricNetwork, lam, stats: Optional[SolveStats] = None) -> Cut:
    fn = instantiate(pn, lam)
    return min_sink_side_cut(fn, max_flow(fn, stats))


@dataclass(frozen=True)
class CutCapacityFn:
    """``constant + sum(max(0, e - lam) for e in terms)``: convex, non-increasing."""

    constant: Fraction
    terms: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(sorted(Fraction(e) for e in self.terms)))
        object.__setattr__(self, "constant", Fraction(self.constant))

    def __call__(self, lam) -> Fraction:
        lam = Fraction(lam)
        return self.constant + sum((e - lam for e in self.terms if e > lam), Fraction(0))

    @property
    def kinks(self) -> list[Fraction]:
        return sorted(set(self.terms))

    def slope(self, lam) -> int:
        """Right derivative at ``lam``."""
        return -(len(self.terms) - bisect_right(self.terms, Fraction(lam)))


def cut_capacity_function(pn: ParametricNetwork, cut: Cut) -> CutCapacityFn:
    net = pn.base
    side = cut.source_side
    for i, j in net.edges:
        if net.buyer_name(i) in side and net.good_name(j) not in side:
            raise ValueError(f"infinite arc {net.buyer_name(i)}->{net.good_name(j)} crosses the cut")
    constant = sum((p for j, p in enumerate(net.prices) if net.good_name(j) in side), Fraction(0))
    terms = tuple(e for i, e in enumerate(net.budgets) if net.buyer_name(i) not in side)
    return CutCapacityFn(constant, terms)


def intersect(f: CutCapacityFn, g: CutCapacityFn, lo, hi) -> Optional[Fraction]:
    """Largest lambda in [lo, hi] where ``f`` and ``g`` agree; None if they coincide there."""
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    d_lo, d_hi = f(lo) - g(lo), f(hi) - g(hi)
    if d_lo * d_hi > 0:
        raise ValueError("f - g has the same strict sign at both ends")
    points = sorted({lo, hi} | {x for x in f.kinks + g.kinks if lo < x < hi})
    diffs = [f(x) - g(x) for x in points]
    if all(d == 0 for d in diffs):
        return None
    for k in range(len(points) - 1, 0, -1):
        a, b = points[k - 1], points[k]
        da, db = diffs[k - 1], diffs[k]
        if db == 0:
            return b
        if da == 0 or (da < 0) != (db < 0):
            return a + da * (b - a) / (da - db)
    return points[0]


@dataclass
class BreakpointProfile:
    """Per-vertex move values and the nested cuts they describe.

    ``zero_side`` is the source side at lambda = 0 (without ``s``). A vertex
    outside it has move value 0 by convention; a vertex inside it is on the
    source side exactly for lambda in [0, move_lambda[v]].
    """

    network: ParametricNetwork
    move_lambda: dict[str, Fraction]
    zero_side: frozenset[str]
    breakpoints: list[Fraction] = field(default_factory=list)
    stats: SolveStats = field(default_factory=SolveStats)

    def __post_init__(self) -> None:
        if not self.breakpoints:
            self.breakpoints = sorted({x for x in self.move_lambda.values() if x > 0})

    def buyer_moves(self) -> list[Fraction]:
        net = self.network.base
        return [self.move_lambda[net.buyer_name(i)] for i in range(net.buyer_count)]

    def source_side_at(self, lam) -> frozenset[str]:
        lam = _check_lambda(lam)
        if lam == 0:
            return self.zero_side | {"s"}
        return frozenset(v for v in self.zero_side if self.move_lambda[v] >= lam) | {"s"}

    def cut_at(self, lam) -> Cut:
        side = self.source_side_at(lam)
        cut = Cut(side, Fraction(0))
        return Cut(side, cut_capacity_function(self.network, cut)(lam))

    def intervals(self) -> dict[tuple[Fraction, Fraction], frozenset[str]]:
        """Source side on each interval (lo, hi] between consecutive breakpoints."""
        edges = [Fraction(0)] + self.breakpoints
        out = {}
        for lo, hi in zip(edges, edges[1:]):
            out[(lo, hi)] = self.source_side_at(hi)
        if self.breakpoints and self.breakpoints[-1] < self.network.lambda_max:
            out[(self.breakpoints[-1], self.network.lambda_max)] = frozenset({"s"})
        return out


class _Contracted:
    """Solves PN restricted to a vertex window.

    For lambda between two known cuts ``inner`` (source side at a larger
    lambda) and ``outer`` (at a smaller lambda), the min-sink-side cut lies
    between them. Collapsing ``inner`` into s and everything outside
    ``outer`` into t leaves the equality network induced on
    ``outer - inner``. Vertex ids: buyers 0..n-1, goods n..n+k-1.
    """

    def __init__(self, net: EqualityNetwork, stats: SolveStats):
        self.n = net.buyer_count
        self.k = net.good_count
        self.budgets = net.budgets
        self.prices = net.prices
        self.adj = net.neighbours()
        self.denom = lcm(*(x.denominator for x in net.budgets + net.prices))
        self.stats = stats

    def solve(self, lam: Fraction, window: frozenset[int]) -> frozenset[int]:
        """Members of ``window`` on the source side of the min-sink-side cut at ``lam``."""
        n = self.n
        buyers = sorted(v for v in window if v < n)
        goods = sorted(v for v in window if v >= n)
        local = {v: idx + 1 for idx, v in enumerate(buyers + goods)}
        t = len(local) + 1
        scale = lcm(self.denom, lam.denominator)
        tails, heads, caps = [], [], []
        for b in buyers:
            c = (self.budgets[b] - lam) * scale
            tails.append(0)
            heads.append(local[b])
            caps.append(int(c) if c > 0 else 0)
        finite = sum(caps)
        for g in goods:
            c = int(self.prices[g - n] * scale)
            finite += c
            tails.append(local[g])
            heads.append(t)
            caps.append(c)
        surrogate = finite + 1
        for b in buyers:
            lb = local[b]
            for j in self.adj[b]:
                lg = local.get(n + j)
                if lg is not None:
                    tails.append(lb)
                    heads.append(lg)
                    caps.append(surrogate)
        self.stats.record(len(tails))
        _, _, side = push_relabel(t + 1, 0, t, tails, heads, caps, restore=False)
        order = buyers + goods
        return frozenset(order[idx - 1] for idx in range(1, t) if side[idx])

    def names(self, ids: Iterable[int], net: EqualityNetwork) -> list[str]:
        n = self.n
        return [net.buyer_name(v) if v < n else net.good_name(v - n) for v in ids]


def vertex_move_breakpoints(pn: ParametricNetwork, stats: Optional[SolveStats] = None) -> BreakpointProfile:
    """All vertex-move breakpoints of PN.

    The lambda axis is split at the distinct budgets, where every cut capacity
    is linear. Cuts at the split points are found by bisection over the point
    list, then each piece is resolved by the discrete Newton recursion on the
    two bounding cuts. Every max-flow runs on the window between two nested
    cuts, so each recursion level touches each vertex at most once.
    """
    stats = stats if stats is not None else SolveStats()
    net = pn.base
    n, k = net.buyer_count, net.good_count
    solver = _Contracted(net, stats)
    everything = frozenset(range(n + k))

    points = sorted({Fraction(0)} | set(net.budgets))
    cuts: list[Optional[frozenset[int]]] = [None] * len(points)
    cuts[0] = solver.solve(points[0], everything)
    cuts[-1] = frozenset()

    stack = [(0, len(points) - 1)]
    while stack:
        i, j = stack.pop()
        if j - i <= 1:
            continue
        if cuts[i] == cuts[j]:
            for m in range(i + 1, j):
                cuts[m] = cuts[j]
            continue
        mid = (i + j) // 2
        cuts[mid] = cuts[j] | solver.solve(points[mid], cuts[i] - cuts[j])
        stack.append((i, mid))
        stack.append((mid, j))

    move: dict[int, Fraction] = {}
    tasks = [
        (points[q], points[q + 1], cuts[q], cuts[q + 1])
        for q in range(len(points) - 1)
        if cuts[q] != cuts[q + 1]
    ]
    while tasks:
        lo, hi, outer, inner = tasks.pop()
        window = outer - inner
        f = CutCapacityFn(sum((net.prices[v - n] for v in window if v >= n), Fraction(0)))
        g = CutCapacityFn(Fraction(0), tuple(net.budgets[v] for v in window if v < n))
        lam = intersect(f, g, lo, hi)
        if lam is None:
            raise RuntimeError(f"bounding cuts have identical capacity on [{lo}, {hi}]")
        found = solver.solve(lam, window)
        if found == window:
            for v in window:
                move[v] = lam
        else:
            middle = inner | found
            tasks.append((lo, lam, outer, middle))
            tasks.append((lam, hi, middle, inner))

    names = solver.names(range(n + k), net)
    move_lambda = {names[v]: move.get(v, Fraction(0)) for v in range(n + k)}
    zero_side = frozenset(names[v] for v in cuts[0])
    return BreakpointProfile(pn, move_lambda, zero_side, stats=stats)


def call_bound(net: EqualityNetwork) -> int:
    """Upper bound on max-flow calls made by :func:`vertex_move_breakpoints`."""
    return 2 * (net.buyer_count + len(set(net.budgets))) + 2


def denominator_bound(net: EqualityNetwork) -> int:
    return net.buyer_count * lcm(*(x.denominator for x in net.budgets + net.prices))


def bisection_depth(pn: ParametricNetwork) -> int:
    """Halvings needed to shrink [0, lambda_max] below 1 / (2 D^2)."""
    target = Fraction(1, 2 * denominator_bound(pn.base) ** 2)
    width, steps = pn.lambda_max, 0
    while width >= target:
        width /= 2
        steps += 1
    return steps


def oracle_call_count(pn: ParametricNetwork, zero_side_size: int) -> int:
    """Exact number of max-flows :func:`breakpoints_oracle` performs."""
    vertices = pn.base.buyer_count + pn.base.good_count
    return vertices + zero_side_size * bisection_depth(pn)


def breakpoints_oracle(
    pn: ParametricNetwork,
    stats: Optional[SolveStats] = None,
    max_denominator: int = 10**6,
    vertices: Optional[Iterable[str]] = None,
) -> BreakpointProfile:
    """Move values by independent bisection on lambda, one vertex at a time.

    Membership in the min-sink-side cut is monotone in lambda, so each vertex
    is bracketed to width below 1/(2 D^2) and snapped to the unique rational
    with denominator at most D, where D = buyer_count * lcm(input denominators).
    ``vertices`` restricts the run to a subset (the profile then only holds those).
    """
    stats = stats if stats is not None else SolveStats()
    net = pn.base
    D = denominator_bound(net)
    if D > max_denominator:
        raise TooLargeError(f"denominator bound {D} exceeds {max_denominator}")
    target = Fraction(1, 2 * D * D)
    if vertices is None:
        vertices = [net.buyer_name(i) for i in range(net.buyer_count)]
        vertices += [net.good_name(j) for j in range(net.good_count)]

    move: dict[str, Fraction] = {}
    zero_side = set()
    for v in vertices:
        if v not in min_sink_cut_at(pn, 0, stats).source_side:
            move[v] = Fraction(0)
            continue
        zero_side.add(v)
        lo, hi = Fraction(0), pn.lambda_max
        while hi - lo >= target:
            mid = (lo + hi) / 2
            if v in min_sink_cut_at(pn, mid, stats).source_side:
                lo = mid
            else:
                hi = mid
        move[v] = ((lo + hi) / 2).limit_denominator(D)
    return BreakpointProfile(pn, move, frozenset(zero_side), stats=stats)
