"""Exact maximum flow by push-relabel and minimum cuts with the smallest sink side.

Rational capacities are scaled by the lcm of their denominators so the solver
itself runs on Python integers. Infinite arcs get a finite surrogate larger
than every finite cut; it never appears in anything returned.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Optional, Sequence

from .core import INF, Capacity, Cut, Flow, FlowNetwork, format_rational


@dataclass
class SolveStats:
    """Counts max-flow invocations and the arcs they were run on."""

    calls: int = 0
    arcs: int = 0

    def record(self, arc_count: int) -> None:
        self.calls += 1
        self.arcs += arc_count


@dataclass(frozen=True)
class FlowResult:
    flow: Flow
    value: Fraction


@dataclass
class CertificateReport:
    feasible: bool
    conservation_violations: list = field(default_factory=list)
    capacity_violations: list = field(default_factory=list)
    duality_gap: Optional[Fraction] = None

    @property
    def optimal(self) -> bool:
        return self.feasible and self.duality_gap == 0

    def summary(self) -> str:
        parts = []
        if self.capacity_violations:
            parts.append(f"{len(self.capacity_violations)} capacity violation(s)")
        if self.conservation_violations:
            parts.append(f"{len(self.conservation_violations)} conservation violation(s)")
        if self.duality_gap is not None:
            parts.append(f"duality gap {format_rational(self.duality_gap)}")
        return ", ".join(parts) or "ok"


class TooLargeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer core


def push_relabel(
    n: int,
    s: int,
    t: int,
    tails: Sequence[int],
    heads: Sequence[int],
    caps: Sequence[int],
    *,
    restore: bool = True,
) -> tuple[list[int], int, list[bool]]:
    """Maximum flow on an integer network.

    Returns ``(arc_flows, value, source_side)`` where ``source_side[v]`` is
    true iff ``v`` cannot reach ``t`` in the residual graph, i.e. the minimum
    cut with the smallest sink side. With ``restore=False`` only the first
    phase runs and the returned flows form a maximum preflow; the cut and the
    value are already final at that point.
    """
    m = len(tails)
    head = [0] * (2 * m)
    cap = [0] * (2 * m)
    adj: list[list[int]] = [[] for _ in range(n)]
    for k in range(m):
        u, v = tails[k], heads[k]
        head[2 * k] = v
        head[2 * k + 1] = u
        cap[2 * k] = caps[k]
        adj[u].append(2 * k)
        adj[v].append(2 * k + 1)

    excess = [0] * n
    for a in adj[s]:
        c = cap[a]
        if c > 0:
            cap[a] = 0
            cap[a ^ 1] += c
            excess[head[a]] += c
            excess[s] -= c

    height = [n] * n
    count = [0] * (n + 1)
    buckets: list[list[int]] = [[] for _ in range(n)]
    cur = [0] * n

    def global_relabel() -> int:
        for v in range(n):
            height[v] = n
        height[t] = 0
        queue = [t]
        for v in queue:
            hv = height[v] + 1
            for a in adj[v]:
                if cap[a ^ 1] > 0:
                    u = head[a]
                    if height[u] == n and u != s and u != t:
                        height[u] = hv
                        queue.append(u)
        for h in range(n + 1):
            count[h] = 0
        for b in buckets:
            b.clear()
        top = -1
        for v in range(n):
            cur[v] = 0
            h = height[v]
            if v != s and h < n:
                count[h] += 1
                if excess[v] > 0 and v != t:
                    buckets[h].append(v)
                    if h > top:
                        top = h
        return top

    bmax = global_relabel()
    relabels = 0
    relabel_period = n + 1

    while True:
        while bmax >= 0 and not buckets[bmax]:
            bmax -= 1
        if bmax < 0:
            break
        v = buckets[bmax].pop()
        hv = height[v]
        if hv != bmax or excess[v] == 0:
            continue
        av = adj[v]
        deg = len(av)
        i = cur[v]
        ex = excess[v]
        while ex > 0:
            if i == deg:
                mh = 2 * n
                for a in av:
                    if cap[a] > 0:
                        h = height[head[a]]
                        if h < mh:
                            mh = h
                old = hv
                count[old] -= 1
                hv = mh + 1
                if count[old] == 0:
                    # gap: nothing above ``old`` can reach t any more
                    for u in range(n):
                        hu = height[u]
                        if old < hu < n:
                            count[hu] -= 1
                            height[u] = n
                    hv = n
                if hv >= n:
                    hv = n
                else:
                    count[hv] += 1
                height[v] = hv
                i = 0
                relabels += 1
                if hv >= n:
                    break
                continue
            a = av[i]
            c = cap[a]
            if c > 0:
                u = head[a]
                if height[u] == hv - 1:
                    d = ex if ex < c else c
                    cap[a] = c - d
                    cap[a ^ 1] += d
                    ex -= d
                    if excess[u] == 0 and u != t:
                        buckets[hv - 1].append(u)
                        if hv - 1 > bmax:
                            bmax = hv - 1
                    excess[u] += d
                    if d < c:
                        break
            i += 1
        excess[v] = ex
        cur[v] = i
        if ex > 0 and hv < n:
            buckets[hv].append(v)
            if hv > bmax:
                bmax = hv
        if relabels >= relabel_period:
            relabels = 0
            bmax = global_relabel()

    value = excess[t]

    reach_t = [False] * n
    reach_t[t] = True
    queue = [t]
    for v in queue:
        for a in adj[v]:
            if cap[a ^ 1] > 0:
                u = head[a]
                if not reach_t[u]:
                    reach_t[u] = True
                    queue.append(u)
    source_side = [not r for r in reach_t]

    if restore:
        _return_excess(n, s, t, adj, head, cap, excess)

    flows = [caps[k] - cap[2 * k] for k in range(m)]
    return flows, value, source_side


def _return_excess(n, s, t, adj, head, cap, excess) -> None:
    """Second phase: send the remaining excess back to the source."""
    active = [v for v in range(n) if v != s and v != t and excess[v] > 0]
    if not active:
        return
    big = 2 * n + 2
    height = [big] * n
    height[s] = 0
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for a in adj[v]:
            if cap[a ^ 1] > 0:
                u = head[a]
                if height[u] == big and u != t:
                    height[u] = height[v] + 1
                    queue.append(u)
    height[t] = big
    # highest label first
    pending = sorted(active, key=lambda v: height[v])
    inq = [False] * n
    for v in pending:
        inq[v] = True
    cur = [0] * n
    while pending:
        v = pending.pop()
        inq[v] = False
        av = adj[v]
        i = cur[v]
        while excess[v] > 0:
            if i == len(av):
                mh = big
                for a in av:
                    if cap[a] > 0 and height[head[a]] < mh:
                        mh = height[head[a]]
                height[v] = mh + 1
                i = 0
                continue
            a = av[i]
            u = head[a]
            if cap[a] > 0 and height[u] == height[v] - 1:
                d = min(excess[v], cap[a])
                cap[a] -= d
                cap[a ^ 1] += d
                excess[v] -= d
                excess[u] += d
                if u != s and not inq[u]:
                    inq[u] = True
                    pending.append(u)
                if cap[a] > 0:
                    continue
            i += 1
        cur[v] = i
        pending.sort(key=lambda w: height[w])


# ---------------------------------------------------------------------------
# rational front end


def _scale(fn: FlowNetwork) -> tuple[int, list[int]]:
    finite = [a.capacity for a in fn.arcs if a.capacity is not INF]
    scale = lcm(*(c.denominator for c in finite)) if finite else 1
    ints = [int(c * scale) for c in finite]
    surrogate = sum(ints) + 1
    it = iter(ints)
    caps = [surrogate if a.capacity is INF else next(it) for a in fn.arcs]
    return scale, caps


def _solve(fn: FlowNetwork, restore: bool, stats: Optional[SolveStats]):
    if stats is not None:
        stats.record(len(fn.arcs))
    scale, caps = _scale(fn)
    tails = [a.tail for a in fn.arcs]
    heads = [a.head for a in fn.arcs]
    flows, value, side = push_relabel(len(fn.vertices), fn.source, fn.sink, tails, heads, caps, restore=restore)
    return scale, flows, value, side


def max_flow(fn: FlowNetwork, stats: Optional[SolveStats] = None) -> FlowResult:
    scale, flows, value, _ = _solve(fn, True, stats)
    amounts = tuple(Fraction(x, scale) for x in flows)
    v = Fraction(value, scale)
    return FlowResult(Flow(amounts, v), v)


def min_cut(fn: FlowNetwork, stats: Optional[SolveStats] = None) -> Cut:
    """Smallest-sink-side minimum cut without materialising a flow."""
    scale, _, value, side = _solve(fn, False, stats)
    names = frozenset(fn.vertices[v] for v in range(len(fn.vertices)) if side[v])
    return Cut(names, Fraction(value, scale))


def _residual_reaches_sink(fn: FlowNetwork, f: Flow) -> list[bool]:
    into: list[list[int]] = [[] for _ in fn.vertices]
    for k, a in enumerate(fn.arcs):
        into[a.head].append(k)
        into[a.tail].append(k)
    reach = [False] * len(fn.vertices)
    reach[fn.sink] = True
    queue = deque([fn.sink])
    while queue:
        v = queue.popleft()
        for k in into[v]:
            a = fn.arcs[k]
            x = f.amounts[k]
            if a.head == v and not reach[a.tail] and (a.capacity is INF or x < a.capacity):
                reach[a.tail] = True
                queue.append(a.tail)
            elif a.tail == v and not reach[a.head] and x > 0:
                reach[a.head] = True
                queue.append(a.head)
    return reach


def min_sink_side_cut(fn: FlowNetwork, f: FlowResult) -> Cut:
    """Source side = every vertex that cannot reach t in the residual graph of ``f``."""
    reach = _residual_reaches_sink(fn, f.flow)
    if reach[fn.source]:
        raise ValueError("flow is not maximum: the sink is reachable from the source")
    side = frozenset(fn.vertices[v] for v in range(len(fn.vertices)) if not reach[v])
    capacity = fn.cut_capacity(side)
    if capacity != f.value:
        raise ValueError(
            f"duality check failed: cut capacity {capacity} differs from flow value {format_rational(f.value)}"
        )
    return Cut(side, capacity)


def check_flow(fn: FlowNetwork, f: Flow, with_gap: bool = True) -> CertificateReport:
    """Feasibility of ``f`` plus its gap to the maximum flow value."""
    report = CertificateReport(feasible=True)
    if len(f.amounts) != len(fn.arcs):
        report.feasible = False
        report.capacity_violations.append(("arity", len(f.amounts), len(fn.arcs)))
        return report
    balance = [Fraction(0)] * len(fn.vertices)
    for a, x in zip(fn.arcs, f.amounts):
        if x < 0 or (a.capacity is not INF and x > a.capacity):
            report.capacity_violations.append((fn.vertices[a.tail], fn.vertices[a.head], x, a.capacity))
        balance[a.tail] -= x
        balance[a.head] += x
    for v, b in enumerate(balance):
        if v not in (fn.source, fn.sink) and b != 0:
            report.conservation_violations.append((fn.vertices[v], b))
    report.feasible = not report.capacity_violations and not report.conservation_violations
    if report.feasible and -balance[fn.source] != f.value:
        report.feasible = False
        report.conservation_violations.append((fn.source_name, "value mismatch", f.value))
    if with_gap:
        best = max_flow(fn)
        cut = min_sink_side_cut(fn, best)
        report.duality_gap = cut.capacity - (-balance[fn.source])
    return report


def enumerate_min_cuts(fn: FlowNetwork, max_inner: int = 16) -> list[Cut]:
    """All minimum cuts by brute force over source-side subsets (test oracle)."""
    inner = [v for v in range(len(fn.vertices)) if v not in (fn.source, fn.sink)]
    if len(inner) > max_inner:
        raise TooLargeError(f"{len(inner)} inner vertices; enumeration limited to {max_inner}")
    best: Optional[Capacity] = None
    found: list[Cut] = []
    for size in range(len(inner) + 1):
        for chosen in combinations(inner, size):
            side = {fn.source, *chosen}
            total: Capacity = Fraction(0)
            for a in fn.arcs:
                if a.tail in side and a.head not in side:
                    total = total + a.capacity
                    if total is INF:
                        break
            if total is INF:
                continue
            cut = Cut(frozenset(fn.vertices[v] for v in side), total)
            if best is None or total < best:
                best, found = total, [cut]
            elif total == best:
                found.append(cut)
    return found
