"""Balanced flows: computation, block structure and certification."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    EqualityNetwork,
    Flow,
    FlowNetwork,
    edge_amounts,
    surpluses,
    to_flow_network,
)
from .maxflow import SolveStats, check_flow, max_flow
from .parametric import BreakpointProfile, make_parametric, vertex_move_breakpoints


class BalancedFlowError(RuntimeError):
    """Internal inconsistency: the reduced network did not saturate its source arcs."""


@dataclass(frozen=True)
class Block:
    buyers: tuple[int, ...]
    goods: tuple[int, ...]
    surplus: Fraction


@dataclass(frozen=True)
class Blocks:
    blocks: tuple[Block, ...]
    # (good, block indices sending it flow) for goods fed by more than one block
    cross_flow: tuple[tuple[int, tuple[int, ...]], ...] = ()

    def __iter__(self):
        return iter(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __getitem__(self, idx: int) -> Block:
        return self.blocks[idx]

    def block_of_buyer(self) -> dict[int, int]:
        return {b: idx for idx, blk in enumerate(self.blocks) for b in blk.buyers}

    def block_of_good(self) -> dict[int, int]:
        return {g: idx for idx, blk in enumerate(self.blocks) for g in blk.goods}


@dataclass(frozen=True)
class BalancedFlowResult:
    flow: Flow
    value: Fraction
    surpluses: list[Fraction]
    blocks: Blocks
    profile: BreakpointProfile
    reduced_caps: list[Fraction]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class BalancednessCertificate:
    checks: tuple[CheckResult, ...]

    @property
    def is_balanced(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def reduced_network(net: EqualityNetwork, move_lambda: Sequence[Fraction]) -> FlowNetwork:
    """N with source arcs e_i - lambda_i."""
    if len(move_lambda) != net.buyer_count:
        raise ValueError("one value per buyer required")
    caps = []
    for i, (e, lam) in enumerate(zip(net.budgets, move_lambda)):
        lam = Fraction(lam)
        if lam < 0 or lam > e:
            raise ValueError(f"move value {lam} for buyer {i + 1} outside [0, {e}]")
        caps.append(e - lam)
    return to_flow_network(net, caps)


def balanced_flow(net: EqualityNetwork, stats: Optional[SolveStats] = None) -> BalancedFlowResult:
    pn = make_parametric(net)
    profile = vertex_move_breakpoints(pn, stats)
    # A buyer whose goods are all taken by richer buyers spends nothing, yet
    # with a zero-capacity source arc it rides along to the source side at
    # its neighbours' (larger) move value. Its surplus is its whole budget.
    lams = [min(e, lam) for e, lam in zip(net.budgets, profile.buyer_moves())]
    reduced = reduced_network(net, lams)
    result = max_flow(reduced, stats)
    caps = [e - lam for e, lam in zip(net.budgets, lams)]
    # source arcs come first in canonical order
    short = [
        (net.buyer_name(i), caps[i], result.flow.amounts[i])
        for i in range(net.buyer_count)
        if result.flow.amounts[i] != caps[i]
    ]
    if short:
        detail = ", ".join(f"{b}: {x} of {c}" for b, c, x in short[:10])
        raise BalancedFlowError(f"unsaturated source arcs in the reduced network: {detail}")
    flow = Flow(result.flow.amounts, result.value)
    return BalancedFlowResult(
        flow=flow,
        value=result.value,
        surpluses=list(lams),
        blocks=blocks_from_surpluses(net, flow),
        profile=profile,
        reduced_caps=caps,
    )


def blocks_from_surpluses(net: EqualityNetwork, f: Flow) -> Blocks:
    """Group buyers by equal surplus, highest first, and attach goods.

    A good belongs to the block that sends it flow. Goods with no inflow go to
    the lowest-surplus block among their neighbours. A good fed by several
    blocks is recorded in ``cross_flow`` and assigned to the lowest-surplus
    one of them.
    """
    r = surpluses(net, f)
    levels = sorted(set(r), reverse=True)
    if not levels or levels[-1] != 0:
        levels.append(Fraction(0))
    index = {x: idx for idx, x in enumerate(levels)}
    buyer_block = [index[x] for x in r]

    senders: list[set[int]] = [set() for _ in range(net.good_count)]
    adjacent: list[set[int]] = [set() for _ in range(net.good_count)]
    for (i, j), x in edge_amounts(net, f).items():
        adjacent[j].add(buyer_block[i])
        if x > 0:
            senders[j].add(buyer_block[i])

    good_block = []
    cross = []
    for j in range(net.good_count):
        if senders[j]:
            good_block.append(max(senders[j]))
            if len(senders[j]) > 1:
                cross.append((j, tuple(sorted(senders[j]))))
        else:
            good_block.append(max(adjacent[j]))

    blocks = tuple(
        Block(
            tuple(i for i in range(net.buyer_count) if buyer_block[i] == idx),
            tuple(j for j in range(net.good_count) if good_block[j] == idx),
            level,
        )
        for idx, level in enumerate(levels)
    )
    return Blocks(blocks, tuple(cross))


def verify_balanced(net: EqualityNetwork, f: Flow) -> BalancednessCertificate:
    """Check a flow against the block characterisation of balanced flows.

    The checks are necessary conditions; passing them is strong evidence, not
    a proof, of balancedness.
    """
    fn = to_flow_network(net)
    report = check_flow(fn, f, with_gap=False)
    checks: list[CheckResult] = []
    if not report.feasible:
        checks.append(CheckResult("maximality", False, f"infeasible flow: {report.summary()}"))
        return BalancednessCertificate(tuple(checks))
    best = max_flow(fn).value
    checks.append(
        CheckResult(
            "maximality",
            f.value == best,
            "" if f.value == best else f"value {f.value} below maximum {best}",
        )
    )

    blocks = blocks_from_surpluses(net, f)
    levels = [b.surplus for b in blocks]
    ordered = all(a > b for a, b in zip(levels, levels[1:])) and levels[-1] >= 0
    checks.append(CheckResult("block_ordering", ordered, "" if ordered else f"surplus levels {levels}"))

    amounts = edge_amounts(net, f)
    sold = [Fraction(0)] * net.good_count
    for (i, j), x in amounts.items():
        sold[j] += x
    unsaturated = {j for j in range(net.good_count) if sold[j] < net.prices[j]}

    bad = [
        net.good_name(j)
        for blk in blocks
        if blk.surplus > 0
        for j in blk.goods
        if j in unsaturated
    ]
    checks.append(CheckResult("saturation", not bad, f"unsold goods in positive blocks: {bad}" if bad else ""))

    buyer_block = blocks.block_of_buyer()
    good_block = blocks.block_of_good()
    stray = [
        f"{net.buyer_name(i)}->{net.good_name(j)}"
        for (i, j), x in amounts.items()
        if x > 0 and buyer_block[i] != good_block[j]
    ]
    detail = ""
    if stray:
        detail = "cross-block flow " + ", ".join(stray)
    checks.append(CheckResult("flow_locality", not stray, detail))

    late = [
        f"{net.buyer_name(i)}->{net.good_name(j)}"
        for i, j in net.edges
        if good_block[j] > buyer_block[i]
    ]
    checks.append(
        CheckResult("edge_locality", not late, f"edges into later blocks: {', '.join(late)}" if late else "")
    )

    r = surpluses(net, f)
    loose = [
        f"{net.buyer_name(i)}->{net.good_name(j)}"
        for i, j in net.edges
        if r[i] > 0 and j in unsaturated
    ]
    checks.append(
        CheckResult(
            "surplus_edges",
            not loose,
            f"positive-surplus buyer adjacent to unsold good: {', '.join(loose)}" if loose else "",
        )
    )
    return BalancednessCertificate(tuple(checks))


# ---------------------------------------------------------------------------
# squared-norm oracle


class OracleConvergenceError(RuntimeError):
    pass


def _spend_rank(net: EqualityNetwork) -> list[Fraction]:
    """max_{T subset S} (e(T) - p(N(T))) for every buyer subset S (bitmask).

    The most a buyer set S can spend in any flow is e(S) minus this value.
    """
    n = net.buyer_count
    adj_mask = [0] * n
    for i, j in net.edges:
        adj_mask[i] |= 1 << j
    size = 1 << n
    excess = [Fraction(0)] * size
    nbr = [0] * size
    budget = [Fraction(0)] * size
    for mask in range(1, size):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        nbr[mask] = nbr[rest] | adj_mask[low]
        budget[mask] = budget[rest] + net.budgets[low]
        price = sum((net.prices[j] for j in range(net.good_count) if nbr[mask] >> j & 1), Fraction(0))
        excess[mask] = budget[mask] - price
    best = excess[:]
    best[0] = Fraction(0)
    for bit in range(n):
        for mask in range(size):
            if mask >> bit & 1:
                other = best[mask ^ (1 << bit)]
                if other > best[mask]:
                    best[mask] = other
    return best


def _solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    size = len(rhs)
    rows = [row[:] + [b] for row, b in zip(matrix, rhs)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular system")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        pv = rows[col][col]
        rows[col] = [x / pv for x in rows[col]]
        for r in range(size):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return [rows[r][size] for r in range(size)]


def _dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def squared_norm_oracle(
    net: EqualityNetwork,
    tolerance=Fraction(1, 10**9),
    max_iterations: int = 10_000,
    max_buyers: int = 16,
) -> list[Fraction]:
    """Surplus vector minimising the squared norm over all maximum flows.

    With ``y = spend - budget``, the vectors ``y`` of maximum flows form the
    base polytope of the submodular function S -> -best[S] (see
    ``_spend_rank``), so the answer is minus its minimum-norm point. That point
    is found with Wolfe's fully corrective conditional-gradient method in exact
    arithmetic, stopping once the gap <x, x - q> is at most ``tolerance``. The
    squared distance to the optimum is bounded by that gap. Nothing here uses
    the max-flow solver or the parametric code. Integer inputs get their
    result snapped to denominators of at most buyer_count.
    """
    n = net.buyer_count
    if n > max_buyers:
        raise ValueError(f"{n} buyers; the oracle handles at most {max_buyers}")
    tolerance = Fraction(tolerance)
    best = _spend_rank(net)

    def lmo(weights: Sequence[Fraction]) -> list[Fraction]:
        # greedy vertex of {y = x - e : x spend vector of a max flow} minimising <w, y>
        order = sorted(range(n), key=lambda i: (weights[i], i))
        y = [Fraction(0)] * n
        mask = 0
        for i in order:
            nxt = mask | (1 << i)
            y[i] = best[mask] - best[nxt]
            mask = nxt
        return y

    corral = [lmo([Fraction(0)] * n)]
    coeffs = [Fraction(1)]
    x = corral[0][:]
    for _ in range(max_iterations):
        q = lmo(x)
        gap = _dot(x, x) - _dot(x, q)
        if gap <= tolerance:
            break
        corral.append(q)
        coeffs.append(Fraction(0))
        while True:
            size = len(corral)
            gram = [[_dot(a, b) for b in corral] + [Fraction(1)] for a in corral]
            gram.append([Fraction(1)] * size + [Fraction(0)])
            alpha = _solve_exact(gram, [Fraction(0)] * size + [Fraction(1)])[:size]
            if all(a > 0 for a in alpha):
                coeffs = alpha
                break
            theta = min(c / (c - a) if c != a else Fraction(0) for c, a in zip(coeffs, alpha) if a <= 0)
            coeffs = [theta * a + (1 - theta) * c for a, c in zip(alpha, coeffs)]
            keep = [idx for idx, c in enumerate(coeffs) if c > 0]
            corral = [corral[idx] for idx in keep]
            coeffs = [coeffs[idx] for idx in keep]
        x = [sum((c * p[i] for c, p in zip(coeffs, corral)), Fraction(0)) for i in range(n)]
    else:
        raise OracleConvergenceError(f"no convergence within {max_iterations} iterations")

    r = [-v for v in x]
    if all(v.denominator == 1 for v in net.budgets + net.prices):
        r = [v.limit_denominator(n) for v in r]
    return r
