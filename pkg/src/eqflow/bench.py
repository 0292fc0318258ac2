"""Parametric sweep vs. per-vertex bisection: max-flow call counts and wall time."""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from .balanced import balanced_flow
from .core import EqualityNetwork
from .generators import gen_random
from .maxflow import SolveStats
from .parametric import (
    breakpoints_oracle,
    call_bound,
    make_parametric,
    min_sink_cut_at,
    oracle_call_count,
)


@dataclass
class BenchRow:
    size: int
    repeat: int
    buyers: int
    goods: int
    edges: int
    distinct_budgets: int
    param_calls: int
    param_bound: int
    param_ms: float
    baseline_calls: int
    baseline_ms: Optional[float]
    baseline_mode: str
    ratio: float

    def as_dict(self) -> dict:
        return asdict(self)


def bench_instance(
    net: EqualityNetwork,
    size: int = 0,
    repeat: int = 0,
    baseline_max: int = 64,
    baseline_sample: int = 2,
    seed: int = 0,
) -> BenchRow:
    """Time one instance both ways.

    Up to ``baseline_max`` buyers the bisection baseline runs completely.
    Beyond that its call count is computed exactly (every bisection has the
    same fixed depth) and its wall time is extrapolated from
    ``baseline_sample`` vertices of the zero-lambda source side.
    """
    pn = make_parametric(net)
    stats = SolveStats()
    t0 = time.perf_counter()
    balanced_flow(net, stats)
    param_ms = (time.perf_counter() - t0) * 1000
    # the last call is the reduced-network solve, not part of the sweep
    sweep_calls = stats.calls - 1

    base = SolveStats()
    if net.buyer_count <= baseline_max:
        t0 = time.perf_counter()
        breakpoints_oracle(pn, base)
        baseline_ms: Optional[float] = (time.perf_counter() - t0) * 1000
        baseline_calls = base.calls
        mode = "full"
    else:
        zero_side = min_sink_cut_at(pn, 0).source_side - {"s"}
        baseline_calls = oracle_call_count(pn, len(zero_side))
        baseline_ms = None
        if baseline_sample > 0 and zero_side:
            rng = random.Random(seed)
            picked = rng.sample(sorted(zero_side), min(baseline_sample, len(zero_side)))
            t0 = time.perf_counter()
            breakpoints_oracle(pn, base, vertices=picked)
            per_call = (time.perf_counter() - t0) * 1000 / base.calls
            baseline_ms = per_call * baseline_calls
        mode = "sampled"
    return BenchRow(
        size=size,
        repeat=repeat,
        buyers=net.buyer_count,
        goods=net.good_count,
        edges=len(net.edges),
        distinct_budgets=len(set(net.budgets)),
        param_calls=sweep_calls,
        param_bound=call_bound(net),
        param_ms=round(param_ms, 3),
        baseline_calls=baseline_calls,
        baseline_ms=None if baseline_ms is None else round(baseline_ms, 3),
        baseline_mode=mode,
        ratio=sweep_calls / baseline_calls,
    )


def bench_network(size: int, seed: int, repeat: int, bits: int = 12, edges_per_buyer: int = 8) -> EqualityNetwork:
    """Random instance; prices are drawn from 3/4 of the budget range so surpluses appear."""
    edges = min(edges_per_buyer * size, size * size)
    top = (1 << bits) - 1
    price_top = max(1, top * 3 // 4)
    return gen_random(size, size, edges, seed * 1_000_003 + size * 101 + repeat, (1, top), (1, price_top))


def run_bench(
    sizes: Sequence[int],
    seed: int,
    repeats: int = 1,
    bits: int = 12,
    edges_per_buyer: int = 8,
    baseline_max: int = 64,
    baseline_sample: int = 2,
) -> list[BenchRow]:
    rows = []
    for size in sizes:
        for rep in range(repeats):
            net = bench_network(size, seed, rep, bits, edges_per_buyer)
            rows.append(bench_instance(net, size, rep, baseline_max, baseline_sample, seed))
    return rows


def format_table(rows: Sequence[BenchRow]) -> str:
    header = (
        f"{'size':>6} {'rep':>3} {'edges':>6} {'calls':>6} {'bound':>6} {'ms':>10} "
        f"{'base calls':>11} {'base ms':>12} {'mode':>8} {'ratio':>8}"
    )
    lines = [header, "-" * len(header)]
    for r in rows:
        base_ms = "-" if r.baseline_ms is None else f"{r.baseline_ms:.1f}"
        lines.append(
            f"{r.size:>6} {r.repeat:>3} {r.edges:>6} {r.param_calls:>6} {r.param_bound:>6} "
            f"{r.param_ms:>10.1f} {r.baseline_calls:>11} {base_ms:>12} {r.baseline_mode:>8} {r.ratio:>8.4f}"
        )
    return "\n".join(lines)
