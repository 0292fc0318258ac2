"""Seeded instance generators."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import EqualityNetwork


@dataclass(frozen=True)
class BlockSpec:
    """Blocks of buyers as (buyer_count, budget, target surplus), highest surplus first."""

    blocks: tuple[tuple[int, Fraction, Fraction], ...]

    def __init__(self, blocks: Sequence[tuple]) -> None:
        norm = tuple((int(k), Fraction(e), Fraction(r)) for k, e, r in blocks)
        if not norm:
            raise ValueError("at least one block required")
        for k, e, r in norm:
            if k < 1:
                raise ValueError("every block needs at least one buyer")
            if not 0 <= r < e:
                raise ValueError(f"block surplus {r} must satisfy 0 <= r < e = {e}")
        for (_, _, r1), (_, _, r2) in zip(norm, norm[1:]):
            if not r1 > r2:
                raise ValueError("block surpluses must be strictly decreasing")
        object.__setattr__(self, "blocks", norm)

    @classmethod
    def parse(cls, text: str) -> "BlockSpec":
        """``"2:4:1,1:2:0"`` -> two blocks (count:budget:surplus)."""
        blocks = []
        for part in text.split(","):
            fields = part.strip().split(":")
            if len(fields) != 3:
                raise ValueError(f"block {part!r} is not count:budget:surplus")
            blocks.append((int(fields[0]), Fraction(fields[1]), Fraction(fields[2])))
        return cls(blocks)


def gen_random(
    buyers: int,
    goods: int,
    edges: int,
    seed: int,
    budget_range: tuple[int, int] = (1, 12),
    price_range: tuple[int, int] = (1, 12),
) -> EqualityNetwork:
    if buyers < 1 or goods < 1:
        raise ValueError("need at least one buyer and one good")
    if edges < max(buyers, goods):
        raise ValueError(f"too few edges: {edges} < max(buyers, goods) = {max(buyers, goods)}")
    if edges > buyers * goods:
        raise ValueError(f"too many edges: {edges} > {buyers * goods}")
    for lo, hi in (budget_range, price_range):
        if not 1 <= lo <= hi:
            raise ValueError(f"bad integer range [{lo}, {hi}]")
    rng = random.Random(seed)
    budgets = [rng.randint(*budget_range) for _ in range(buyers)]
    prices = [rng.randint(*price_range) for _ in range(goods)]

    bperm = list(range(buyers))
    gperm = list(range(goods))
    rng.shuffle(bperm)
    rng.shuffle(gperm)
    # a pair (idx % n, idx % k) never repeats for idx < max(n, k)
    chosen = {(bperm[idx % buyers], gperm[idx % goods]) for idx in range(max(buyers, goods))}
    extra = edges - len(chosen)
    if extra > 0:
        if edges * 2 > buyers * goods:
            rest = sorted({(i, j) for i in range(buyers) for j in range(goods)} - chosen)
            chosen.update(rng.sample(rest, extra))
        else:
            while len(chosen) < edges:
                chosen.add((rng.randrange(buyers), rng.randrange(goods)))
    return EqualityNetwork(budgets, prices, sorted(chosen))


def gen_blocks(spec: BlockSpec, seed: int, cross_edges: int = 0) -> EqualityNetwork:
    """Network whose balanced surpluses are exactly the block targets.

    A block of k buyers with budget e and surplus r gets k goods priced e - r,
    joined completely to its buyers. ``cross_edges`` extra edges run from
    buyers of later blocks to goods of earlier ones.
    """
    budgets: list[Fraction] = []
    prices: list[Fraction] = []
    edges: list[tuple[int, int]] = []
    owner_b: list[int] = []
    owner_g: list[int] = []
    for idx, (k, e, r) in enumerate(spec.blocks):
        b0, g0 = len(budgets), len(prices)
        budgets += [e] * k
        prices += [e - r] * k
        owner_b += [idx] * k
        owner_g += [idx] * k
        edges += [(b0 + a, g0 + c) for a in range(k) for c in range(k)]
    if cross_edges:
        rng = random.Random(seed)
        pool = [
            (i, j)
            for i in range(len(budgets))
            for j in range(len(prices))
            if owner_b[i] > owner_g[j]
        ]
        edges += rng.sample(pool, min(cross_edges, len(pool)))
    return EqualityNetwork(budgets, prices, edges)
