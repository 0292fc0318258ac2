import random
from fractions import Fraction

import pytest

from eqflow import EqualityNetwork
from eqflow.generators import gen_random

F = Fraction


def fix_a() -> EqualityNetwork:
    return EqualityNetwork([2], [2], [(0, 0)])


def fix_b() -> EqualityNetwork:
    return EqualityNetwork([3, 3], [2, 2], [(0, 0), (1, 0), (1, 1)])


def fix_c() -> EqualityNetwork:
    return EqualityNetwork([5, 1], [2, 2], [(0, 0), (1, 1)])


FIX_B_TEXT = """eqnet 1
buyers 2
goods 2
budget 1 3
budget 2 3
price 1 2
price 2 2
edge 1 1
edge 2 1
edge 2 2
"""


def small_corpus(count: int = 500):
    """Seeded instances with buyers = goods in 2..7, at most 14 edges, integers in [1, 12]."""
    for seed in range(count):
        rng = random.Random(seed)
        n = rng.randint(2, 7)
        m = rng.randint(n, min(14, n * n))
        yield seed, gen_random(n, n, m, seed)


# buyers on these seeds end with all goods saturated by richer buyers
CLAMPED_SEEDS = (7, 20, 44, 64, 71, 85, 93, 142, 158, 163)


@pytest.fixture
def nets():
    return {"A": fix_a(), "B": fix_b(), "C": fix_c()}


# criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
