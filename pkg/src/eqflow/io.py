"""eqnet v1 and flow-file reading and writing.

eqnet v1 is line oriented; ``#`` starts a comment::

    eqnet 1
    buyers 2
    goods 2
    budget 1 3
    budget 2 3
    price 1 2
    price 2 2
    edge 1 1
    edge 2 1
    edge 2 2

Rationals are written ``a`` or ``a/b``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, TextIO, Union

from .core import (
    DuplicateEdgeError,
    EqualityNetwork,
    Flow,
    IndexRangeError,
    NetworkError,
    NonPositiveValueError,
    edge_amounts,
    flow_from_edge_amounts,
    format_rational,
)

_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?\Z")
_INT = re.compile(r"[+-]?\d+\Z")


class EqnetSyntaxError(NetworkError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _located(cls, message: str, line: int):
    err = cls(f"line {line}: {message}")
    err.line = line
    return err


def parse_rational(token: str) -> Fraction:
    if not _RATIONAL.match(token):
        raise ValueError(f"not a rational: {token!r}")
    num, _, den = token.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in {token!r}")
    return Fraction(int(num), int(den) if den else 1)


def _tokens(text: str):
    """Yield (line_no, [(column, token), ...]) for non-blank lines."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", body)]
        if toks:
            yield lineno, toks


def _read(source: Union[str, TextIO]) -> str:
    return source if isinstance(source, str) else source.read()


def parse_eqnet(source: Union[str, TextIO]) -> EqualityNetwork:
    text = _read(source)
    lines = list(_tokens(text))
    if not lines:
        raise EqnetSyntaxError("empty document", 1)
    lineno, head = lines[0]
    if [t for _, t in head] != ["eqnet", "1"]:
        raise EqnetSyntaxError("expected header 'eqnet 1'", lineno, head[0][0])

    counts: dict[str, tuple[int, int]] = {}
    budgets: dict[int, tuple[Fraction, int]] = {}
    prices: dict[int, tuple[Fraction, int]] = {}
    edges: list[tuple[int, int, int]] = []

    def need(toks, n):
        if len(toks) != n:
            col = toks[n][0] if len(toks) > n else toks[-1][0] + len(toks[-1][1])
            raise EqnetSyntaxError(f"'{toks[0][1]}' takes {n - 1} argument(s)", lineno, col)

    def integer(tok):
        col, t = tok
        if not _INT.match(t):
            raise EqnetSyntaxError(f"expected an integer, got {t!r}", lineno, col)
        return int(t)

    def rational(tok):
        col, t = tok
        try:
            return parse_rational(t)
        except ValueError as exc:
            raise EqnetSyntaxError(str(exc), lineno, col) from None

    for lineno, toks in lines[1:]:
        key = toks[0][1]
        if key in ("buyers", "goods"):
            need(toks, 2)
            if key in counts:
                raise EqnetSyntaxError(f"repeated '{key}' line", lineno)
            value = integer(toks[1])
            if value < 1:
                raise EqnetSyntaxError(f"'{key}' must be at least 1", lineno, toks[1][0])
            counts[key] = (value, lineno)
        elif key in ("budget", "price"):
            need(toks, 3)
            idx = integer(toks[1])
            table = budgets if key == "budget" else prices
            if idx in table:
                raise EqnetSyntaxError(f"repeated {key} for index {idx}", lineno, toks[1][0])
            table[idx] = (rational(toks[2]), lineno)
        elif key == "edge":
            need(toks, 3)
            edges.append((integer(toks[1]), integer(toks[2]), lineno))
        else:
            raise EqnetSyntaxError(f"unknown keyword {key!r}", lineno, toks[0][0])

    for key in ("buyers", "goods"):
        if key not in counts:
            raise EqnetSyntaxError(f"missing '{key}' line", lines[-1][0] + 1)
    n, k = counts["buyers"][0], counts["goods"][0]

    for label, table, size in (("budget", budgets, n), ("price", prices, k)):
        for idx, (value, line) in table.items():
            if not 1 <= idx <= size:
                raise _located(IndexRangeError, f"{label} index {idx} out of range 1..{size}", line)
            if value <= 0:
                raise _located(NonPositiveValueError, f"non-positive {label} {idx}: {format_rational(value)}", line)
        for idx in range(1, size + 1):
            if idx not in table:
                raise EqnetSyntaxError(f"missing {label} for index {idx}", lines[-1][0] + 1)

    seen = set()
    for i, j, line in edges:
        if not (1 <= i <= n and 1 <= j <= k):
            raise _located(IndexRangeError, f"edge ({i}, {j}) out of range", line)
        if (i, j) in seen:
            raise _located(DuplicateEdgeError, f"duplicate edge ({i}, {j})", line)
        seen.add((i, j))

    # isolation is reported by the constructor
    return EqualityNetwork(
        [budgets[i][0] for i in range(1, n + 1)],
        [prices[j][0] for j in range(1, k + 1)],
        [(i - 1, j - 1) for i, j, _ in edges],
    )


def serialize_eqnet(net: EqualityNetwork) -> str:
    out = ["eqnet 1", f"buyers {net.buyer_count}", f"goods {net.good_count}"]
    out += [f"budget {i + 1} {format_rational(e)}" for i, e in enumerate(net.budgets)]
    out += [f"price {j + 1} {format_rational(p)}" for j, p in enumerate(net.prices)]
    out += [f"edge {i + 1} {j + 1}" for i, j in net.edges]
    return "\n".join(out) + "\n"


def parse_flow(source: Union[str, TextIO], net: EqualityNetwork) -> Flow:
    """Read ``flow <buyer> <good> <rational>`` lines; omitted pairs are zero."""
    amounts: dict[tuple[int, int], Fraction] = {}
    edge_set = set(net.edges)
    for lineno, toks in _tokens(_read(source)):
        if toks[0][1] != "flow":
            raise EqnetSyntaxError(f"unknown keyword {toks[0][1]!r}", lineno, toks[0][0])
        if len(toks) != 4:
            raise EqnetSyntaxError("'flow' takes 3 arguments", lineno)
        try:
            i, j = int(toks[1][1]), int(toks[2][1])
        except ValueError:
            raise EqnetSyntaxError("expected integer indices", lineno, toks[1][0]) from None
        try:
            x = parse_rational(toks[3][1])
        except ValueError as exc:
            raise EqnetSyntaxError(str(exc), lineno, toks[3][0]) from None
        if (i - 1, j - 1) in amounts:
            raise _located(DuplicateEdgeError, f"repeated flow for ({i}, {j})", lineno)
        if (i - 1, j - 1) not in edge_set:
            raise _located(IndexRangeError, f"flow on ({i}, {j}), which is not an edge", lineno)
        amounts[(i - 1, j - 1)] = x
    return flow_from_edge_amounts(net, amounts)


def serialize_flow(net: EqualityNetwork, flow: Flow, include_zero: bool = False) -> str:
    lines = []
    for (i, j), x in sorted(edge_amounts(net, flow).items()):
        if x or include_zero:
            lines.append(f"flow {i + 1} {j + 1} {format_rational(x)}")
    return "\n".join(lines) + ("\n" if lines else "")


def read_eqnet_file(path: str) -> EqualityNetwork:
    with open(path, encoding="utf-8") as fh:
        return parse_eqnet(fh)


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def rational_strings(values: Iterable[Fraction]) -> list[str]:
    return [format_rational(v) for v in values]
