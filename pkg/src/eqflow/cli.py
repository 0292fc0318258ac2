"""``eqflow`` command line.

Exit codes: 0 success, 1 verification failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional, Sequence

from .balanced import balanced_flow, verify_balanced
from .bench import format_table, run_bench
from .core import NetworkError, format_rational, to_flow_network
from .generators import BlockSpec, gen_blocks, gen_random
from .io import parse_flow, parse_rational, read_eqnet_file, serialize_eqnet, serialize_flow, write_text
from .maxflow import SolveStats, max_flow, min_sink_side_cut
from .parametric import instantiate, make_parametric, vertex_move_breakpoints
from .report import (
    balanced_report,
    certificate_payload,
    cut_payload,
    instance_meta,
    profile_payload,
)

EXIT_OK, EXIT_UNVERIFIED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _load(path: str):
    try:
        return read_eqnet_file(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except NetworkError as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2))


def cmd_balanced(args) -> int:
    net = _load(args.file)
    stats = SolveStats()
    t0 = time.perf_counter()
    result = balanced_flow(net, stats)
    millis = (time.perf_counter() - t0) * 1000
    cert = verify_balanced(net, result.flow) if args.verify else None
    if args.flow_out:
        write_text(args.flow_out, serialize_flow(net, result.flow))
    report = balanced_report(net, result, stats.calls, millis, args.file, cert)
    if args.json:
        _emit(report)
    else:
        print(f"value {report['value']}")
        print("surpluses " + " ".join(report["surpluses"]))
        print("breakpoints " + (" ".join(report["breakpoints"]) or "-"))
        for idx, blk in enumerate(report["blocks"], start=1):
            buyers = " ".join(blk["buyers"]) or "-"
            goods = " ".join(blk["goods"]) or "-"
            print(f"block {idx} surplus {blk['surplus']}: buyers {buyers} | goods {goods}")
        print(f"calls {stats.calls} ({millis:.1f} ms)")
        if cert is not None:
            _print_certificate(cert)
    if cert is not None and not cert.is_balanced:
        return EXIT_UNVERIFIED
    return EXIT_OK


def cmd_breakpoints(args) -> int:
    net = _load(args.file)
    stats = SolveStats()
    profile = vertex_move_breakpoints(make_parametric(net), stats)
    payload = {"instance": instance_meta(net, args.file), **profile_payload(profile), "calls": stats.calls}
    if args.json:
        _emit(payload)
    else:
        for v, lam in payload["move_lambda"].items():
            print(f"{v} {lam}")
        print("breakpoints " + (" ".join(payload["breakpoints"]) or "-"))
    return EXIT_OK


def cmd_maxflow(args) -> int:
    net = _load(args.file)
    if args.lam is None:
        fn = to_flow_network(net)
    else:
        try:
            lam = parse_rational(args.lam)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        if lam < 0:
            raise InputError(f"lambda must be non-negative, got {args.lam}")
        fn = instantiate(make_parametric(net), lam)
    result = max_flow(fn)
    cut = min_sink_side_cut(fn, result)
    payload = {"instance": instance_meta(net, args.file), "value": format_rational(result.value), **cut_payload(cut)}
    if args.lam is not None:
        payload["lambda"] = args.lam
    if args.json:
        _emit(payload)
    else:
        print(f"value {payload['value']}")
        print("source side " + " ".join(payload["source_side"]))
    return EXIT_OK


def _print_certificate(cert) -> None:
    for check in cert.checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{status} {check.name}" + (f": {check.detail}" if check.detail else ""))
    print("balanced" if cert.is_balanced else "NOT balanced")


def cmd_verify(args) -> int:
    net = _load(args.file)
    try:
        with open(args.flow, encoding="utf-8") as fh:
            flow = parse_flow(fh, net)
    except OSError as exc:
        raise InputError(f"{args.flow}: {exc.strerror or exc}") from None
    except NetworkError as exc:
        raise InputError(f"{args.flow}: {exc}") from None
    cert = verify_balanced(net, flow)
    if args.json:
        _emit({"instance": instance_meta(net, args.file), "verification": certificate_payload(cert)})
    else:
        _print_certificate(cert)
    return EXIT_OK if cert.is_balanced else EXIT_UNVERIFIED


def _int_pair(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {text!r}") from None
    return lo, hi


def cmd_gen(args) -> int:
    try:
        if args.random:
            n, k, m = args.random
            net = gen_random(n, k, m, args.seed, args.budget_range, args.price_range)
        else:
            net = gen_blocks(BlockSpec.parse(args.blocks), args.seed, args.cross_edges)
    except (ValueError, ArithmeticError) as exc:
        raise InputError(str(exc)) from None
    text = serialize_eqnet(net)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        write_text(args.output, text)
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        sizes = [int(x) for x in args.sizes.split(",") if x]
    except ValueError:
        raise InputError(f"bad --sizes {args.sizes!r}") from None
    if not sizes or min(sizes) < 1:
        raise InputError("--sizes needs positive integers")
    rows = run_bench(
        sizes,
        args.seed,
        args.repeats,
        bits=args.bits,
        edges_per_buyer=args.edges_per_buyer,
        baseline_max=args.baseline_max,
        baseline_sample=args.baseline_sample,
    )
    if args.json:
        _emit({"seed": args.seed, "bits": args.bits, "rows": [r.as_dict() for r in rows]})
    else:
        print(format_table(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eqflow", description="Balanced flows in equality networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("balanced", help="compute a balanced flow")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.add_argument("--verify", action="store_true", help="certify the result; exit 1 on failure")
    p.add_argument("--flow-out", metavar="FILE", help="write the flow in flow-file format")
    p.set_defaults(func=cmd_balanced)

    p = sub.add_parser("breakpoints", help="per-vertex move values of the parametric network")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_breakpoints)

    p = sub.add_parser("maxflow", help="max flow and smallest-sink-side min cut")
    p.add_argument("file")
    p.add_argument("--lambda", dest="lam", metavar="R", help="solve the parametric network at this value")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_maxflow)

    p = sub.add_parser("verify", help="check that a flow is balanced")
    p.add_argument("file")
    p.add_argument("--flow", required=True, metavar="FILE")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate an instance")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--random", nargs=3, type=int, metavar=("N", "K", "M"), help="buyers, goods, edges")
    src.add_argument("--blocks", metavar="SPEC", help="count:budget:surplus,... highest surplus first")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", required=True, help="output file, or - for stdout")
    p.add_argument("--budget-range", type=_int_pair, default=(1, 12), metavar="LO,HI")
    p.add_argument("--price-range", type=_int_pair, default=(1, 12), metavar="LO,HI")
    p.add_argument("--cross-edges", type=int, default=0, help="extra edges from later blocks to earlier goods")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="compare the sweep with per-vertex bisection")
    p.add_argument("--sizes", required=True, help="comma-separated buyer counts")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--bits", type=int, default=12, help="budgets and prices drawn from [1, 2^bits - 1]")
    p.add_argument("--edges-per-buyer", type=int, default=8)
    p.add_argument("--baseline-max", type=int, default=64, help="run the baseline fully up to this many buyers")
    p.add_argument("--baseline-sample", type=int, default=2, help="vertices timed when the baseline is sampled")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"eqflow: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
