"""JSON-ready run reports. Rationals are always strings ("a" or "a/b")."""

from __future__ import annotations

from typing import Optional

from .balanced import BalancedFlowResult, BalancednessCertificate, Blocks
from .core import Cut, EqualityNetwork, Flow, edge_amounts, format_rational, vertex_sort_key
from .parametric import BreakpointProfile


def instance_meta(net: EqualityNetwork, path: Optional[str] = None) -> dict:
    meta = {"buyers": net.buyer_count, "goods": net.good_count, "edges": len(net.edges)}
    if path is not None:
        meta["file"] = path
    return meta


def blocks_payload(net: EqualityNetwork, blocks: Blocks) -> list[dict]:
    return [
        {
            "surplus": format_rational(b.surplus),
            "buyers": [net.buyer_name(i) for i in b.buyers],
            "goods": [net.good_name(j) for j in b.goods],
        }
        for b in blocks
    ]


def flow_payload(net: EqualityNetwork, flow: Flow) -> list[dict]:
    return [
        {"buyer": net.buyer_name(i), "good": net.good_name(j), "amount": format_rational(x)}
        for (i, j), x in sorted(edge_amounts(net, flow).items())
        if x
    ]


def profile_payload(profile: BreakpointProfile) -> dict:
    return {
        "breakpoints": [format_rational(x) for x in profile.breakpoints],
        "move_lambda": {
            v: format_rational(profile.move_lambda[v]) for v in sorted(profile.move_lambda, key=vertex_sort_key)
        },
    }


def certificate_payload(cert: BalancednessCertificate) -> dict:
    return {
        "is_balanced": cert.is_balanced,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in cert.checks],
    }


def balanced_report(
    net: EqualityNetwork,
    result: BalancedFlowResult,
    calls: int,
    millis: float,
    path: Optional[str] = None,
    cert: Optional[BalancednessCertificate] = None,
) -> dict:
    report = {
        "instance": instance_meta(net, path),
        "value": format_rational(result.value),
        "surpluses": [format_rational(x) for x in result.surpluses],
        "blocks": blocks_payload(net, result.blocks),
        **profile_payload(result.profile),
        "flow": flow_payload(net, result.flow),
        "calls": calls,
        "millis": round(millis, 3),
    }
    if cert is not None:
        report["verification"] = certificate_payload(cert)
    return report


def cut_payload(cut: Cut) -> dict:
    return {"source_side": cut.sorted_source_side(), "capacity": format_rational(cut.capacity)}
