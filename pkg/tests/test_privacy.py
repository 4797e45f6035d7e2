"""Envelope audits: no foreign domain's private intra cost, as a value or
as a serialized byte pattern, ever reaches another controller's inbox.

The audit network uses large, pairwise-distinct intra costs (20+ bits)
so a byte-pattern match is conclusive, and its tree distances are
checked against the forbidden set up front so legitimately revealed
outputs cannot shadow a private cost.
"""

import random

from pycro import spawn_network, wire
from pycro.encoding import pack_int
from pycro.fastpath import run_cr
from pycro.pspt import reveal_tree, run_pspt
from pycro.runtime import handler
from pycro.topology import MultiDomainNetwork, DomainSpec, Link, SwitchId, build_ecg, intra_pair_costs

C_MAX = 1 << 24


def audit_network(seed):
    """Source domain contributes only its border switch, so every
    revealed distance is a sum through at least one public inter link
    and never equals a single private cost."""
    rng = random.Random(f"audit.{seed}")
    costs = rng.sample(range(1 << 20, C_MAX - 1), 8)
    d1 = DomainSpec("D1", [SwitchId("D1", "s")])
    d2 = DomainSpec("D2")
    d2.switches = [SwitchId("D2", n) for n in ("g1", "g2", "x")]
    d2.links = [
        Link(d2.switches[0], d2.switches[2], costs[0]),
        Link(d2.switches[2], d2.switches[1], costs[1]),
        Link(d2.switches[0], d2.switches[1], costs[2]),
    ]
    d3 = DomainSpec("D3")
    d3.switches = [SwitchId("D3", n) for n in ("h1", "h2", "y")]
    d3.links = [
        Link(d3.switches[0], d3.switches[2], costs[3]),
        Link(d3.switches[2], d3.switches[1], costs[4]),
        Link(d3.switches[0], d3.switches[1], costs[5]),
    ]
    inter = [
        Link(SwitchId("D1", "s"), SwitchId("D2", "g1"), 5),
        Link(SwitchId("D1", "s"), SwitchId("D3", "h1"), 9),
        Link(SwitchId("D2", "g2"), SwitchId("D3", "h2"), 13),
    ]
    return MultiDomainNetwork(C_MAX, {"D1": d1, "D2": d2, "D3": d3}, inter)


def forbidden_by_domain(net, source):
    """Private values per domain: raw intra link costs plus quoted pair
    costs for the flow's significant set."""
    ecg = build_ecg(net, source=source)
    out = {}
    for did, dom in net.domains.items():
        values = {ln.cost for ln in dom.links}
        sig = [n for n in ecg.nodes if n.domain == did]
        if len(sig) >= 2:
            for quote in intra_pair_costs(net, did, sig).values():
                values.add(quote.cost)
        out[did] = values
    return out


def assert_no_output_collision(net, source, forbidden):
    from .oracles import ecg_distances

    ecg = build_ecg(net, source=source)
    revealed = set(ecg_distances(ecg, source).values())
    private = set().union(*forbidden.values())
    assert not revealed & private, "audit setup: a tree distance equals a private cost"


def scan(pnet, forbidden):
    """Check every recorded envelope against every foreign private value,
    both as a decoded integer and as its serialized byte pattern."""
    hits = []
    for env in pnet.transport.trace:
        recipient_domain = pnet.network.domain_ids[env.recipient]
        for did, values in forbidden.items():
            if did == recipient_domain:
                continue
            for value in values:
                if pack_int(value) in env.payload:
                    hits.append((env.kind, did, value, "bytes"))
        decoded = wire.decode(env.payload)
        for did, values in forbidden.items():
            if did == recipient_domain:
                continue
            if _contains_int(decoded, values):
                hits.append((env.kind, did, "decoded"))
    return hits


def _contains_int(obj, values):
    if isinstance(obj, bool):
        return False
    if isinstance(obj, int):
        return obj in values
    if isinstance(obj, list):
        return any(_contains_int(item, values) for item in obj)
    return False


SRC = SwitchId("D1", "s")


def test_setup_has_no_output_collisions():
    net = audit_network(0)
    forbidden = forbidden_by_domain(net, SRC)
    assert_no_output_collision(net, SRC, forbidden)
    assert all(len(v) >= 3 for v in forbidden.values() if v)


def test_baseline_run_leaks_nothing():
    net = audit_network(0)
    forbidden = forbidden_by_domain(net, SRC)
    assert_no_output_collision(net, SRC, forbidden)
    pnet = spawn_network(net, seed=70)
    reveal_tree(pnet, run_pspt(pnet, SRC))
    assert scan(pnet, forbidden) == []
    assert len(pnet.transport.trace) > 50  # the audit actually saw traffic


def test_cr_run_leaks_nothing():
    net = audit_network(0)
    forbidden = forbidden_by_domain(net, SRC)
    pnet = spawn_network(net, seed=71)
    run_cr(pnet, SRC)
    assert scan(pnet, forbidden) == []


def test_scanner_positive_control():
    """A deliberately leaky message is caught, proving scanner sensitivity."""

    @handler("LEAK_TEST")
    def _leak(ctrl, body):
        return None

    net = audit_network(0)
    forbidden = forbidden_by_domain(net, SRC)
    pnet = spawn_network(net, seed=72)
    leaked_value = next(iter(forbidden["D2"]))
    pnet.transport.send(1, 2, "LEAK_TEST", ["oops", leaked_value])
    hits = scan(pnet, forbidden)
    assert hits and all(h[0] == "LEAK_TEST" for h in hits)


def test_reveal_carries_only_owner_nodes():
    net = audit_network(1)
    pnet = spawn_network(net, seed=73)
    result = run_pspt(pnet, SRC)
    reveal_tree(pnet, result)
    for env in pnet.transport.trace:
        if env.kind != "REVEAL":
            continue
        body = wire.decode(env.payload)
        node = SwitchId.parse(body[1])
        assert pnet.network.domain_ids[env.recipient] == node.domain
