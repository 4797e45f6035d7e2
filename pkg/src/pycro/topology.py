"""Multi-domain networks, per-domain cost quoting, equivalent cost graphs.

A network is a set of domains (private topologies) joined by public
inter-domain links. The equivalent cost graph (ECG) collapses each domain
to its significant nodes: every same-domain pair of significant nodes
gets an intra edge priced by the owning domain (its quoted path length,
policy-overridable), and every physical inter-domain link appears as an
inter edge with public cost.
"""

import heapq
import random
from dataclasses import dataclass, field

from .errors import (
    ConfigurationError,
    ConnectivityError,
    TopologyParseError,
    TopologyValidationError,
)

REFUSE = "refuse"

INTRA = "intra"
INTER = "inter"


@dataclass(frozen=True, order=True)
class SwitchId:
    domain: str
    name: str

    def __str__(self):
        return f"{self.domain}:{self.name}"

    @staticmethod
    def parse(text):
        domain, sep, name = text.partition(":")
        if not sep or not domain or not name:
            raise TopologyValidationError(f"switch reference {text!r} is not <domain>:<name>")
        return SwitchId(domain, name)


@dataclass
class Link:
    u: SwitchId
    v: SwitchId
    cost: int
    capacity: int | None = None

    def key(self):
        return frozenset((self.u, self.v))


@dataclass
class DomainSpec:
    domain_id: str
    switches: list[SwitchId] = field(default_factory=list)
    links: list[Link] = field(default_factory=list)
    gateway_marks: set[SwitchId] = field(default_factory=set)

    def adjacency(self):
        adj = {s: [] for s in self.switches}
        for ln in self.links:
            adj[ln.u].append((ln.v, ln.cost, ln.capacity))
            adj[ln.v].append((ln.u, ln.cost, ln.capacity))
        return adj


@dataclass
class PolicyTable:
    """Per-domain quote overrides for significant pairs; REFUSE quotes the
    path length upper limit c_max. Group-specific overrides shadow base ones."""

    base: dict = field(default_factory=dict)  # (domain, frozenset{u,v}) -> int | REFUSE
    by_group: dict = field(default_factory=dict)  # group_id -> same mapping

    def override_for(self, domain_id, u, v, flow_group=None):
        key = (domain_id, frozenset((u, v)))
        if flow_group is not None and key in self.by_group.get(flow_group, {}):
            return self.by_group[flow_group][key]
        return self.base.get(key)

    def set(self, domain_id, u, v, value, flow_group=None):
        key = (domain_id, frozenset((u, v)))
        if flow_group is None:
            self.base[key] = value
        else:
            self.by_group.setdefault(flow_group, {})[key] = value


@dataclass
class MultiDomainNetwork:
    c_max: int
    domains: dict  # domain_id -> DomainSpec, insertion-ordered
    inter_links: list  # list[Link] across domains
    policy: PolicyTable = field(default_factory=PolicyTable)

    @property
    def domain_ids(self):
        return list(self.domains)

    def controller_index(self, domain_id):
        return self.domain_ids.index(domain_id)

    def gateways(self, domain_id=None):
        """Switches with at least one inter-domain link, in canonical order."""
        touched = set()
        for ln in self.inter_links:
            touched.add(ln.u)
            touched.add(ln.v)
        out = []
        for did, dom in self.domains.items():
            if domain_id is not None and did != domain_id:
                continue
            out.extend(s for s in dom.switches if s in touched)
        return out

    def switch_exists(self, sid):
        dom = self.domains.get(sid.domain)
        return dom is not None and sid in dom.switches

    def to_text(self):
        lines = [f"cmax {self.c_max}"]
        for did, dom in self.domains.items():
            lines.append(f"domain {did}")
            for s in dom.switches:
                mark = " gateway" if s in dom.gateway_marks else ""
                lines.append(f"switch {s.name}{mark}")
            for ln in dom.links:
                cap = f" cap {ln.capacity}" if ln.capacity is not None else ""
                lines.append(f"link {ln.u.name} {ln.v.name} cost {ln.cost}{cap}")
        for ln in self.inter_links:
            cap = f" cap {ln.capacity}" if ln.capacity is not None else ""
            lines.append(f"interlink {ln.u} {ln.v} cost {ln.cost}{cap}")
        for (did, pair), value in self.policy.base.items():
            u, v = sorted(pair)
            lines.append(f"policy {did} {u.name} {v.name} {value}")
        return "\n".join(lines) + "\n"


def parse_topology(text):
    """Parse the line-oriented topology grammar into a validated network."""
    c_max = None
    domains = {}
    inter_links = []
    policy = PolicyTable()
    current = None
    link_keys = set()

    def fail(no, msg):
        raise TopologyParseError(no, msg)

    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kw = tok[0]
        if kw == "cmax":
            if len(tok) != 2 or not tok[1].isdigit():
                fail(no, "expected: cmax <int>")
            c_max = int(tok[1])
        elif kw == "domain":
            if len(tok) != 2:
                fail(no, "expected: domain <id>")
            if tok[1] in domains:
                fail(no, f"duplicate domain {tok[1]}")
            current = DomainSpec(tok[1])
            domains[tok[1]] = current
        elif kw == "switch":
            if current is None:
                fail(no, "switch before any domain")
            if len(tok) not in (2, 3) or (len(tok) == 3 and tok[2] != "gateway"):
                fail(no, "expected: switch <name> [gateway]")
            sid = SwitchId(current.domain_id, tok[1])
            if sid in current.switches:
                fail(no, f"duplicate switch {sid}")
            current.switches.append(sid)
            if len(tok) == 3:
                current.gateway_marks.add(sid)
        elif kw == "link":
            if current is None:
                fail(no, "link before any domain")
            ln = _parse_link(no, tok, current.domain_id)
            if ln.key() in link_keys:
                fail(no, f"duplicate link {ln.u} {ln.v}")
            link_keys.add(ln.key())
            current.links.append(ln)
        elif kw == "interlink":
            ln = _parse_interlink(no, tok)
            if ln.key() in link_keys:
                fail(no, f"duplicate interlink {ln.u} {ln.v}")
            link_keys.add(ln.key())
            inter_links.append(ln)
        elif kw == "policy":
            if len(tok) != 5:
                fail(no, "expected: policy <dom> <u> <v> (<int>|refuse)")
            value = REFUSE if tok[4] == REFUSE else _int_or_fail(no, tok[4], "policy cost")
            policy.set(tok[1], SwitchId(tok[1], tok[2]), SwitchId(tok[1], tok[3]), value)
        else:
            fail(no, f"unknown keyword {kw!r}")

    if c_max is None:
        raise TopologyValidationError("missing cmax declaration")
    net = MultiDomainNetwork(c_max, domains, inter_links, policy)
    _validate(net)
    return net


def _int_or_fail(no, text, what):
    try:
        return int(text)
    except ValueError:
        raise TopologyParseError(no, f"{what} {text!r} is not an integer") from None


def _parse_link(no, tok, domain_id):
    # link <u> <v> cost <int> [cap <int>]
    if len(tok) not in (5, 7) or tok[3] != "cost" or (len(tok) == 7 and tok[5] != "cap"):
        raise TopologyParseError(no, "expected: link <u> <v> cost <int> [cap <int>]")
    cost = _int_or_fail(no, tok[4], "cost")
    cap = _int_or_fail(no, tok[6], "capacity") if len(tok) == 7 else None
    return Link(SwitchId(domain_id, tok[1]), SwitchId(domain_id, tok[2]), cost, cap)


def _parse_interlink(no, tok):
    # interlink <domA>:<u> <domB>:<v> cost <int> [cap <int>]
    if len(tok) not in (5, 7) or tok[3] != "cost" or (len(tok) == 7 and tok[5] != "cap"):
        raise TopologyParseError(no, "expected: interlink <dom>:<u> <dom>:<v> cost <int> [cap <int>]")
    try:
        u, v = SwitchId.parse(tok[1]), SwitchId.parse(tok[2])
    except TopologyValidationError as exc:
        raise TopologyParseError(no, str(exc)) from None
    cost = _int_or_fail(no, tok[4], "cost")
    cap = _int_or_fail(no, tok[6], "capacity") if len(tok) == 7 else None
    return Link(u, v, cost, cap)


def _validate(net):
    if net.c_max < 1:
        raise TopologyValidationError("c_max must be at least 1")
    for did, dom in net.domains.items():
        for ln in dom.links:
            for end in (ln.u, ln.v):
                if end not in dom.switches:
                    raise TopologyValidationError(f"link endpoint {end} is not a switch of {did}")
            if ln.u == ln.v:
                raise TopologyValidationError(f"self-loop at {ln.u}")
            _check_cost(net, ln)
    for ln in net.inter_links:
        if ln.u.domain == ln.v.domain:
            raise TopologyValidationError(f"interlink {ln.u} {ln.v} stays inside one domain")
        for end in (ln.u, ln.v):
            if not net.switch_exists(end):
                raise TopologyValidationError(f"interlink endpoint {end} does not exist")
        _check_cost(net, ln)
    for (did, pair), value in net.policy.base.items():
        if did not in net.domains:
            raise TopologyValidationError(f"policy for unknown domain {did}")
        for end in pair:
            if not net.switch_exists(end):
                raise TopologyValidationError(f"policy endpoint {end} does not exist")
        if value != REFUSE and not 1 <= value <= net.c_max:
            raise TopologyValidationError(f"policy cost {value} outside [1, {net.c_max}]")


def _check_cost(net, ln):
    if not 1 <= ln.cost <= net.c_max:
        raise TopologyValidationError(f"cost {ln.cost} of {ln.u}~{ln.v} outside [1, {net.c_max}]")
    if ln.capacity is not None and ln.capacity < 1:
        raise TopologyValidationError(f"capacity {ln.capacity} of {ln.u}~{ln.v} below 1")


# -- intra-domain quoting --


@dataclass(frozen=True)
class Quote:
    """What a domain commits to for one significant pair: the advertised
    cost, the concrete switch path behind it, and the path's bottleneck
    capacity (None when any link is uncapacitated)."""

    cost: int
    path: tuple | None
    capacity: int | None


def shortest_paths_from(domain, start):
    """Plain Dijkstra inside one domain; returns {switch: (dist, path tuple)}."""
    adj = domain.adjacency()
    dist = {start: 0}
    prev = {}
    heap = [(0, 0, start)]
    order = 0
    while heap:
        d, _, u = heapq.heappop(heap)
        if d > dist.get(u, float("inf")):
            continue
        for v, w, _cap in adj[u]:
            nd = d + w
            if nd < dist.get(v, float("inf")):
                dist[v] = nd
                prev[v] = u
                order += 1
                heapq.heappush(heap, (nd, order, v))
    out = {}
    for node, d in dist.items():
        path = [node]
        while path[-1] != start:
            path.append(prev[path[-1]])
        out[node] = (d, tuple(reversed(path)))
    return out


def _path_capacity(domain, path):
    caps = {ln.key(): ln.capacity for ln in domain.links}
    vals = [caps[frozenset((a, b))] for a, b in zip(path, path[1:])]
    bounded = [v for v in vals if v is not None]
    return min(bounded) if bounded else None


def quote_pairs(domain, policy, c_max, significant, flow_group=None):
    """One domain's quotes for its significant pairs, from its own data.

    Defaults to the intra-domain shortest path, capped at c_max; policy
    overrides replace the cost (REFUSE quotes c_max); a physically
    disconnected pair quotes c_max with no committed path.
    """
    nodes = [s for s in significant if s.domain == domain.domain_id]
    quotes = {}
    sp = {v: shortest_paths_from(domain, v) for v in nodes}
    for i, u in enumerate(nodes):
        for v in nodes[i + 1 :]:
            if v in sp[u]:
                d, path = sp[u][v]
                cost = min(d, c_max)
                cap = _path_capacity(domain, path)
            else:
                cost, path, cap = c_max, None, None
            override = policy.override_for(domain.domain_id, u, v, flow_group)
            if override is not None:
                cost = c_max if override == REFUSE else override
            quotes[frozenset((u, v))] = Quote(cost, path, cap)
    return quotes


def intra_pair_costs(net, domain_id, significant, flow_group=None):
    """Library-level wrapper over quote_pairs for one domain of a network."""
    return quote_pairs(net.domains[domain_id], net.policy, net.c_max, significant, flow_group)


# -- equivalent cost graph --

PER_FLOW = "per-flow"
SHARED = "shared"


@dataclass(frozen=True)
class EcgEdge:
    index: int  # canonical, 1-based
    u: SwitchId
    v: SwitchId
    kind: str  # INTRA | INTER
    plain_cost: int  # visible to the owning controller (and to oracles)
    capacity: int | None
    committed_path: tuple | None  # switch path behind an intra edge

    def key(self):
        return frozenset((self.u, self.v))

    def owner_domain(self, domain_order):
        """Intra edges belong to their domain; inter edges to the
        lower-indexed endpoint domain."""
        if self.kind == INTRA:
            return self.u.domain
        du, dv = self.u.domain, self.v.domain
        return min(du, dv, key=domain_order.index)


@dataclass
class EquivalentCostGraph:
    nodes: list  # significant SwitchIds, canonical order
    edges: list  # EcgEdge, index order
    c_max: int
    mode: str
    source: SwitchId | None

    @property
    def sentinel(self):
        return self.c_max * len(self.nodes) + 1

    def node_index(self, node):
        return self.nodes.index(node)

    def structure_summary(self):
        """The public skeleton: node ids plus (u, v, kind, inter cost)."""
        return (
            tuple((n.domain, n.name) for n in self.nodes),
            tuple(
                (e.index, str(e.u), str(e.v), e.kind, e.plain_cost if e.kind == INTER else -1)
                for e in self.edges
            ),
        )


@dataclass(frozen=True)
class ViewEdge:
    index: int
    u: SwitchId
    v: SwitchId
    kind: str
    inter_cost: int | None  # public for inter edges, None for intra

    def key(self):
        return frozenset((self.u, self.v))

    def owner_domain(self, domain_order):
        if self.kind == INTRA:
            return self.u.domain
        return min(self.u.domain, self.v.domain, key=domain_order.index)


class EcgView:
    """A controller's reconstruction of the public ECG skeleton: every
    node and edge, inter costs, but no foreign intra costs."""

    def __init__(self, nodes, edges):
        self.nodes = nodes
        self.edges = edges
        self._by_key = {e.key(): e for e in edges}
        self._order = {n: i for i, n in enumerate(nodes)}
        self._incident = {n: [] for n in nodes}
        for e in edges:
            self._incident[e.u].append(e)
            self._incident[e.v].append(e)

    @classmethod
    def from_summary(cls, summary):
        node_raw, edge_raw = summary
        nodes = [SwitchId(d, n) for d, n in node_raw]
        edges = [
            ViewEdge(idx, SwitchId.parse(u), SwitchId.parse(v), kind, None if cost < 0 else cost)
            for idx, u, v, kind, cost in edge_raw
        ]
        return cls(nodes, edges)

    def node_order(self, node):
        return self._order[node]

    def edge_between(self, u, v):
        return self._by_key.get(frozenset((u, v)))

    def edges_at(self, node):
        return self._incident[node]

    def significant_of(self, domain_id):
        return [n for n in self.nodes if n.domain == domain_id]


def build_ecg(net, source=None, mode=PER_FLOW, flow_group=None, drop_edges=frozenset(), restrict_to_source_component=False):
    """Assemble the equivalent cost graph.

    Per-flow mode takes the flow's source switch as an extra significant
    node; shared mode uses gateways only. `drop_edges` removes edges by
    key (capacity exhaustion during bandwidth allocation), and
    `restrict_to_source_component` then keeps the source's component
    instead of rejecting a graph that other deletions disconnected.
    """
    if mode == PER_FLOW:
        if source is None:
            raise ConfigurationError("per-flow mode needs a source switch")
        if not net.switch_exists(source):
            raise TopologyValidationError(f"source {source} does not exist")
    elif mode == SHARED:
        if source is not None:
            raise ConfigurationError("shared mode takes no source")
    else:
        raise ConfigurationError(f"unknown ECG mode {mode!r}")

    gateways = set(net.gateways())
    nodes = []
    for did, dom in net.domains.items():
        picked = [s for s in dom.switches if s in gateways or (mode == PER_FLOW and s == source)]
        if not picked and len(net.domains) > 1:
            raise ConnectivityError(f"domain {did} has no gateway; it is unreachable")
        nodes.extend(picked)
    pos = {n: i for i, n in enumerate(nodes)}

    edges = []
    for did in net.domain_ids:
        sig = [n for n in nodes if n.domain == did]
        if len(sig) < 2:
            continue
        quotes = intra_pair_costs(net, did, sig, flow_group)
        for pair, quote in quotes.items():
            u, v = sorted(pair, key=pos.get)
            edges.append((u, v, INTRA, quote.cost, quote.capacity, quote.path))
    for ln in net.inter_links:
        u, v = sorted((ln.u, ln.v), key=pos.get)
        edges.append((u, v, INTER, ln.cost, ln.capacity, None))

    edges = [e for e in edges if frozenset((e[0], e[1])) not in drop_edges]
    edges.sort(key=lambda e: (pos[e[0]], pos[e[1]]))
    ecg_edges = [
        EcgEdge(i + 1, u, v, kind, cost, cap, path)
        for i, (u, v, kind, cost, cap, path) in enumerate(edges)
    ]
    ecg = EquivalentCostGraph(nodes, ecg_edges, net.c_max, mode, source)

    if not nodes:
        raise ConnectivityError("no significant nodes: the network has no gateways")
    component = _component(ecg, nodes[0] if source is None else source)
    if len(component) != len(nodes):
        if not restrict_to_source_component:
            missing = sorted(str(n) for n in set(nodes) - component)
            raise ConnectivityError(f"equivalent cost graph is disconnected; unreachable: {missing}")
        keep = [n for n in nodes if n in component]
        kept_edges = [e for e in ecg_edges if e.u in component and e.v in component]
        kept_edges = [
            EcgEdge(i + 1, e.u, e.v, e.kind, e.plain_cost, e.capacity, e.committed_path)
            for i, e in enumerate(kept_edges)
        ]
        ecg = EquivalentCostGraph(keep, kept_edges, net.c_max, mode, source)
    return ecg


def _component(ecg, start):
    adj = {n: set() for n in ecg.nodes}
    for e in ecg.edges:
        adj[e.u].add(e.v)
        adj[e.v].add(e.u)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


# -- synthetic topologies --

# Router/link/gateway-candidate counts of seven published ISP backbones,
# used as named generator presets.
DOMAIN_PRESETS = {
    "I": (318, 758, 231),
    "II": (604, 2268, 242),
    "III": (172, 381, 61),
    "IV": (960, 2821, 507),
    "V": (240, 404, 89),
    "VI": (201, 434, 110),
    "VII": (631, 2078, 246),
}


def generate_synthetic(
    n_domains,
    switches_per_domain,
    n_inter_links,
    seed,
    c_max=9,
    links_per_domain=None,
    gateway_candidates=None,
    with_capacity=False,
    cap_range=(1, 5),
    edge_cost_max=None,
):
    """Random connected multi-domain network, deterministic under seed.

    Link costs are drawn in [1, edge_cost_max or c_max]; declaring a
    larger c_max keeps quoted multi-hop path lengths below the cap.
    """
    if n_domains < 1 or switches_per_domain < 1 or n_inter_links < 1:
        raise ConfigurationError("all size parameters must be at least 1")
    if n_domains >= 2 and n_inter_links < n_domains - 1:
        raise ConfigurationError("too few inter-links to connect the domains")
    cost_hi = min(edge_cost_max or c_max, c_max)
    rng = random.Random(f"pycro.topo.{seed}")
    domains = {}
    for d in range(n_domains):
        did = f"D{d + 1}"
        domains[did] = _random_domain(
            rng, did, switches_per_domain, links_per_domain, gateway_candidates, cost_hi,
            with_capacity, cap_range,
        )
    net = MultiDomainNetwork(c_max, domains, [])
    if n_domains == 1:
        return net
    dids = net.domain_ids
    # a path of inter-links first, so domains are mutually reachable
    chosen = set()
    for i in range(n_domains - 1):
        if not _add_inter(rng, net, dids[i], dids[i + 1], chosen, cost_hi, with_capacity, cap_range):
            raise ConfigurationError("could not place the connecting inter-links")
    attempts = 0
    while len(net.inter_links) < n_inter_links:
        attempts += 1
        if attempts > 200 * n_inter_links:
            raise ConfigurationError("not enough distinct gateway pairs for the requested inter-links")
        a, b = rng.sample(dids, 2)
        _add_inter(rng, net, a, b, chosen, cost_hi, with_capacity, cap_range)
    return net


def preset_network(names, n_inter_links, seed, c_max=9, scale=1.0):
    """Generator preset from named domain profiles (e.g. ["I", "II"]).

    scale < 1 shrinks router/link/gateway counts proportionally for desk
    runs while keeping their ratios.
    """
    rng = random.Random(f"pycro.preset.{seed}")
    domains = {}
    for idx, name in enumerate(names):
        if name not in DOMAIN_PRESETS:
            raise ConfigurationError(f"unknown domain preset {name!r}")
        routers, links, gws = DOMAIN_PRESETS[name]
        routers = max(2, round(routers * scale))
        links = max(routers - 1, round(links * scale))
        gws = max(1, min(routers, round(gws * scale)))
        did = f"D{idx + 1}"
        domains[did] = _random_domain(rng, did, routers, links, gws, c_max, False, (1, 5))
    net = MultiDomainNetwork(c_max, domains, [])
    if len(names) == 1:
        return net
    dids = net.domain_ids
    chosen = set()
    for i in range(len(dids) - 1):
        _add_inter(rng, net, dids[i], dids[i + 1], chosen, c_max, False, (1, 5))
    attempts = 0
    while len(net.inter_links) < n_inter_links and attempts < 200 * n_inter_links:
        attempts += 1
        a, b = rng.sample(dids, 2)
        _add_inter(rng, net, a, b, chosen, c_max, False, (1, 5))
    return net


def _random_domain(rng, did, n_switches, n_links, n_gateway_marks, c_max, with_capacity, cap_range):
    dom = DomainSpec(did)
    dom.switches = [SwitchId(did, f"s{i}") for i in range(n_switches)]
    if n_gateway_marks:
        dom.gateway_marks = set(rng.sample(dom.switches, min(n_gateway_marks, n_switches)))
    keys = set()

    def cap():
        return rng.randint(*cap_range) if with_capacity else None

    for i in range(1, n_switches):
        u = dom.switches[rng.randrange(i)]
        v = dom.switches[i]
        dom.links.append(Link(u, v, rng.randint(1, c_max), cap()))
        keys.add(frozenset((u, v)))
    target = n_links if n_links is not None else round(n_switches * 1.5)
    attempts = 0
    while len(dom.links) < target and attempts < 20 * target:
        attempts += 1
        u, v = rng.sample(dom.switches, 2)
        if frozenset((u, v)) in keys:
            continue
        keys.add(frozenset((u, v)))
        dom.links.append(Link(u, v, rng.randint(1, c_max), cap()))
    return dom


def _add_inter(rng, net, a, b, chosen, c_max, with_capacity, cap_range):
    ua = rng.choice(_gateway_pool(net.domains[a]))
    vb = rng.choice(_gateway_pool(net.domains[b]))
    key = frozenset((ua, vb))
    if key in chosen:
        return False
    chosen.add(key)
    cap = rng.randint(*cap_range) if with_capacity else None
    net.inter_links.append(Link(ua, vb, rng.randint(1, c_max), cap))
    return True


def _gateway_pool(dom):
    return sorted(dom.gateway_marks) if dom.gateway_marks else dom.switches
