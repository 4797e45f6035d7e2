"""Path establishment and forwarding-entry installation.

After the reveal, each controller knows its own nodes' tree distance and
parent. The destination controller picks its entry significant node (the
destination itself, or the argmin of tree distance plus local tail), and
the path is then walked parent by parent: intra edges expand into the
switch path the owning domain committed to when it quoted the cost,
inter edges are physical links. Every step of that walk is local to the
controller that owns the data; the only traffic is the boundary install
request each domain sends its upstream neighbor. The assembled Path
object is simulator output, stitched from the owners' local segments.
"""

from dataclasses import dataclass

from .errors import NoRouteError
from .runtime import handler
from .topology import SwitchId, shortest_paths_from


@dataclass(frozen=True)
class PathSegment:
    kind: str  # "intra" | "inter" | "tail"
    switches: tuple  # ordered along the path (source side first)
    cost: int


@dataclass
class Path:
    switches: tuple  # full switch-level walk, source first
    segments: tuple
    ecg_steps: tuple  # ((u, v, kind) per tree edge, source side first)
    cost: int  # sum of physical link costs, tail included

    @property
    def empty(self):
        return len(self.switches) <= 1

    def hops(self):
        return list(zip(self.switches, self.switches[1:]))


def establish_path(pnet, revealed, v_s, v_t, flow_group=None):
    """Walk from v_t back to v_s over the revealed tree."""
    if v_t == v_s:
        return Path((v_s,), (), (), 0)
    view = revealed.view
    dest_ctrl = pnet.controller_of(v_t.domain)

    segments = []
    if v_t in view.nodes:
        anchor = v_t
        tail = None
    else:
        pick = tail_pick(dest_ctrl, revealed.session_id, v_t)
        if pick is None:
            raise NoRouteError(f"no significant node of {v_t.domain} reaches {v_t}")
        anchor, tail_path, tail_cost = pick
        tail = PathSegment("tail", tail_path, tail_cost)

    sentinel = pnet.network.c_max * len(view.nodes) + 1
    if revealed.dist(anchor) >= sentinel:
        raise NoRouteError(f"{anchor} is unreachable from {v_s}")

    # walk anchor -> source; segments collected destination-side first
    steps = []
    w = anchor
    guard = 0
    while w != v_s:
        guard += 1
        if guard > len(view.nodes):
            raise NoRouteError("parent walk cycled; revealed tree inconsistent")
        parent = revealed.parent(w)
        if parent is None:
            raise NoRouteError(f"{w} has no parent on the tree")
        edge = view.edge_between(parent, w)
        if edge is None:
            raise NoRouteError(f"tree edge {parent}~{w} is not in the graph")
        if edge.kind == "intra":
            owner = pnet.controller_of(w.domain)
            seg = committed_segment(owner, revealed.session_id, parent, w)
            if seg is None:
                raise NoRouteError(f"domain {w.domain} has no usable path {parent}~{w}")
            switches, cost = seg
            if switches[0] != parent:
                switches = tuple(reversed(switches))
            segments.append(PathSegment("intra", switches, cost))
        else:
            segments.append(PathSegment("inter", (parent, w), edge.inter_cost))
        steps.append((parent, w, edge.kind))
        w = parent

    segments.reverse()
    steps.reverse()
    if tail is not None:
        segments.append(tail)
    switches = [v_s]
    for seg in segments:
        swl = seg.switches
        if swl[0] != switches[-1]:
            swl = tuple(reversed(swl))
        switches.extend(swl[1:])
    total = sum(seg.cost for seg in segments)
    return Path(tuple(switches), tuple(segments), tuple(steps), total)


def tail_pick(ctrl, session_id, v_t):
    """Destination-side argmin of revealed distance plus local tail,
    computed entirely inside the destination controller; ties break
    toward the lower canonical node order."""
    state = ctrl.session_state(session_id)
    view, revealed = state["view"], state["revealed"]
    sentinel = ctrl.public.c_max * len(view.nodes) + 1
    best = None
    for v in view.significant_of(ctrl.domain_id):
        if v not in revealed or revealed[v][0] >= sentinel:
            continue
        sp = shortest_paths_from(ctrl.domain, v)
        if v_t not in sp:
            continue
        tail_cost, tail_path = sp[v_t]
        total = revealed[v][0] + tail_cost
        rank = (total, view.node_order(v))
        if best is None or rank < best[0]:
            best = (rank, v, tail_path, tail_cost)
    if best is None:
        return None
    _, v, tail_path, tail_cost = best
    return (v, tail_path, tail_cost)


def committed_segment(ctrl, session_id, u, v):
    """The switch path this domain committed to when quoting (u, v),
    with its physical cost; local to the owning controller."""
    quote = ctrl.session_state(session_id)["quotes"].get(frozenset((u, v)))
    if quote is None or quote.path is None:
        return None
    costs = {ln.key(): ln.cost for ln in ctrl.domain.links}
    cost = sum(costs[frozenset((a, b))] for a, b in zip(quote.path, quote.path[1:]))
    return (quote.path, cost)


def install_entries(pnet, path, flow_id):
    """Install per-switch next hops along the path, destination first.

    A controller writes entries for its own switches directly; when the
    path crosses into another domain, the downstream controller sends an
    install request for the boundary switch."""
    deltas = {}
    for x, y in reversed(path.hops()):
        owner_cid = pnet.network.controller_index(x.domain)
        if y.domain == x.domain:
            pnet.controllers[owner_cid].install(x, flow_id, y)
        else:
            requester = pnet.network.controller_index(y.domain)
            pnet.transport.request(
                requester, owner_cid, "INSTALL_REQ", (flow_id, str(x), str(y))
            )
        deltas.setdefault(x.domain, []).append((x, y))
    return deltas


@handler("INSTALL_REQ")
def _install(ctrl, body):
    flow_id, switch_str, next_hop_str = body
    switch = SwitchId.parse(switch_str)
    next_hop = SwitchId.parse(next_hop_str)
    ctrl.install(switch, flow_id, next_hop)
    return True


def forwarding_walk(pnet, v_s, v_t, flow_id, max_hops=None):
    """Follow installed entries from the source; raises if they dead-end."""
    limit = max_hops or sum(len(d.switches) for d in pnet.network.domains.values())
    here = v_s
    walk = [here]
    while here != v_t:
        if len(walk) > limit:
            raise NoRouteError("forwarding walk exceeded the hop budget")
        ctrl = pnet.controller_of(here.domain)
        nxt = ctrl.forwarding.get((here, flow_id))
        if nxt is None:
            raise NoRouteError(f"no forwarding entry at {here} for {flow_id}")
        here = nxt
        walk.append(here)
    return walk
