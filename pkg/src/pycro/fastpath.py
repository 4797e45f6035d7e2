"""Candidate-recommendation tree construction and shared trees.

Every controller keeps an identical plaintext replica of the growing
tree. Each round, each domain locally nominates its best not-yet-in-tree
significant node (tentative distance over edges whose costs it knows:
its own intra quotes plus public inter links). The source controller
then runs a linear tournament of private pairwise comparisons over the
encrypted tentative distances, asks the winner to publish its candidate,
and broadcasts the update. Distances become public here; individual
foreign link costs still never travel in the clear.
"""

from dataclasses import dataclass

from .errors import ConfigurationError, ConnectivityError, NoRouteError
from .pathsetup import Path, PathSegment, establish_path
from .pspt import RevealedTree, _broadcast_init
from .runtime import handler
from .secif import plain_ge
from .topology import PER_FLOW, SHARED, EcgView, SwitchId, build_ecg, shortest_paths_from
from . import wire


@dataclass(frozen=True)
class Candidate:
    node: SwitchId
    dist: int
    parent: SwitchId


class PlainTree:
    """Replicated tree state: node -> (in_tree, dist, parent)."""

    def __init__(self, nodes, session=None, ecg=None):
        self.nodes = list(nodes)
        self.entries = {n: (False, None, None) for n in self.nodes}
        self.session = session
        self.ecg = ecg

    def add(self, node, dist, parent):
        self.entries[node] = (True, dist, parent)

    def in_tree(self, node):
        return self.entries[node][0]

    def dist(self, node):
        return self.entries[node][1]

    def parent(self, node):
        return self.entries[node][2]

    def members(self):
        return [n for n in self.nodes if self.entries[n][0]]

    def serialize(self):
        rows = [
            (str(n), self.entries[n][0], self.entries[n][1],
             str(self.entries[n][2]) if self.entries[n][2] else None)
            for n in self.nodes
        ]
        return wire.encode(rows)


@dataclass(frozen=True)
class EqualFlowGroup:
    group_id: str
    source_domain: str


def local_candidate(ctrl, session_id):
    """The domain's best not-yet-in-tree significant node, or None.

    Scans every graph edge from an in-tree node into one of this
    domain's non-tree nodes whose cost this controller knows (its own
    intra quote, or a public inter cost). Ties break toward the lower
    canonical node order."""
    state = ctrl.session_state(session_id)
    view, quotes = state["view"], state["quotes"]
    replica = state["replica"]
    best = None
    for v in view.significant_of(ctrl.domain_id):
        if replica[v][0]:
            continue
        for edge in view.edges_at(v):
            other = edge.v if edge.u == v else edge.u
            if not replica[other][0]:
                continue
            if edge.kind == "intra":
                cost = quotes[edge.key()].cost
            else:
                cost = edge.inter_cost
            d = replica[other][1] + cost
            rank = (d, view.node_order(v))
            if best is None or rank < best[0]:
                best = (rank, Candidate(v, d, other))
    return best[1] if best else None


def private_compare(pnet, session, holder_a, a, holder_b, b, observer):
    """True iff a < b, with only the boolean landing at the observer.

    Each holder encrypts its value under the shared key and sends the
    ciphertext; the observer runs the blinded-difference comparison with
    a helper. The round protocols below inline the same exchange with a
    per-round value cache.
    """
    for cid, value in ((holder_a, a), (holder_b, b)):
        pnet.controllers[cid].session_state(session.session_id)["cmp_value"] = value
    crypto = pnet.crypto
    ca = crypto.cipher_from_bytes(
        pnet.transport.request(observer, holder_a, "CMP_VALUE", session.session_id)
    )
    cb = crypto.cipher_from_bytes(
        pnet.transport.request(observer, holder_b, "CMP_VALUE", session.session_id)
    )
    return not plain_ge(pnet, session, observer, ca, cb)


@handler("CMP_VALUE")
def _cmp_value(ctrl, body):
    value = ctrl.session_state(body)["cmp_value"]
    return ctrl.crypto.cipher_bytes(ctrl.crypto.encrypt_add(value))


@handler("CR_CAND")
def _cr_candidate(ctrl, body):
    session_id, round_no = body
    state = ctrl.session_state(session_id)
    cand = local_candidate(ctrl, session_id)
    state["candidate"] = cand
    return cand is not None


@handler("CR_CAND_VALUE")
def _cr_candidate_value(ctrl, body):
    """Encrypt this round's tentative distance; absent candidates quote
    the sentinel so they can join the tournament without ever winning."""
    session_id, sentinel = body
    cand = ctrl.session_state(session_id).get("candidate")
    value = cand.dist if cand is not None else sentinel
    return ctrl.crypto.cipher_bytes(ctrl.crypto.encrypt_add(value))


@handler("CR_WINNER")
def _cr_winner(ctrl, body):
    session_id = body
    cand = ctrl.session_state(session_id)["candidate"]
    return (str(cand.node), cand.dist, str(cand.parent))


@handler("CR_UPDATE")
def _cr_update(ctrl, body):
    session_id, node_str, dist, parent_str = body
    state = ctrl.session_state(session_id)
    node = SwitchId.parse(node_str)
    state["replica"][node] = (True, dist, SwitchId.parse(parent_str))
    return True


def run_cr(pnet, source, flow_group=None, ecg=None, session=None):
    """Candidate-recommendation construction; returns the source
    controller's PlainTree (all replicas finish identical)."""
    if ecg is None:
        ecg = build_ecg(pnet.network, source=source, mode=PER_FLOW, flow_group=flow_group)
    if source not in ecg.nodes:
        raise ConfigurationError(f"source {source} is not significant in this graph")
    coordinator = pnet.network.controller_index(source.domain)
    if session is None:
        session = pnet.new_session("cr")
    _broadcast_init(pnet, session, coordinator, ecg, source, flow_group, "cr")
    sentinel = ecg.sentinel
    crypto = pnet.crypto
    cids = sorted(pnet.controllers)

    for _ in range(len(ecg.nodes) - 1):
        session.rounds += 1
        has = {
            cid: pnet.ask(coordinator, cid, "CR_CAND", (session.session_id, session.rounds))
            for cid in cids
        }
        holders = [cid for cid in cids if has[cid]]
        if not holders:
            raise ConnectivityError("tree incomplete but no domain holds a candidate")
        values = {
            cid: crypto.cipher_from_bytes(
                pnet.ask(coordinator, cid, "CR_CAND_VALUE", (session.session_id, sentinel))
            )
            for cid in cids
        }
        c_min = holders[0]
        for cid in cids:
            if cid == c_min:
                continue
            # strict improvement replaces the incumbent; ties keep it
            if not plain_ge(pnet, session, coordinator, values[cid], values[c_min]):
                c_min = cid
        node_str, dist, parent_str = pnet.ask(coordinator, c_min, "CR_WINNER", session.session_id)
        if dist >= sentinel:
            raise ConnectivityError("winning candidate is unreachable; graph disconnected")
        update = (session.session_id, node_str, dist, parent_str)
        for cid in cids:
            pnet.ask(coordinator, cid, "CR_UPDATE", update)

    state = pnet.controllers[coordinator].session_state(session.session_id)
    tree = PlainTree(ecg.nodes, session=session, ecg=ecg)
    for node, (in_tree, dist, parent) in state["replica"].items():
        if in_tree:
            tree.add(node, dist, parent if node != source else None)
    return tree


def replica_snapshots(pnet, session_id):
    """Every controller's replica serialization; the consistency invariant
    says these are byte-identical after each broadcast."""
    out = {}
    for cid, ctrl in pnet.controllers.items():
        replica = ctrl.session_state(session_id)["replica"]
        tree = PlainTree(list(replica))
        for node, (in_tree, dist, parent) in replica.items():
            if in_tree:
                tree.add(node, dist, parent)
        out[cid] = tree.serialize()
    return out


def tree_to_revealed(pnet, tree):
    """Adapt a replicated plaintext tree to the reveal interface that
    path establishment consumes, and seed each controller's local
    revealed map (their replica already holds every value)."""
    per_domain = {did: {} for did in pnet.network.domain_ids}
    for node in tree.nodes:
        per_domain[node.domain][node] = (tree.dist(node), tree.parent(node))
    view = EcgView.from_summary(tree.ecg.structure_summary())
    for did in pnet.network.domain_ids:
        ctrl = pnet.controller_of(did)
        state = ctrl.session_state(tree.session.session_id)
        state["revealed"] = {
            n: (tree.dist(n), tree.parent(n)) for n in tree.nodes if tree.in_tree(n)
        }
    return RevealedTree(tree.session.session_id, per_domain, view)


# -- shared trees for equal-flow groups --


def build_shared_trees(pnet, group):
    """One gateways-only tree per source-domain gateway."""
    ecg = build_ecg(pnet.network, mode=SHARED, flow_group=group.group_id)
    roots = [n for n in ecg.nodes if n.domain == group.source_domain]
    if not roots:
        raise ConfigurationError(f"domain {group.source_domain} has no gateway")
    trees = {}
    for root in roots:
        trees[root] = run_cr(pnet, root, flow_group=group.group_id, ecg=ecg)
    return trees


def answer_flow_query(pnet, group, trees, v_s, v_t):
    """Pick the best of the k*k' gateway pairings and establish the path.

    Candidate length = source tail to gateway i + tree_i distance to
    destination gateway w; the destination controller adds its own tail
    from w and picks the minimum (ties toward the lower (i, w) order)."""
    if v_s.domain != group.source_domain:
        raise ConfigurationError(f"{v_s} is not in group {group.group_id}'s source domain")
    src_ctrl = pnet.controller_of(v_s.domain)
    dst_cid = pnet.network.controller_index(v_t.domain)
    coordinator = src_ctrl.cid

    src_tails = shortest_paths_from(src_ctrl.domain, v_s)
    nodes = next(iter(trees.values())).nodes
    roots = sorted(trees, key=nodes.index)
    dest_gateways = [n for n in nodes if n.domain == v_t.domain]
    candidates = []
    for i, root in enumerate(roots):
        if root not in src_tails:
            continue
        head_cost = src_tails[root][0]
        tree = trees[root]
        for w in dest_gateways:
            if not tree.in_tree(w):
                continue
            candidates.append((i, str(root), str(w), head_cost + tree.dist(w)))
    if not candidates:
        raise NoRouteError(f"no gateway pairing reaches {v_t.domain}")
    chosen = pnet.ask(coordinator, dst_cid, "FLOW_PICK", (str(v_t), candidates))
    if chosen is None:
        raise NoRouteError(f"no candidate reaches {v_t}")
    i, root_str, w_str = chosen
    root, w = SwitchId.parse(root_str), SwitchId.parse(w_str)
    tree = trees[root]

    revealed = tree_to_revealed(pnet, tree)
    core = establish_path(pnet, revealed, root, w)
    segments, switches, cost = list(core.segments), list(core.switches), core.cost
    if w != v_t:
        dest_ctrl = pnet.controllers[dst_cid]
        sp = shortest_paths_from(dest_ctrl.domain, w)
        if v_t not in sp:
            raise NoRouteError(f"{v_t} unreachable from gateway {w} inside {v_t.domain}")
        tail_cost, tail_path = sp[v_t]
        segments.append(PathSegment("tail", tuple(tail_path), tail_cost))
        switches.extend(tail_path[1:])
        cost += tail_cost
    if root != v_s:
        head_cost, head_path = src_tails[root]
        segments.insert(0, PathSegment("tail", tuple(head_path), head_cost))
        switches = list(head_path) + switches[1:]
        cost += head_cost
    return Path(tuple(switches), tuple(segments), core.ecg_steps, cost)


@handler("FLOW_PICK")
def _flow_pick(ctrl, body):
    v_t_str, candidates = body
    v_t = SwitchId.parse(v_t_str)
    tails = shortest_paths_from(ctrl.domain, v_t)
    order = {s: i for i, s in enumerate(ctrl.domain.switches)}
    best = None
    for i, root_str, w_str, length in candidates:
        w = SwitchId.parse(w_str)
        if w == v_t:
            tail = 0
        elif w in tails:
            tail = tails[w][0]
        else:
            continue
        rank = (length + tail, i, order[w])
        if best is None or rank < best[0]:
            best = (rank, (i, root_str, w_str))
    return best[1] if best else None
