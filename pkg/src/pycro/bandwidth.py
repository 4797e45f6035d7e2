"""Iterated shortest-path bandwidth allocation.

Loop until the demand is met: build the residual graph (minus exhausted
edges), run the tree protocol, establish the shortest path, find its
bottleneck capacity through a private tournament of the per-domain
minima, allocate min(bottleneck, residual demand), subtract, delete
edges that reach zero (or the whole path, in whole-path mode).

Capacity is tracked per graph edge by the owning controller: a domain
owns its intra edges (capacity = bottleneck of the committed path at
quote time) and the lower-indexed endpoint domain owns each inter edge.
Destination tails below the significant-node level are not capacity
constrained by this model.
"""

from dataclasses import dataclass

from .errors import (
    AllocationUnsatisfiableError,
    ConfigurationError,
    ConnectivityError,
    NoRouteError,
)
from .fastpath import run_cr, tree_to_revealed
from .pathsetup import establish_path
from .pspt import reveal_tree, run_pspt
from .runtime import handler
from .secif import plain_ge
from .topology import PER_FLOW, EcgView, SwitchId, build_ecg

ZERO_CAP = "zero-cap"
WHOLE_PATH = "whole-path"


@dataclass
class FlowAllocation:
    demand: int
    paths: list  # (Path, allocated amount)
    total_cost: int
    satisfied: bool

    @property
    def allocated(self):
        return sum(a for _, a in self.paths)


def allocation_cost(alloc):
    """Total cost: sum of allocated bandwidth times path length."""
    return sum(amount * path.cost for path, amount in alloc.paths)


@handler("BA_INIT")
def _ba_init(ctrl, body):
    """Derive this controller's owned-edge capacities for the session."""
    session_id, node_raw, edge_raw, flow_group = body
    view = EcgView.from_summary((node_raw, edge_raw))
    quotes = ctrl.quotes_for(view.significant_of(ctrl.domain_id), flow_group)
    inter_caps = {frozenset((u, v)): cap for u, v, _cost, cap in ctrl.public.inter_links}
    owned = {}
    order = list(ctrl.public.domain_ids)
    for edge in view.edges:
        if edge.owner_domain(order) != ctrl.domain_id:
            continue
        if edge.kind == "intra":
            owned[edge.key()] = quotes[edge.key()].capacity
        else:
            owned[edge.key()] = inter_caps.get(edge.key())
    state = ctrl.session_state(session_id)
    state["capacity"] = owned  # edge key -> remaining (None = unbounded)
    state["quotes_ba"] = quotes
    return True


def _steps_to_keys(steps):
    return [frozenset((SwitchId.parse(u), SwitchId.parse(v))) for u, v, _k in steps]


@handler("BA_LOCAL_MIN")
def _ba_local_min(ctrl, body):
    """Minimum remaining capacity over this domain's edges on the path;
    None when the domain owns no bounded edge on it."""
    session_id, steps = body
    capacity = ctrl.session_state(session_id)["capacity"]
    mins = [
        capacity[key]
        for key in _steps_to_keys(steps)
        if key in capacity and capacity[key] is not None
    ]
    local = min(mins) if mins else None
    ctrl.session_state(session_id)["local_min"] = local
    return local is not None


@handler("BA_CAP_VALUE")
def _ba_cap_value(ctrl, body):
    session_id = body
    value = ctrl.session_state(session_id)["local_min"]
    return ctrl.crypto.cipher_bytes(ctrl.crypto.encrypt_add(value))


@handler("BA_CAP_REVEAL")
def _ba_cap_reveal(ctrl, body):
    return ctrl.session_state(body)["local_min"]


@handler("BA_SUBTRACT")
def _ba_subtract(ctrl, body):
    """Subtract the allocated amount on owned path edges; report which
    edges this controller deleted."""
    session_id, steps, amount, delete_mode = body
    capacity = ctrl.session_state(session_id)["capacity"]
    deleted = []
    for key in _steps_to_keys(steps):
        if key not in capacity:
            continue
        if capacity[key] is not None:
            capacity[key] -= amount
            if capacity[key] < 0:
                raise ConfigurationError("capacity went negative; allocation bug")
        if delete_mode == WHOLE_PATH or capacity[key] == 0:
            deleted.append(sorted(str(s) for s in key))
    return deleted


def local_min_capacity(pnet, session_id, domain_id, path):
    """Library wrapper over the per-domain bottleneck scan."""
    ctrl = pnet.controller_of(domain_id)
    steps = [(u if isinstance(u, str) else str(u), v if isinstance(v, str) else str(v), k) for u, v, k in path.ecg_steps]
    present = _ba_local_min(ctrl, (session_id, steps))
    return ctrl.session_state(session_id)["local_min"] if present else None


def run_ba(pnet, v_s, v_t, demand, mode="cr", delete_mode=ZERO_CAP, flow_group=None):
    """Allocate paths until the demand is covered or the graph runs dry."""
    if demand < 1:
        raise ConfigurationError("demand must be at least 1")
    if delete_mode not in (ZERO_CAP, WHOLE_PATH):
        raise ConfigurationError(f"unknown delete mode {delete_mode!r}")
    coordinator = pnet.network.controller_index(v_s.domain)
    ba_session = pnet.new_session("ba")
    base_ecg = build_ecg(pnet.network, source=v_s, mode=PER_FLOW, flow_group=flow_group)
    summary = base_ecg.structure_summary()
    init_body = (ba_session.session_id, summary[0], summary[1], flow_group)
    for cid in pnet.controllers:
        pnet.ask(coordinator, cid, "BA_INIT", init_body)

    significant = set(base_ecg.nodes)
    deleted = set()
    allocations = []
    total_cost = 0
    residual = demand

    while residual > 0:
        try:
            path, length = _next_path(
                pnet, v_s, v_t, mode, flow_group, deleted, significant
            )
        except (NoRouteError, ConnectivityError) as exc:
            partial = FlowAllocation(demand, allocations, total_cost, satisfied=False)
            raise AllocationUnsatisfiableError(
                f"demand {demand} unsatisfiable, {residual} left: {exc}", partial
            ) from exc
        steps = [(str(u), str(v), k) for u, v, k in path.ecg_steps]
        holders = [
            cid
            for cid in sorted(pnet.controllers)
            if pnet.ask(coordinator, cid, "BA_LOCAL_MIN", (ba_session.session_id, steps))
        ]
        if holders:
            values = {
                cid: pnet.crypto.cipher_from_bytes(
                    pnet.ask(coordinator, cid, "BA_CAP_VALUE", ba_session.session_id)
                )
                for cid in holders
            }
            c_min = holders[0]
            for cid in holders[1:]:
                if not plain_ge(pnet, ba_session, coordinator, values[cid], values[c_min]):
                    c_min = cid
            bottleneck = pnet.ask(coordinator, c_min, "BA_CAP_REVEAL", ba_session.session_id)
            amount = min(bottleneck, residual)
        else:
            amount = residual  # nothing on the path is capacity bounded
        sub_body = (ba_session.session_id, steps, amount, delete_mode)
        for cid in pnet.controllers:
            for pair in pnet.ask(coordinator, cid, "BA_SUBTRACT", sub_body):
                deleted.add(frozenset(SwitchId.parse(s) for s in pair))
        allocations.append((path, amount))
        total_cost += amount * length
        residual -= amount
        ba_session.rounds += 1

    return FlowAllocation(demand, allocations, total_cost, satisfied=True)


def _next_path(pnet, v_s, v_t, mode, flow_group, deleted, significant):
    ecg = build_ecg(
        pnet.network,
        source=v_s,
        mode=PER_FLOW,
        flow_group=flow_group,
        drop_edges=deleted,
        restrict_to_source_component=True,
    )
    if v_t in significant and v_t not in ecg.nodes:
        raise NoRouteError(f"{v_t} separated from the residual graph")
    if len(ecg.nodes) < 2:
        raise NoRouteError("residual graph collapsed to the source")
    if mode == "cr":
        tree = run_cr(pnet, v_s, flow_group=flow_group, ecg=ecg)
        revealed = tree_to_revealed(pnet, tree)
    elif mode == "baseline":
        result = run_pspt(pnet, v_s, flow_group=flow_group, ecg=ecg)
        revealed = reveal_tree(pnet, result)
    else:
        raise ConfigurationError(f"unknown tree mode {mode!r}")
    path = establish_path(pnet, revealed, v_s, v_t)
    return path, path.cost
