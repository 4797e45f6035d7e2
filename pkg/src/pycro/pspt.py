"""Baseline privacy-preserving shortest path tree construction.

The source controller drives everything: it gathers one ciphertext per
ECG edge (foreign domains encrypt their own quoted costs and upload
them), initializes encrypted per-node indicators, then repeats for
|S|-1 iterations: compute every edge's tentative distance under
Secure-If masking, then sweep the edges in canonical order letting a
Secure-If cascade decide, obliviously, which single edge's update
sticks. Nobody, the source controller included, observes which node
joined or with which distance until the final reveal hands every
controller exactly its own nodes' results.
"""

from dataclasses import dataclass

from .errors import AuthorizationError, ConfigurationError, ProtocolAbortError
from .runtime import handler
from .secif import Indicators, run_secif, secif0_params, secif1_params, secif2_params
from .topology import PER_FLOW, EcgView, SwitchId, build_ecg


@dataclass
class PsptCipherResult:
    session: object
    ecg: object
    codebook: object
    indicators: dict  # node -> Indicators, held by the source controller
    iterations: int
    coordinator: int


@dataclass
class RevealedTree:
    session_id: str
    per_domain: dict  # domain_id -> {node: (dist, parent-or-None)}
    view: EcgView

    def dist(self, node):
        return self.per_domain[node.domain][node][0]

    def parent(self, node):
        return self.per_domain[node.domain][node][1]

    def all_nodes(self):
        return [n for dom in self.per_domain.values() for n in dom]


def _broadcast_init(pnet, session, coordinator, ecg, source, flow_group, protocol):
    summary = ecg.structure_summary()
    body = (
        session.session_id,
        summary[0],
        summary[1],
        str(source) if source else None,
        flow_group,
        protocol,
    )
    for cid in pnet.controllers:
        if cid != coordinator:
            pnet.transport.request(coordinator, cid, "ECG_INIT", body)
    _init_local(pnet.controllers[coordinator], body)


@handler("ECG_INIT")
def _init_local(ctrl, body):
    session_id, node_raw, edge_raw, source, flow_group, protocol = body
    view = EcgView.from_summary((node_raw, edge_raw))
    state = ctrl.session_state(session_id)
    state["view"] = view
    state["codebook"] = ctrl.crypto.make_codebook(view.nodes)
    state["quotes"] = ctrl.quotes_for(view.significant_of(ctrl.domain_id), flow_group)
    state["revealed"] = {}
    if protocol == "cr":
        src = SwitchId.parse(source)
        state["replica"] = {
            n: (n == src, 0 if n == src else None, None) for n in view.nodes
        }
    return True


def collect_encrypted_costs(pnet, session, coordinator, ecg):
    """One AddCipher per ECG edge at the coordinator: foreign domains
    encrypt and upload their intra quotes; the coordinator encrypts its
    own intra quotes and the public inter costs."""
    crypto = pnet.crypto
    own = pnet.controllers[coordinator]
    ciphers = {}
    wanted = {}  # cid -> [edge index]
    for e in ecg.edges:
        if e.kind == "inter":
            ciphers[e.index] = crypto.encrypt_add(e.plain_cost)
        elif e.u.domain == own.domain_id:
            quote = own.session_state(session.session_id)["quotes"][e.key()]
            ciphers[e.index] = crypto.encrypt_add(quote.cost)
        else:
            cid = pnet.network.controller_index(e.u.domain)
            wanted.setdefault(cid, []).append(e.index)
    for cid, indices in sorted(wanted.items()):
        reply = pnet.transport.request(
            coordinator, cid, "COST_UPLOAD", (session.session_id, indices)
        )
        for idx, blob in reply:
            ciphers[idx] = crypto.cipher_from_bytes(blob)
    missing = [e.index for e in ecg.edges if e.index not in ciphers]
    if missing:
        raise ProtocolAbortError(f"cost ciphertexts missing for edges {missing}")
    return ciphers


@handler("COST_UPLOAD")
def _cost_upload(ctrl, body):
    session_id, indices = body
    state = ctrl.session_state(session_id)
    view, quotes = state["view"], state["quotes"]
    out = []
    for idx in indices:
        edge = view.edges[idx - 1]
        if edge.u.domain != ctrl.domain_id or edge.kind != "intra":
            continue  # not ours to quote
        cipher = ctrl.crypto.encrypt_add(quotes[edge.key()].cost)
        out.append((idx, ctrl.crypto.cipher_bytes(cipher)))
    return out


def init_indicators(pnet, ecg, codebook, source):
    """Fresh indicators: everyone starts outside the tree at encrypted
    distance 0 with the null parent; only the source's flag says in-tree."""
    if source not in ecg.nodes:
        raise ConfigurationError(f"source {source} is not a significant node")
    crypto = pnet.crypto
    indicators = {}
    for node in ecg.nodes:
        flag = codebook.half if node == source else codebook.two
        indicators[node] = Indicators(
            crypto.encrypt_mul(flag),
            crypto.encrypt_add(0),
            crypto.encrypt_mul(codebook.element(None)),
        )
    return indicators


def pspt_iteration(pnet, session, coordinator, ecg, codebook, e_map, indicators):
    """One round: freeze every edge's tentative distance, then let the
    Secure-If sweep update exactly one node's indicators in place."""
    crypto = pnet.crypto
    sentinel = ecg.sentinel
    alphas = {}
    for e in ecg.edges:
        params = secif0_params(
            crypto,
            codebook,
            indicators[e.u].in_tree,
            indicators[e.v].in_tree,
            indicators[e.u].dist,
            indicators[e.v].dist,
            e_map[e.index],
            sentinel,
            session.coin(),
        )
        alphas[e.index] = run_secif(pnet, session, coordinator, params)[0]

    if len(ecg.edges) == 1:
        e = ecg.edges[0]
        params = secif2_params(
            crypto, codebook, e.u, e.v, indicators[e.u], indicators[e.v],
            alphas[e.index], session.coin(),
        )
        out = run_secif(pnet, session, coordinator, params)
        indicators[e.u] = Indicators(*out[0:3])
        indicators[e.v] = Indicators(*out[3:6])
        return

    # Sequential, in canonical index order, replacing indicators in place:
    # later edges compare against the frozen alphas, so the single winner's
    # fresh indicators survive the rest of the sweep untouched.
    for e in ecg.edges:
        ind_v, ind_w = indicators[e.u], indicators[e.v]
        t_a = run_secif(
            pnet,
            session,
            coordinator,
            secif2_params(crypto, codebook, e.u, e.v, ind_v, ind_w, alphas[e.index], session.coin()),
        )
        params = secif1_params(
            pnet, session, coordinator, alphas, e.index, t_a, ind_v, ind_w, session.coin()
        )
        out = run_secif(pnet, session, coordinator, params)
        indicators[e.u] = Indicators(*out[0:3])
        indicators[e.v] = Indicators(*out[3:6])


def run_pspt(pnet, source, flow_group=None, ecg=None, session=None):
    """Full baseline run; returns the encrypted result held at C_s."""
    if ecg is None:
        ecg = build_ecg(pnet.network, source=source, mode=PER_FLOW, flow_group=flow_group)
    coordinator = pnet.network.controller_index(source.domain)
    if session is None:
        session = pnet.new_session("pspt")
    codebook = pnet.crypto.make_codebook(ecg.nodes)
    _broadcast_init(pnet, session, coordinator, ecg, source, flow_group, "pspt")
    e_map = collect_encrypted_costs(pnet, session, coordinator, ecg)
    indicators = init_indicators(pnet, ecg, codebook, source)
    for _ in range(len(ecg.nodes) - 1):
        session.rounds += 1
        pspt_iteration(pnet, session, coordinator, ecg, codebook, e_map, indicators)
    return PsptCipherResult(session, ecg, codebook, indicators, len(ecg.nodes) - 1, coordinator)


def reveal_tree(pnet, result):
    """Hand every controller its own nodes' plaintext (distance, parent).

    The coordinator partially decrypts each pair and sends it to the
    owning controller, which finishes decryption locally; for the
    coordinator's own nodes a helper supplies the first decryption step
    instead, so no single party ever decrypts alone."""
    crypto = pnet.crypto
    session = result.session
    coordinator = result.coordinator
    own = pnet.controllers[coordinator]
    for node in result.ecg.nodes:
        ind = result.indicators[node]
        owner_cid = pnet.network.controller_index(node.domain)
        if owner_cid != coordinator:
            pd_g = crypto.partial_decrypt(own.shares.add, ind.dist)
            pd_h = crypto.partial_decrypt(own.shares.mul, ind.parent)
            pnet.transport.request(
                coordinator,
                owner_cid,
                "REVEAL",
                (session.session_id, str(node), crypto.pd_bytes(pd_g), crypto.pd_bytes(pd_h)),
            )
        else:
            helper = session.pick_helper(coordinator)
            pd_g_blob, pd_h_blob = pnet.transport.request(
                coordinator,
                helper,
                "PD_ASSIST",
                (crypto.cipher_bytes(ind.dist), crypto.cipher_bytes(ind.parent)),
            )
            dist = crypto.finish_decrypt(crypto.pd_from_bytes(pd_g_blob), own.shares.add)
            elem = crypto.finish_decrypt(crypto.pd_from_bytes(pd_h_blob), own.shares.mul)
            state = own.session_state(session.session_id)
            state["revealed"][node] = (dist, state["codebook"].node(elem))
    per_domain = {}
    for did in pnet.network.domain_ids:
        ctrl = pnet.controller_of(did)
        per_domain[did] = dict(ctrl.session_state(session.session_id)["revealed"])
    view = EcgView.from_summary(result.ecg.structure_summary())
    return RevealedTree(session.session_id, per_domain, view)


@handler("REVEAL")
def _reveal(ctrl, body):
    session_id, node_str, pd_g_blob, pd_h_blob = body
    crypto = ctrl.crypto
    state = ctrl.session_state(session_id)
    node = SwitchId.parse(node_str)
    if node.domain != ctrl.domain_id:
        raise AuthorizationError(f"{ctrl.domain_id} received a reveal for foreign node {node}")
    dist = crypto.finish_decrypt(crypto.pd_from_bytes(pd_g_blob), ctrl.shares.add)
    elem = crypto.finish_decrypt(crypto.pd_from_bytes(pd_h_blob), ctrl.shares.mul)
    state["revealed"][node] = (dist, state["codebook"].node(elem))
    return True


@handler("PD_ASSIST")
def _pd_assist(ctrl, body):
    crypto = ctrl.crypto
    out = []
    for blob in body:
        cipher = crypto.cipher_from_bytes(blob)
        share = ctrl.shares.add if cipher.scheme == "add" else ctrl.shares.mul
        out.append(crypto.pd_bytes(crypto.partial_decrypt(share, cipher)))
    return out
